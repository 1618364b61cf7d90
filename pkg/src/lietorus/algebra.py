"""Lie algebras given by structure constants, and their subspaces."""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .errors import InputError, NotASubalgebra, StructureError
from .field import CyclotomicNumber, FieldContext, scalar_from_str, scalar_to_str, simplify
from .linalg import ONE, ZERO, Echelon, add_scaled, matmul, nullspace, rref

Vector = list


class LieAlgebra:
    """A finite-dimensional Lie algebra over Q(zeta_N).

    ``brackets`` maps a pair ``(i, j)`` of basis indices to the expansion of
    ``[b_i, b_j]`` as ``{k: c}`` or a list of ``(k, c)``.  Pairs that are
    absent bracket to zero; a pair given in one order only is completed by
    antisymmetry.  Antisymmetry and the Jacobi identity are checked on all
    basis triples unless ``check=False``.

    ``realization`` optionally holds one square matrix per basis vector for
    matrix algebras; ``form`` is then the Gram matrix they preserve.
    """

    def __init__(
        self,
        dim: int,
        brackets: Mapping,
        labels: Sequence[str] | None = None,
        context: FieldContext | None = None,
        *,
        realization: Sequence | None = None,
        form: Sequence | None = None,
        check: bool = True,
    ):
        self.dim = int(dim)
        self.context = context or FieldContext(1)
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(self.dim))
        if len(self.labels) != self.dim:
            raise InputError("one label per basis vector is required")
        table: list[dict[int, tuple]] = [dict() for _ in range(self.dim)]
        for (i, j), terms in brackets.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise InputError(f"bracket index ({i}, {j}) out of range")
            items = terms.items() if isinstance(terms, Mapping) else terms
            acc: dict[int, object] = {}
            for k, c in items:
                c = simplify(c)
                if c:
                    acc[k] = simplify(acc.get(k, ZERO) + c)
            acc = {k: c for k, c in acc.items() if c}
            if not acc:
                continue
            if i == j:
                raise StructureError(f"[b{i}, b{i}] must vanish")
            row = tuple(sorted(acc.items()))
            if j in table[i]:
                if table[i][j] != row:
                    raise StructureError(f"conflicting entries for [b{i}, b{j}]")
                continue
            table[i][j] = row
            neg = tuple((k, -c) for k, c in row)
            if i in table[j] and table[j][i] != neg:
                raise StructureError(f"antisymmetry fails for ({i}, {j})")
            table[j][i] = neg
        self._table = table
        self.realization = None if realization is None else [[list(r) for r in m] for m in realization]
        self.form = None if form is None else [list(r) for r in form]
        self.known_cartan: list[Vector] | None = None
        self.epinglage = None
        if check:
            self.verify()

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, N={self.context.N})"

    # -- elements ---------------------------------------------------------

    def basis_vector(self, i: int) -> Vector:
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def zero(self) -> Vector:
        return [ZERO] * self.dim

    def bracket_basis(self, i: int, j: int) -> tuple:
        return self._table[i].get(j, ())

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        out = [ZERO] * self.dim
        ynz = [(j, b) for j, b in enumerate(y) if b]
        if not ynz:
            return out
        for i, a in enumerate(x):
            if not a:
                continue
            row = self._table[i]
            if not row:
                continue
            for j, b in ynz:
                terms = row.get(j)
                if terms:
                    ab = a * b
                    for k, c in terms:
                        out[k] = out[k] + ab * c
        return [simplify(t) for t in out]

    def ad(self, x: Sequence) -> list[list]:
        """Matrix of ad x; column j holds [x, b_j]."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def ad_basis(self, i: int) -> list[list]:
        m = [[ZERO] * self.dim for _ in range(self.dim)]
        for j, terms in self._table[i].items():
            for k, c in terms:
                m[k][j] = c
        return m

    def nonzero_brackets(self) -> Iterable[tuple[int, int, tuple]]:
        for i in range(self.dim):
            for j, terms in sorted(self._table[i].items()):
                if i < j:
                    yield i, j, terms

    def is_abelian(self) -> bool:
        return not any(self._table)

    # -- checks -----------------------------------------------------------

    def verify(self) -> None:
        """Antisymmetry and Jacobi on all basis triples."""
        table = self._table
        for i in range(self.dim):
            for j, terms in table[i].items():
                if table[j].get(i) != tuple((k, -c) for k, c in terms):
                    raise StructureError(f"antisymmetry fails for ({i}, {j})")
        # the bracket is alternating, so triples i < j < k suffice
        for i in range(self.dim):
            ti = table[i]
            if not ti:
                continue
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    acc: dict[int, object] = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = table[a].get(b)
                        if not inner:
                            continue
                        for m, coef in inner:
                            for r, c2 in table[m].get(c, ()):
                                acc[r] = acc.get(r, ZERO) + coef * c2
                    if any(acc.values()):
                        raise StructureError(f"Jacobi identity fails on basis triple ({i}, {j}, {k})")

    # -- derived objects --------------------------------------------------

    def over(self, context: FieldContext) -> "LieAlgebra":
        """The same algebra with a larger working field."""
        if context is self.context:
            return self
        if context.N % self.context.N:
            raise InputError(f"Q(zeta_{self.context.N}) does not embed in Q(zeta_{context.N})")
        emb = lambda c: simplify(context.embed(c)) if isinstance(c, CyclotomicNumber) else c
        new = LieAlgebra.__new__(LieAlgebra)
        new.__dict__.update(self.__dict__)
        new.context = context
        new._table = [{j: tuple((k, emb(c)) for k, c in t) for j, t in row.items()} for row in self._table]
        return new

    def span(self, vectors: Iterable[Sequence]) -> "Subspace":
        return Subspace(self, vectors)

    def full(self) -> "Subspace":
        return Subspace(self, (self.basis_vector(i) for i in range(self.dim)))

    def derived_algebra(self) -> "Subspace":
        ech = Echelon(self.dim)
        for i, j, terms in self.nonzero_brackets():
            v = [ZERO] * self.dim
            for k, c in terms:
                v[k] = c
            ech.add(v)
            if len(ech) == self.dim:
                break
        return Subspace._from_echelon(self, ech)

    def centralizer(self, x: Sequence, within: "Subspace | None" = None) -> "Subspace":
        """{y in within : [x, y] = 0}."""
        within = within or self.full()
        images = [self.bracket(x, r) for r in within.rows]
        # solve sum c_a images[a] = 0
        mat = [[images[a][k] for a in range(len(images))] for k in range(self.dim)]
        sols = nullspace(mat, len(images)) if images else []
        return Subspace(self, (within.vector(c) for c in sols))

    def ideal_closure(self, seeds: Iterable[Sequence]) -> "Subspace":
        """The ideal generated by the given vectors."""
        ech = Echelon(self.dim)
        for v in seeds:
            ech.add(v)
        frontier = [list(r) for r in ech.rows]
        while frontier and len(ech) < self.dim:
            nxt = []
            for v in frontier:
                for i in range(self.dim):
                    w = self.bracket(self.basis_vector(i), v)
                    if any(w) and ech.add(w):
                        nxt.append(w)
                        if len(ech) == self.dim:
                            break
                if len(ech) == self.dim:
                    break
            frontier = nxt
        return Subspace._from_echelon(self, ech)

    def subalgebra(self, sub: "Subspace", labels: Sequence[str] | None = None) -> "LieAlgebra":
        """The subspace as a Lie algebra in the basis ``sub.rows``.

        The result remembers its embedding in ``parent_rows``.
        """
        rows = sub.rows
        d = len(rows)
        brackets = {}
        for a in range(d):
            for b in range(a + 1, d):
                w = self.bracket(rows[a], rows[b])
                if not any(w):
                    continue
                coords = sub.coordinates(w)
                if coords is None:
                    raise NotASubalgebra(f"[r{a}, r{b}] leaves the subspace")
                brackets[(a, b)] = [(k, c) for k, c in enumerate(coords) if c]
        labels = labels or [_vector_label(r, self.labels) for r in rows]
        real = None
        if self.realization is not None:
            real = [self.matrix_of(r) for r in rows]
        out = LieAlgebra(d, brackets, labels, self.context, realization=real, form=self.form, check=False)
        out.parent = self
        out.parent_rows = [list(r) for r in rows]
        if self.known_cartan is not None:
            coords = [sub.coordinates(v) for v in self.known_cartan]
            if all(c is not None for c in coords):
                out.known_cartan = coords
        return out

    def push(self, coords: Sequence) -> Vector:
        """Image in the parent algebra of a vector of a subalgebra."""
        out = [ZERO] * self.parent.dim
        for c, r in zip(coords, self.parent_rows):
            if c:
                add_scaled(out, c, r)
        return [simplify(t) for t in out]

    # -- matrix realisations ----------------------------------------------

    def matrix_of(self, v: Sequence) -> list[list]:
        if self.realization is None:
            raise InputError("the algebra has no matrix realisation")
        n = len(self.realization[0])
        out = [[ZERO] * n for _ in range(n)]
        for c, m in zip(v, self.realization):
            if c:
                for i in range(n):
                    add_scaled(out[i], c, m[i])
        return [[simplify(x) for x in row] for row in out]

    def vector_of(self, mat: Sequence[Sequence]) -> Vector | None:
        """Coordinates of a matrix in the realised basis, or None."""
        if self.realization is None:
            raise InputError("the algebra has no matrix realisation")
        flat = [x for row in mat for x in row]
        ech = getattr(self, "_real_echelon", None)
        if ech is None:
            flat_basis = [[x for row in m for x in row] for m in self.realization]
            # coordinates via an augmented echelon: [flat | e_i]
            n = len(flat)
            aug = [fb + [ONE if k == i else ZERO for k in range(self.dim)] for i, fb in enumerate(flat_basis)]
            red, piv = rref(aug, n + self.dim)
            ech = (red, piv, n)
            self._real_echelon = ech
        red, piv, n = ech
        residual = list(flat) + [ZERO] * self.dim
        for row, p in zip(red, piv):
            if p >= n:
                break
            c = residual[p]
            if c:
                add_scaled(residual, -c, row)
        if any(residual[:n]):
            return None
        return [simplify(-x) for x in residual[n:]]

    # -- serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "N": self.context.N,
            "labels": list(self.labels),
            "brackets": [[i, j, [[k, scalar_to_str(c)] for k, c in terms]] for i, j, terms in self.nonzero_brackets()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LieAlgebra":
        try:
            ctx = FieldContext(int(data.get("N", 1)))
            brackets = {}
            for i, j, terms in data["brackets"]:
                brackets[(int(i), int(j))] = [(int(k), scalar_from_str(c, ctx)) for k, c in terms]
            return cls(int(data["dim"]), brackets, data.get("labels"), ctx)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed algebra JSON: {exc}") from exc


def _vector_label(v: Sequence, labels: Sequence[str]) -> str:
    parts = []
    for c, name in zip(v, labels):
        if not c:
            continue
        s = scalar_to_str(c)
        if s == "1/1":
            parts.append(f"+{name}")
        elif s == "-1/1":
            parts.append(f"-{name}")
        else:
            parts.append(f"+({s}){name}")
    text = "".join(parts) or "0"
    return text[1:] if text.startswith("+") else text


class Subspace:
    """A subspace of an algebra, stored as a reduced echelon basis."""

    __slots__ = ("ambient", "n", "rows", "pivots", "regular_element")

    def __init__(self, ambient: LieAlgebra | int, vectors: Iterable[Sequence] = ()):
        self.ambient = ambient if isinstance(ambient, LieAlgebra) else None
        self.n = ambient.dim if isinstance(ambient, LieAlgebra) else int(ambient)
        red, piv = rref([list(v) for v in vectors], self.n)
        self.rows = [list(r) for r in red]
        self.pivots = list(piv)
        self.regular_element = None

    @classmethod
    def _from_echelon(cls, ambient, ech: Echelon) -> "Subspace":
        sub = cls.__new__(cls)
        sub.ambient = ambient if isinstance(ambient, LieAlgebra) else None
        sub.n = ech.n
        order = sorted(range(len(ech.rows)), key=lambda k: ech.pivots[k])
        sub.rows = [list(ech.rows[k]) for k in order]
        sub.pivots = [ech.pivots[k] for k in order]
        sub.regular_element = None
        return sub

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in {self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, tuple(tuple(r) for r in self.rows)))

    def coordinates(self, v: Sequence) -> list | None:
        coords = [v[p] for p in self.pivots]
        residual = list(v)
        for c, row in zip(coords, self.rows):
            if c:
                add_scaled(residual, -c, row)
        if any(simplify(x) for x in residual):
            return None
        return [simplify(c) for c in coords]

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def vector(self, coords: Sequence) -> Vector:
        out = [ZERO] * self.n
        for c, r in zip(coords, self.rows):
            if c:
                add_scaled(out, c, r)
        return [simplify(x) for x in out]

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient or self.n, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        if not self.rows or not other.rows:
            return Subspace(self.ambient or self.n)
        # a.rows^T x = b.rows^T y
        a, b = self.rows, other.rows
        mat = [[a[i][k] for i in range(len(a))] + [-b[j][k] for j in range(len(b))] for k in range(self.n)]
        sols = nullspace(mat, len(a) + len(b))
        return Subspace(self.ambient or self.n, (self.vector(s[: len(a)]) for s in sols))

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": [[scalar_to_str(x) for x in r] for r in self.rows]}

    def is_subalgebra(self) -> bool:
        L = self.ambient
        return all(self.contains(L.bracket(a, b)) for a, b in itertools.combinations(self.rows, 2))
