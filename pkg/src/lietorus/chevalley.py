"""Chevalley bases and orthogonal Lie algebras."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .algebra import LieAlgebra, Subspace
from .errors import InputError, InvalidType, SingularGram
from .field import CyclotomicNumber, FieldContext, scalar_from_str, scalar_to_str, simplify
from .linalg import ONE, ZERO, determinant, nullspace, rref
from .rootsys import RootSystem, RootSystemType, build_root_system


@dataclass
class Epinglage:
    """Split Cartan subalgebra, base and matching (e_i, f_i, h_i)."""

    cartan: Subspace
    base: tuple
    e: list
    f: list
    h: list
    cartan_matrix: tuple

    def check_serre(self, L: LieAlgebra) -> bool:
        """[e_i, f_j] = delta_ij h_i and the Serre relations."""
        l = len(self.e)
        for i in range(l):
            for j in range(l):
                ef = L.bracket(self.e[i], self.f[j])
                if i == j:
                    if ef != [simplify(x) for x in self.h[i]]:
                        return False
                elif any(ef):
                    return False
                he = L.bracket(self.h[i], self.e[j])
                if he != [simplify(self.cartan_matrix[j][i] * x) for x in self.e[j]]:
                    return False
                if i != j:
                    k = 1 - self.cartan_matrix[j][i]
                    for gen in (self.e, self.f):
                        v = gen[j]
                        for _ in range(k):
                            v = L.bracket(gen[i], v)
                        if any(v):
                            return False
        return True


class _Structure:
    """Carter's sign convention: N = +(p+1) on extraspecial pairs."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.pos = sorted(rs.positive, key=lambda r: (sum(r), tuple(-c for c in r)))
        self.index = {r: k for k, r in enumerate(self.pos)}
        self.roots = rs.root_set
        self.cache: dict = {}
        self.extraspecial: dict = {}
        for xi in self.pos:
            if sum(xi) == 1:
                continue
            for a in self.pos:
                b = tuple(x - y for x, y in zip(xi, a))
                if b in self.roots and any(b) and self.index.get(b, -1) > self.index[a]:
                    self.extraspecial[xi] = (a, b)
                    break

    def _p(self, a, b) -> int:
        """max p with b - p a a root."""
        p = 0
        while tuple(y - (p + 1) * x for x, y in zip(a, b)) in self.roots:
            p += 1
        return p

    def ip(self, a, b):
        return self.rs.form(a, b)

    def N(self, a, b) -> mpq:
        key = (a, b)
        if key in self.cache:
            return self.cache[key]
        c = tuple(x + y for x, y in zip(a, b))
        if c not in self.roots or not any(c) or not any(a) or not any(b):
            val = ZERO
        else:
            apos = all(x >= 0 for x in a)
            bpos = all(x >= 0 for x in b)
            neg = lambda r: tuple(-x for x in r)
            if apos and bpos:
                if self.index[a] > self.index[b]:
                    val = -self.N(b, a)
                else:
                    val = self._special(a, b, c)
            elif not apos and not bpos:
                val = -self.N(neg(a), neg(b))
            elif not apos:
                val = -self.N(b, a)
            else:
                if all(x >= 0 for x in c):
                    val = -self.ip(c, c) / self.ip(a, a) * self.N(neg(b), c)
                else:
                    val = self.ip(c, c) / self.ip(b, b) * self.N(neg(c), a)
        self.cache[key] = mpq(val)
        return self.cache[key]

    def _special(self, a, b, xi):
        a1, b1 = self.extraspecial[xi]
        if (a, b) == (a1, b1):
            return mpq(self._p(a, b) + 1)
        sub = lambda u, v: tuple(x - y for x, y in zip(u, v))
        neg = lambda r: tuple(-x for x in r)
        total = ZERO
        d1 = sub(b, a1)
        if d1 in self.roots and any(d1):
            total += self.N(b, neg(a1)) * self.N(a, neg(b1)) / self.ip(d1, d1)
        d2 = sub(a, a1)
        if d2 in self.roots and any(d2):
            total += self.N(neg(a1), a) * self.N(b, neg(b1)) / self.ip(d2, d2)
        return self.ip(xi, xi) / self.N(a1, b1) * total


@lru_cache(maxsize=None)
def _chevalley(family: str, rank: int):
    t = RootSystemType(family, rank)
    if not t.reduced:
        raise InvalidType("Chevalley bases exist only for reduced types")
    rs = build_root_system(t)
    st = _Structure(rs)
    l = rs.rank
    pos = st.pos
    roots = pos + [tuple(-x for x in r) for r in pos]
    dim = l + len(roots)
    idx = {r: l + k for k, r in enumerate(roots)}
    labels = [f"h{i + 1}" for i in range(l)]
    labels += ["e" + ("+" if k < len(pos) else "-") + "(" + ",".join(str(abs(x)) for x in r) + ")" for k, r in enumerate(roots)]
    simple_norm = [rs.norm(rs.base[i]) for i in range(l)]
    brackets = {}
    for i in range(l):
        for r in roots:
            n = rs.pairing(r, rs.base[i])
            if n:
                brackets[(i, idx[r])] = [(idx[r], mpq(n))]
    for a in roots:
        for b in roots:
            if idx[a] >= idx[b]:
                continue
            c = tuple(x + y for x, y in zip(a, b))
            if not any(c):
                # [e_a, e_-a] = h_a, the coroot in simple coroot coordinates
                na = rs.norm(a)
                brackets[(idx[a], idx[b])] = [(i, mpq(a[i]) * simple_norm[i] / na) for i in range(l) if a[i]]
            elif c in rs.root_set:
                brackets[(idx[a], idx[b])] = [(idx[c], st.N(a, b))]
    L = LieAlgebra(dim, brackets, labels, FieldContext(1))
    unit = L.basis_vector
    cartan = Subspace(L, (unit(i) for i in range(l)))
    ep = Epinglage(
        cartan=cartan,
        base=rs.base,
        e=[unit(idx[b]) for b in rs.base],
        f=[unit(idx[tuple(-x for x in b)]) for b in rs.base],
        h=[unit(i) for i in range(l)],
        cartan_matrix=rs.cartan_matrix,
    )
    L.known_cartan = [unit(i) for i in range(l)]
    L.epinglage = ep
    L.root_system = rs
    L.root_index = idx
    return L, ep


def chevalley_basis(t: RootSystemType | str) -> tuple[LieAlgebra, Epinglage]:
    """Split simple Lie algebra of a reduced type with its Chevalley basis.

    Basis order: h_1..h_l, then e_alpha for positive roots by height, then
    the negative roots in the same order.  Structure constants are integers.
    """
    if isinstance(t, str):
        t = RootSystemType.parse(t)
    return _chevalley(t.family, t.rank)


def _matrix_label(m) -> str:
    parts = []
    n = len(m)
    for i in range(n):
        for j in range(n):
            c = m[i][j]
            if not c:
                continue
            name = f"e{i + 1}{j + 1}" if n < 10 else f"e{i + 1},{j + 1}"
            s = scalar_to_str(c)
            if s == "1/1":
                parts.append("+" + name)
            elif s == "-1/1":
                parts.append("-" + name)
            else:
                parts.append(f"+({s}){name}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def orthogonal_algebra(gram, context: FieldContext | None = None) -> LieAlgebra:
    """o(f) = {x : x^T G + G x = 0} for a symmetric invertible Gram matrix G.

    The basis is the reduced echelon basis of the solution space, with
    matrices flattened row by row, so every basis matrix has a leading
    entry 1 at its first nonzero position.
    """
    ctx = context or FieldContext(1)
    G = [[scalar_from_str(x, ctx) if not isinstance(x, CyclotomicNumber) else simplify(ctx.embed(x)) for x in row] for row in gram]
    n = len(G)
    if any(len(r) != n for r in G):
        raise InputError("Gram matrix must be square")
    if any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
        raise InputError("Gram matrix must be symmetric")
    if not determinant(G):
        raise SingularGram("Gram matrix is singular")
    # unknown x_{ij} at index i*n + j; equation (i, j): sum_k x_ki G_kj + G_ik x_kj = 0
    eqs = []
    for i in range(n):
        for j in range(i, n):
            row = [ZERO] * (n * n)
            for k in range(n):
                if G[k][j]:
                    row[k * n + i] = row[k * n + i] + G[k][j]
                if G[i][k]:
                    row[k * n + j] = row[k * n + j] + G[i][k]
            eqs.append(row)
    sols = nullspace(eqs, n * n)
    basis, piv = rref(sols, n * n)
    mats = [[b[i * n:(i + 1) * n] for i in range(n)] for b in basis]
    d = len(mats)
    brackets = {}
    for a in range(d):
        for b in range(a + 1, d):
            X, Y = mats[a], mats[b]
            comm = [[simplify(sum((X[i][k] * Y[k][j] - Y[i][k] * X[k][j] for k in range(n)), ZERO)) for j in range(n)] for i in range(n)]
            flat = [x for row in comm for x in row]
            # reduced echelon basis: coordinates are the entries at the pivots
            coords = [flat[p] for p in piv]
            terms = [(k, c) for k, c in enumerate(coords) if c]
            if terms:
                brackets[(a, b)] = terms
    L = LieAlgebra(d, brackets, [_matrix_label(m) for m in mats], ctx, realization=mats, form=G)
    for m, v in zip(mats, (L.basis_vector(i) for i in range(d))):
        if L.vector_of(m) != v:
            raise InputError("internal error: realisation is not faithful")
    return L
