"""Finite-order automorphisms, commuting tuples and the gradings they define."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from gmpy2 import mpq

from .algebra import LieAlgebra, Subspace
from .chevalley import Epinglage
from .errors import (
    ConductorTooSmall,
    ExtensionInconsistent,
    InputError,
    NonCommutingTuple,
    NotADiagramSymmetry,
    NotAnAutomorphism,
    NotInIsometryGroup,
    ZeroScalar,
)
from .field import CyclotomicNumber, FieldContext, scalar_from_str, scalar_key, scalar_to_str, simplify, zeta_of_order
from .intmat import hermite_rows, int_det, invariant_factors
from .linalg import ONE, ZERO, Echelon, identity, inverse, matmul, matvec, nullspace, rref, transpose

MAX_ORDER = 1000


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def _key(mat) -> tuple:
    return tuple(scalar_key(x) for row in mat for x in row)


class Automorphism:
    """An automorphism of ``algebra`` of finite order.

    ``matrix[i][j]`` is the coefficient of b_i in phi(b_j).  The bracket is
    checked on all basis pairs, and the order is verified (or computed when
    not declared).
    """

    def __init__(self, algebra: LieAlgebra, matrix, order: int | None = None, *, check: bool = True):
        self.algebra = algebra
        d = algebra.dim
        self.matrix = [[simplify(x) for x in row] for row in matrix]
        if len(self.matrix) != d or any(len(r) != d for r in self.matrix):
            raise NotAnAutomorphism(f"matrix must be {d}x{d}")
        if check:
            self._check_multiplicative()
        self.order = self._find_order(order)

    def __repr__(self) -> str:
        return f"Automorphism(order={self.order})"

    def _check_multiplicative(self) -> None:
        L = self.algebra
        cols = self.columns
        for i, j, terms in L.nonzero_brackets():
            lhs = [ZERO] * L.dim
            for k, c in terms:
                for r, x in enumerate(cols[k]):
                    if x:
                        lhs[r] = lhs[r] + c * x
            lhs = [simplify(t) for t in lhs]
            if lhs != L.bracket(cols[i], cols[j]):
                raise NotAnAutomorphism(f"phi([b{i}, b{j}]) != [phi b{i}, phi b{j}]")
        # pairs with vanishing bracket
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                if not L.bracket_basis(i, j) and any(L.bracket(cols[i], cols[j])):
                    raise NotAnAutomorphism(f"phi([b{i}, b{j}]) != [phi b{i}, phi b{j}]")

    @cached_property
    def columns(self) -> list[list]:
        return transpose(self.matrix)

    def _find_order(self, declared: int | None) -> int:
        d = self.algebra.dim
        ident = identity(d)
        if declared is not None:
            declared = int(declared)
            if declared < 1:
                raise NotAnAutomorphism("order must be positive")
            if self.power_matrix(declared) != ident:
                raise NotAnAutomorphism(f"phi^{declared} is not the identity")
            for k in _divisors(declared)[:-1]:
                if self.power_matrix(k) == ident:
                    raise NotAnAutomorphism(f"declared order {declared} but phi^{k} = id")
            return declared
        cur = self.matrix
        for k in range(1, MAX_ORDER + 1):
            if cur == ident:
                return k
            cur = matmul(cur, self.matrix)
        raise NotAnAutomorphism(f"no finite order up to {MAX_ORDER}")

    def power_matrix(self, k: int) -> list[list]:
        d = self.algebra.dim
        result = identity(d)
        base = self.matrix
        if k < 0:
            k %= self.order if hasattr(self, "order") else k
        while k:
            if k & 1:
                result = matmul(result, base)
            k >>= 1
            if k:
                base = matmul(base, base)
        return result

    def __pow__(self, k: int) -> "Automorphism":
        k %= self.order
        return Automorphism(self.algebra, self.power_matrix(k), self.order // math.gcd(self.order, k), check=False)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.algebra, matmul(self.matrix, other.matrix), check=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and self.matrix == other.matrix

    def __hash__(self):
        return hash(_key(self.matrix))

    def inverse(self) -> "Automorphism":
        return self ** (self.order - 1)

    def is_identity(self) -> bool:
        return self.order == 1

    def __call__(self, v: Sequence) -> list:
        return matvec(self.matrix, v)

    def fixed_dim(self) -> int:
        d = self.algebra.dim
        shifted = [[self.matrix[i][j] - (ONE if i == j else ZERO) for j in range(d)] for i in range(d)]
        return len(nullspace(shifted, d))

    def eigen_profile(self) -> list[tuple[int, int]]:
        """Multiset of (order of eigenvalue, multiplicity) over the field."""
        ctx = self.algebra.context
        if ctx.N % self.order:
            raise ConductorTooSmall(f"order {self.order} does not divide the conductor {ctx.N}")
        d = self.algebra.dim
        out = []
        z = zeta_of_order(ctx, self.order)
        for l in range(self.order):
            lam = simplify(z ** l)
            shifted = [[self.matrix[i][j] - (lam if i == j else ZERO) for j in range(d)] for i in range(d)]
            mult = len(nullspace(shifted, d))
            if mult:
                out.append((self.order // math.gcd(self.order, l), mult))
        return sorted(out)

    def to_json(self) -> dict:
        return {"N": self.algebra.context.N, "order": self.order,
                "matrix": [[scalar_to_str(x) for x in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, algebra: LieAlgebra, data: Mapping) -> "Automorphism":
        try:
            ctx = algebra.context
            if int(data.get("N", ctx.N)) and ctx.N % int(data.get("N", ctx.N)):
                raise ConductorTooSmall(f"automorphism needs Q(zeta_{data['N']})")
            mat = [[scalar_from_str(x, ctx) for x in row] for row in data["matrix"]]
            return cls(algebra, mat, data.get("order"))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed automorphism JSON: {exc}") from exc


def identity_automorphism(L: LieAlgebra) -> Automorphism:
    return Automorphism(L, identity(L.dim), 1, check=False)


# ---------------------------------------------------------------------------
# constructions


def _permutation_order(perm: Sequence[int]) -> int:
    seen, order = set(), 1
    for i in range(len(perm)):
        if i in seen:
            continue
        length, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def extend_by_brackets(L: LieAlgebra, pairs: Sequence[tuple[Sequence, Sequence]]) -> list[list]:
    """The linear map sending x to y for the given generator pairs, extended
    so that it respects brackets.  Returns the matrix (columns = images)."""
    d = L.dim
    ech = Echelon(d)
    known: list[tuple[list, list]] = []
    gens = [(list(x), list(y)) for x, y in pairs]
    for x, y in gens:
        if ech.add(x):
            known.append((x, y))
    frontier = list(known)
    while frontier and len(ech) < d:
        nxt = []
        for gx, gy in gens:
            for x, y in frontier:
                bx = L.bracket(gx, x)
                if any(bx) and ech.add(bx):
                    pair = (bx, L.bracket(gy, y))
                    known.append(pair)
                    nxt.append(pair)
        frontier = nxt
    if len(ech) < d:
        raise ExtensionInconsistent("generators do not generate the algebra")
    aug = [list(x) + list(y) for x, y in known]
    red, piv = rref(aug, 2 * d)
    if len(piv) != d or piv[-1] >= d:
        raise ExtensionInconsistent("bracket propagation is inconsistent")
    images = [row[d:] for row in red]  # image of b_i, since the left block is the identity
    return transpose(images)


def diagram_automorphism(s: LieAlgebra, ep: Epinglage, perm: Sequence[int]) -> Automorphism:
    """The automorphism permuting the épinglage generators by ``perm``."""
    perm = [int(p) for p in perm]
    l = len(ep.e)
    if sorted(perm) != list(range(l)):
        raise NotADiagramSymmetry("not a permutation of the base")
    A = ep.cartan_matrix
    if any(A[perm[i]][perm[j]] != A[i][j] for i in range(l) for j in range(l)):
        raise NotADiagramSymmetry("permutation does not preserve the Cartan matrix")
    pairs = [(ep.e[i], ep.e[perm[i]]) for i in range(l)] + [(ep.f[i], ep.f[perm[i]]) for i in range(l)]
    mat = extend_by_brackets(s, pairs)
    try:
        phi = Automorphism(s, mat, _permutation_order(perm))
    except NotAnAutomorphism as exc:
        raise ExtensionInconsistent(str(exc)) from exc
    for i in range(l):
        if phi(ep.h[i]) != [simplify(x) for x in ep.h[perm[i]]]:
            raise ExtensionInconsistent("coroots are not permuted")
    return phi


def _root_of_unity_order(x, ctx: FieldContext) -> int:
    bound = 2 * ctx.N
    for k in _divisors(bound):
        if simplify(x ** k) == 1:
            return k
    raise NotAnAutomorphism("scalar is not a root of unity; the automorphism has infinite order")


def torus_automorphism(rd, rho: Sequence) -> Automorphism:
    """Ad(rho): multiplication by rho(alpha) on each root space s_alpha.

    ``rho`` lists nonzero scalars on the base of Delta(s, h); it is extended
    multiplicatively to the root lattice.
    """
    s = rd.algebra
    ctx = s.context
    rho = [simplify(scalar_from_str(r, ctx) if isinstance(r, str) else r) for r in rho]
    if any(not r for r in rho):
        raise ZeroScalar("torus scalars must be nonzero")
    rs = rd.roots
    if len(rho) != rs.rank:
        raise InputError(f"expected {rs.rank} scalars, got {len(rho)}")
    cols, diag = [], []
    for w, sp in rd.spaces.items():
        alpha = rd.base_coords(w)
        val = ONE
        for r, a in zip(rho, alpha):
            if a:
                val = val * (r ** a if a > 0 else (1 / r) ** (-a))
        for v in sp.rows:
            cols.append(v)
            diag.append(simplify(val))
    U = transpose(cols)
    Uinv = inverse(U)
    scaled = [[U[i][j] * diag[j] for j in range(len(diag))] for i in range(len(U))]
    mat = matmul(scaled, Uinv)
    order = 1
    for v in set(diag):
        k = _root_of_unity_order(v, ctx)
        order = order * k // math.gcd(order, k)
    return Automorphism(s, mat, order)


def conjugation_automorphism(s: LieAlgebra, g) -> Automorphism:
    """c_g(x) = g x g^-1 for g in the isometry group of the defining form."""
    if s.realization is None or s.form is None:
        raise InputError("conjugation needs a matrix algebra with a defining form")
    ctx = s.context
    g = [[scalar_from_str(x, ctx) if not isinstance(x, CyclotomicNumber) else simplify(ctx.embed(x)) for x in row] for row in g]
    G = s.form
    if matmul(matmul(transpose(g), G), g) != [[simplify(x) for x in row] for row in G]:
        raise NotInIsometryGroup("g does not preserve the form")
    ginv = inverse(g)
    cols = []
    for m in s.realization:
        v = s.vector_of(matmul(matmul(g, m), ginv))
        if v is None:
            raise NotInIsometryGroup("conjugation leaves the algebra")
        cols.append(v)
    return Automorphism(s, transpose(cols))


# ---------------------------------------------------------------------------
# tuples


@dataclass(frozen=True)
class GroupStructure:
    kernel: tuple  # HNF basis rows of K
    order: int
    invariant_factors: tuple  # decreasing chain, 1s dropped

    def to_json(self) -> dict:
        return {"kernel": [list(r) for r in self.kernel], "order": self.order,
                "invariant_factors": list(self.invariant_factors)}


class AutTuple:
    """Commuting finite-order automorphisms (sigma_1, ..., sigma_n)."""

    def __init__(self, entries: Sequence[Automorphism]):
        self.entries = tuple(entries)
        if not self.entries:
            raise InputError("a tuple needs at least one automorphism")
        self.algebra = self.entries[0].algebra
        if any(e.algebra is not self.algebra for e in self.entries):
            raise InputError("all automorphisms must act on the same algebra")
        for a, b in itertools.combinations(self.entries, 2):
            if matmul(a.matrix, b.matrix) != matmul(b.matrix, a.matrix):
                raise NonCommutingTuple("tuple entries do not commute")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(e.order for e in self.entries)

    def __getitem__(self, i) -> Automorphism:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, AutTuple) and self.entries == other.entries

    def element(self, exps: Sequence[int]) -> Automorphism:
        """sigma_1^a_1 ... sigma_n^a_n."""
        mat = identity(self.algebra.dim)
        for e, a in zip(self.entries, exps):
            a %= e.order
            if a:
                mat = matmul(mat, e.power_matrix(a))
        return Automorphism(self.algebra, mat, check=False)

    @cached_property
    def elements(self) -> dict:
        """Distinct group elements keyed by the matrix, with one exponent vector each."""
        out = {}
        powers = [[e.power_matrix(k) for k in range(e.order)] for e in self.entries]
        for exps in itertools.product(*(range(m) for m in self.orders)):
            mat = identity(self.algebra.dim)
            for p, a in zip(powers, exps):
                if a:
                    mat = matmul(mat, p[a])
            out.setdefault(_key(mat), (exps, mat))
        return out

    @cached_property
    def group_structure(self) -> GroupStructure:
        return tuple_group_structure(self)

    @property
    def group_order(self) -> int:
        return self.group_structure.order

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


def tuple_power_action(sigma: AutTuple, P: Sequence[Sequence[int]]) -> AutTuple:
    """sigma^P: entry j is prod_i sigma_i^(p_ij)."""
    n = sigma.n
    if len(P) != n or any(len(r) != n for r in P):
        raise InputError(f"P must be {n}x{n}")
    out = []
    for j in range(n):
        exps = [int(P[i][j]) for i in range(n)]
        out.append(sigma.element(exps))
    return AutTuple(out)


def tuple_group_structure(sigma: AutTuple) -> GroupStructure:
    """Kernel lattice K of Z^n -> <sigma>, the group order and invariant factors."""
    n = sigma.n
    ident = _key(identity(sigma.algebra.dim))
    gens = [[m if i == j else 0 for j in range(n)] for i, m in enumerate(sigma.orders)]
    # exponents in the box mapping to the identity
    powers = [[e.power_matrix(k) for k in range(e.order)] for e in sigma.entries]
    seen = {}
    for exps in itertools.product(*(range(m) for m in sigma.orders)):
        mat = identity(sigma.algebra.dim)
        for p, a in zip(powers, exps):
            if a:
                mat = matmul(mat, p[a])
        key = _key(mat)
        if key in seen:
            gens.append([a - b for a, b in zip(exps, seen[key])])
        else:
            seen[key] = exps
    K = hermite_rows(gens)
    order = abs(int_det(K)) if len(K) == n else 0
    if order != len(seen):
        raise InputError("kernel lattice does not match the enumerated group")
    factors = sorted((f for f in invariant_factors(K) if f != 1), reverse=True)
    return GroupStructure(tuple(tuple(r) for r in K), order, tuple(factors))


# ---------------------------------------------------------------------------
# gradings


@dataclass
class CharacterGrading:
    """The grading of s by Lambda-bar = Z/(m_1) + ... + Z/(m_n) defined by sigma."""

    algebra: LieAlgebra
    modulus: tuple
    components: dict  # residue tuple -> Subspace (nonzero components only)

    def component(self, lam: Sequence[int]) -> Subspace:
        key = tuple(int(l) % m for l, m in zip(lam, self.modulus))
        return self.components.get(key, Subspace(self.algebra))

    @property
    def support(self) -> list:
        return list(self.components)

    def reduce(self, lam: Sequence[int]) -> tuple:
        return tuple(int(l) % m for l, m in zip(lam, self.modulus))

    def dims(self) -> dict:
        return {k: v.dim for k, v in self.components.items()}

    def to_json(self) -> dict:
        return {"modulus": list(self.modulus),
                "components": [{"degree": list(k), "dim": v.dim} for k, v in self.components.items()]}


def grading_by_tuple(s: LieAlgebra, sigma: AutTuple, modulus: Sequence[int] | None = None) -> CharacterGrading:
    """s^lam = {u : sigma_j u = zeta_(m_j)^(l_j) u for all j}.

    ``modulus`` defaults to the orders of the entries; any multiples of the
    orders are allowed.
    """
    ctx = s.context
    m = tuple(int(x) for x in modulus) if modulus is not None else sigma.orders
    if len(m) != sigma.n or any(mj < 1 or mj % o for mj, o in zip(m, sigma.orders)):
        raise InputError("each m_j must be a positive multiple of the order of sigma_j")
    for mj in m:
        if ctx.N % mj:
            raise ConductorTooSmall(f"order {mj} does not divide the conductor {ctx.N}")
    d = s.dim
    pieces = [((), [s.basis_vector(i) for i in range(d)])]
    for j, e in enumerate(sigma.entries):
        z = zeta_of_order(ctx, m[j])
        nxt = []
        for lam, rows in pieces:
            k = len(rows)
            images = [e(r) for r in rows]
            found = 0
            for l in range(m[j]):
                c = simplify(z ** l)
                mat = [[images[a][i] - c * rows[a][i] for a in range(k)] for i in range(d)]
                ker = nullspace(mat, k)
                if ker:
                    vecs = []
                    for coeffs in ker:
                        v = [ZERO] * d
                        for a, r in zip(coeffs, rows):
                            if a:
                                v = [x + a * y for x, y in zip(v, r)]
                        vecs.append([simplify(x) for x in v])
                    nxt.append((lam + (l,), vecs))
                    found += len(ker)
            if found != k:
                raise ConductorTooSmall("automorphism is not diagonalisable over the field")
        pieces = nxt
    comps = {lam: Subspace(s, rows) for lam, rows in pieces}
    return CharacterGrading(s, tuple(m), dict(sorted(comps.items())))


# ---------------------------------------------------------------------------
# the (A1)-(A3) checker


@dataclass
class AReport:
    A1: bool
    A2: bool | None
    A3: bool
    group_order: int
    orders: tuple
    fixed_dim: int
    fixed_simplicity: object
    cartan: Subspace | None
    delta: object | None  # RootSystem of Delta(s, h), in frame coordinates via datum
    delta_g: object | None
    relation: str
    delta_ind_is_delta_g: bool | None
    modules: dict = field(default_factory=dict)
    datum: object | None = None
    g_data: object | None = None
    grading: CharacterGrading | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.A1 and self.A2 and self.A3)

    def failures(self) -> list[str]:
        out = []
        if not self.A1:
            out.append("(A1)")
        if not self.A2:
            out.append("(A2)")
        if not self.A3:
            out.append("(A3)")
        return out

    def to_json(self) -> dict:
        out = {
            "A1": self.A1,
            "A2": self.A2,
            "A3": self.A3,
            "passed": self.passed,
            "group_order": self.group_order,
            "orders": list(self.orders),
            "fixed_dim": self.fixed_dim,
            "fixed_simplicity": self.fixed_simplicity.to_json(),
            "Delta": str(self.delta.type) if self.delta is not None else None,
            "Delta_g": str(self.delta_g.type) if self.delta_g is not None else None,
            "relation": self.relation,
            "Delta_ind_equals_Delta_g": self.delta_ind_is_delta_g,
            "violations": self.failures(),
        }
        if self.grading is not None:
            out["component_dims"] = sorted(v.dim for v in self.grading.components.values())
        if self.modules:
            out["modules"] = {",".join(map(str, k)): v.to_json() for k, v in self.modules.items()}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _frame_roots(ident) -> set:
    return set(ident.coords)


def _enlarged_frame(ident) -> set:
    from .rootsys import is_type_b

    roots = set(ident.coords)
    rs = ident.system
    if not is_type_b(rs.type):
        return roots
    nonzero = [v for v in roots if any(v)]
    norm = lambda v: rs.norm(ident.coords[v])
    m = min(norm(v) for v in nonzero)
    return roots | {tuple(2 * c for c in v) for v in nonzero if norm(v) == m}


def check_A_conditions(s: LieAlgebra, sigma: AutTuple, h: Subspace | None = None) -> AReport:
    """Evaluate (A1)-(A3) for sigma on s and compare Delta with Delta_g."""
    from .structure import (
        analyze_module,
        cartan_subalgebra,
        is_simple,
        root_space_decomposition,
        subalgebra_data,
    )

    grading = grading_by_tuple(s, sigma)
    zero = tuple(0 for _ in sigma.orders)
    g = grading.component(zero)
    gs = sigma.group_structure
    a3 = gs.order == math.prod(sigma.orders)
    notes = []
    if g.dim == 0:
        simp = None
        from .structure import SimplicityResult

        simp = SimplicityResult(False, "zero algebra")
        return AReport(False, None, a3, gs.order, sigma.orders, 0, simp, None, None, None, "neither", None,
                       grading=grading, notes=["fixed algebra is zero"])
    g_alg = s.subalgebra(g)
    simp = is_simple(g_alg)
    if h is None:
        hg = cartan_subalgebra(g_alg)
        h = Subspace(s, (g_alg.push(r) for r in hg.rows))
    elif not g.contains_space(h):
        raise InputError("the supplied Cartan subalgebra is not inside the fixed algebra")
    datum = root_space_decomposition(s, h)
    delta = datum.roots if datum.is_root_system else None
    if delta is None:
        notes.append(f"Delta(s,h) is not a root system: {datum.failure}")
    a2 = None
    modules = {}
    delta_g = None
    relation = "neither"
    ind_ok = None
    g_data = None
    if simp.simple and datum.frame is not None:
        g_data = subalgebra_data(g, h, datum.frame, datum.kappa_h)
        delta_g = g_data.datum.roots
        a2 = True
        for lam, V in grading.components.items():
            if lam == zero:
                continue
            rep = analyze_module(g, h, V, data=g_data)
            modules[lam] = rep
            if not rep.a2_shape:
                a2 = False
        if delta is not None:
            d_set = _frame_roots(datum.identified)
            g_set = _frame_roots(g_data.datum.identified)
            if d_set == g_set:
                relation = "Delta = Delta_g"
            elif d_set == _enlarged_frame(g_data.datum.identified):
                relation = "Delta = (Delta_g)_en"
            ind = {v for v in d_set if not (any(v) and tuple(c / 2 for c in v) in d_set)}
            ind_ok = ind == g_set
    return AReport(bool(simp.simple), a2, a3, gs.order, sigma.orders, g.dim, simp, h, delta, delta_g, relation,
                   ind_ok, modules, datum, g_data, grading, notes)
