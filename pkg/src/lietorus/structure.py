"""Killing forms, Cartan subalgebras, root data, simplicity and modules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .algebra import LieAlgebra, Subspace
from .errors import (
    CheckFailed,
    FieldTooSmall,
    LieTorusError,
    NoRegularElementFound,
    NonSplitCartan,
    NonSplittingPolynomial,
    NonSplitWeights,
    NotAdDiagonalizable,
    NotARootSystem,
    NotStable,
)
from .field import CyclotomicNumber, scalar_key, scalar_to_str, simplify
from .linalg import ONE, ZERO, Echelon, add_scaled, charpoly, inverse, nullspace, rank
from .rootsys import Identified, RootSystem, analyse_vectors, derive_variants, is_type_b


# ---------------------------------------------------------------------------
# Killing form


def killing_form(L: LieAlgebra) -> list[list]:
    """kappa(b_i, b_j) = trace(ad b_i ad b_j)."""
    d = L.dim
    table = L._table
    out = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            acc = ZERO
            # sum over k of coefficient of b_k in [b_i, [b_j, b_k]]
            tj = table[j]
            for k, inner in tj.items():
                for m, c in inner:
                    for r, c2 in table[i].get(m, ()):
                        if r == k:
                            acc = acc + c * c2
            out[i][j] = out[j][i] = simplify(acc)
    return out


def killing_value(L: LieAlgebra, kappa, x: Sequence, y: Sequence):
    acc = ZERO
    for i, a in enumerate(x):
        if a:
            row = kappa[i]
            for j, b in enumerate(y):
                if b and row[j]:
                    acc = acc + a * b * row[j]
    return simplify(acc)


# ---------------------------------------------------------------------------
# simultaneous eigenspaces


def _eigen_split(L: LieAlgebra, x: Sequence, rows: list[list]) -> list[tuple[object, list[list]]]:
    """Eigenspaces of ad x on span(rows), which must be ad x stable.

    Returns (eigenvalue, vectors) pairs in root order.  Raises
    NotAdDiagonalizable when ad x is not split semisimple there.
    """
    ech = Echelon(L.dim, rows)
    basis = ech.rows
    k = len(basis)
    if k == 0:
        return []
    images = [L.bracket(x, b) for b in basis]
    cols = []
    for im in images:
        c = ech.coordinates(im)
        if c is None:
            raise NotAdDiagonalizable("subspace is not stable under the operator")
        cols.append(c)
    mat = [[cols[j][i] for j in range(k)] for i in range(k)]
    if all(not mat[i][j] for i in range(k) for j in range(k) if i != j):
        groups: dict = {}
        for i in range(k):
            groups.setdefault(simplify(mat[i][i]), []).append(basis[i])
        return sorted(groups.items(), key=lambda kv: scalar_key(kv[0]))
    try:
        from .field import split_into_linear_factors

        roots = split_into_linear_factors(charpoly(mat, L.context))
    except NonSplittingPolynomial as exc:
        raise NotAdDiagonalizable(f"eigenvalues do not lie in Q(zeta_{L.context.N})") from exc
    out = []
    total = 0
    for lam, _ in roots:
        lam = simplify(lam)
        shifted = [[mat[i][j] - lam if i == j else mat[i][j] for j in range(k)] for i in range(k)]
        ker = nullspace(shifted, k)
        total += len(ker)
        vecs = []
        for c in ker:
            v = [ZERO] * L.dim
            for a, b in zip(c, basis):
                if a:
                    add_scaled(v, a, b)
            vecs.append([simplify(t) for t in v])
        out.append((lam, vecs))
    if total != k:
        raise NotAdDiagonalizable("operator is not semisimple")
    return out


def joint_eigenspaces(L: LieAlgebra, hvecs: Sequence[Sequence], space: Subspace | None = None) -> dict:
    """Weight spaces of span(hvecs) acting on ``space`` by ad.

    Keys are weight tuples (values on hvecs), values are Subspaces.
    """
    rows = space.rows if space is not None else [L.basis_vector(i) for i in range(L.dim)]
    pieces = [((), [list(r) for r in rows])]
    for x in hvecs:
        nxt = []
        for w, vecs in pieces:
            for lam, sub in _eigen_split(L, x, vecs):
                nxt.append((w + (lam,), sub))
        pieces = nxt
    out = {w: Subspace(L, vecs) for w, vecs in pieces}
    return dict(sorted(out.items(), key=lambda kv: tuple(scalar_key(c) for c in kv[0])))


# ---------------------------------------------------------------------------
# Cartan subalgebras


def _candidates(k: int, limit: int = 400):
    """Small integer coefficient vectors by growing support."""
    count = 0
    coefs = [(1,), (1, 1), (1, -1), (1, 2), (1, -2), (2, 1), (2, -1), (1, 1, 1), (1, -1, 1), (1, 2, 3)]
    for size in (1, 2, 3):
        patterns = [c for c in coefs if len(c) == size]
        for support in itertools.combinations(range(k), size):
            for pat in patterns:
                v = [0] * k
                for s, c in zip(support, pat):
                    v[s] = c
                yield v
                count += 1
                if count >= limit:
                    return


def _small_vectors(r: int, bound: int, limit: int = 20000):
    """Nonzero integer vectors with entries in [-bound, bound], by L1 norm."""

    def fixed_norm(k, n):
        if k == 0:
            if n == 0:
                yield ()
            return
        for a in range(-min(n, bound), min(n, bound) + 1):
            for rest in fixed_norm(k - 1, n - abs(a)):
                yield (a,) + rest

    count = 0
    for n in range(1, r * bound + 1):
        for v in fixed_norm(r, n):
            yield v
            count += 1
            if count >= limit:
                return


def _is_split_semisimple(L: LieAlgebra, x: Sequence) -> bool:
    try:
        _eigen_split(L, x, [L.basis_vector(i) for i in range(L.dim)])
        return True
    except NotAdDiagonalizable:
        return False


def _commutes(L: LieAlgebra, vecs: Sequence[Sequence]) -> bool:
    return all(not any(L.bracket(a, b)) for a, b in itertools.combinations(vecs, 2))


def cartan_subalgebra(g: LieAlgebra) -> Subspace:
    """A split Cartan subalgebra, with a regular element attached.

    Repeatedly replaces K (initially g) by the centraliser in K of a
    non-central element that is split semisimple on g, until K is abelian;
    then searches for x in K whose centraliser is exactly K.
    """
    if g.known_cartan is not None:
        K = Subspace(g, g.known_cartan)
    else:
        K = g.full()
        while not _commutes(g, K.rows):
            chosen = None
            nonsplit = False
            for c in _candidates(K.dim):
                x = K.vector(c)
                if all(not any(g.bracket(x, r)) for r in K.rows):
                    continue
                try:
                    _eigen_split(g, x, [g.basis_vector(i) for i in range(g.dim)])
                except NotAdDiagonalizable as exc:
                    nonsplit = nonsplit or isinstance(exc.__cause__, NonSplittingPolynomial)
                    continue
                chosen = x
                break
            if chosen is None:
                raise NonSplitCartan("no split semisimple element found in the centraliser chain")
            K = g.centralizer(chosen, K)
    return _attach_regular(g, K)


def _attach_regular(g: LieAlgebra, K: Subspace) -> Subspace:
    try:
        spaces = joint_eigenspaces(g, K.rows)
    except NotAdDiagonalizable as exc:
        raise NonSplitCartan(str(exc)) from exc
    zero = tuple(ZERO for _ in K.rows)
    if zero not in spaces or spaces[zero] != K:
        raise NonSplitCartan("the candidate is not self-centralising")
    weights = [w for w in spaces if any(w)]
    r = K.dim
    for bound in (3, 5):
        for c in _small_vectors(r, bound):
            if all(simplify(sum((ci * wi for ci, wi in zip(c, w)), ZERO)) for w in weights):
                x = K.vector(c)
                if g.centralizer(x) == K:
                    K.regular_element = x
                    return K
    raise NoRegularElementFound("no regular element with small coefficients")


# ---------------------------------------------------------------------------
# weights and root data


@dataclass
class WeightFrame:
    """Rational coordinates on the weights, with the induced form."""

    basis: list
    form_inverse: list  # inverse of kappa on the Cartan basis
    gram: list

    @classmethod
    def build(cls, weights: Iterable[tuple], kappa_h: list[list]) -> "WeightFrame":
        ws = sorted({w for w in weights if any(w)}, key=lambda w: tuple(scalar_key(c) for c in w), reverse=True)
        ech = Echelon(len(kappa_h))
        basis = []
        for w in ws:
            if ech.add(list(w)):
                basis.append(w)
        try:
            kinv = inverse(kappa_h)
        except ZeroDivisionError as exc:
            raise NotARootSystem("the form is degenerate on the Cartan subalgebra") from exc
        gram = [[_form(a, b, kinv) for b in basis] for a in basis]
        for row in gram:
            for x in row:
                if isinstance(simplify(x), CyclotomicNumber):
                    raise NonSplitWeights("weights span no rational form")
        frame = cls(basis, kinv, [[simplify(x) for x in row] for row in gram])
        frame._solve = inverse([[b[p] for p in _pivots(basis)] for b in basis]) if basis else []
        frame._piv = _pivots(basis)
        return frame

    def coords(self, w: Sequence) -> tuple:
        if not self.basis:
            if any(w):
                raise NonSplitWeights("nonzero weight outside an empty frame")
            return ()
        wp = [w[p] for p in self._piv]
        k = len(self.basis)
        c = [simplify(sum((wp[a] * self._solve[a][i] for a in range(k)), ZERO)) for i in range(k)]
        back = [simplify(sum((c[i] * self.basis[i][j] for i in range(k)), ZERO)) for j in range(len(w))]
        if back != [simplify(x) for x in w]:
            raise NonSplitWeights(f"weight {w} is outside the span of the frame")
        if any(isinstance(x, CyclotomicNumber) for x in c):
            raise NonSplitWeights("weights are not rational combinations of each other")
        return tuple(mpq(x) for x in c)

    def weight(self, coords: Sequence) -> tuple:
        n = len(self.form_inverse)
        return tuple(simplify(sum((c * b[j] for c, b in zip(coords, self.basis)), ZERO)) for j in range(n))


def _pivots(basis):
    ech = Echelon(len(basis[0]) if basis else 0, basis)
    return sorted(ech.pivots)


def _form(a, b, kinv):
    acc = ZERO
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y and kinv[i][j]:
                    acc = acc + x * kinv[i][j] * y
    return simplify(acc)


@dataclass
class RootDatum:
    """Weight-space decomposition of an algebra under a toral subalgebra."""

    algebra: LieAlgebra
    cartan: Subspace
    spaces: dict  # weight tuple -> Subspace
    kappa_h: list
    frame: WeightFrame | None = None
    identified: Identified | None = None
    failure: str | None = None

    @property
    def weights(self) -> list:
        return list(self.spaces)

    @property
    def is_root_system(self) -> bool:
        return self.identified is not None

    @property
    def roots(self) -> RootSystem:
        if self.identified is None:
            raise NotARootSystem(self.failure or "weights do not form a root system")
        return self.identified.system

    def base_coords(self, w: Sequence) -> tuple:
        return self.identified.base_coords(self.frame.coords(w))

    def weight_of(self, base: Sequence) -> tuple:
        simple = self.identified.simple
        c = [sum((b * s[j] for b, s in zip(base, simple)), mpq(0)) for j in range(len(simple[0]))] if simple else []
        return self.frame.weight(c)

    def space(self, base: Sequence) -> Subspace:
        w = self.weight_of(base)
        return self.spaces.get(w, Subspace(self.algebra))

    def to_json(self) -> dict:
        out = {"weights": [[scalar_to_str(c) for c in w] for w in self.spaces],
               "dims": [s.dim for s in self.spaces.values()]}
        if self.identified is not None:
            out["type"] = str(self.roots.type)
        else:
            out["failure"] = self.failure
        return out


def cartan_killing(L: LieAlgebra, spaces: dict, r: int) -> list[list]:
    """kappa restricted to h from the weights: sum over weights of dim * w w^T."""
    out = [[ZERO] * r for _ in range(r)]
    for w, sp in spaces.items():
        d = sp.dim
        for a in range(r):
            if w[a]:
                for b in range(r):
                    if w[b]:
                        out[a][b] = out[a][b] + d * w[a] * w[b]
    return [[simplify(x) for x in row] for row in out]


def root_space_decomposition(s: LieAlgebra, h: Subspace, *, kappa_h=None, frame: WeightFrame | None = None,
                             space: Subspace | None = None) -> RootDatum:
    """Joint eigenspaces of ad h on s (or on an ad h-stable ``space``).

    Weights are tuples of eigenvalues on the echelon basis of h.  The
    weights are identified as a root system in rational coordinates with
    the form induced by the Killing form of s on h.
    """
    if not _commutes(s, h.rows):
        raise NotAdDiagonalizable("the toral candidate is not abelian")
    spaces = joint_eigenspaces(s, h.rows, space)
    if space is None:
        if sum(sp.dim for sp in spaces.values()) != s.dim:
            raise NotAdDiagonalizable("weight spaces do not fill the algebra")
        _check_grading(s, spaces)
    if kappa_h is None:
        kappa_h = cartan_killing(s, spaces, h.dim)
    rd = RootDatum(s, h, spaces, kappa_h)
    try:
        rd.frame = frame or WeightFrame.build(spaces, kappa_h)
        coords = [rd.frame.coords(w) for w in spaces]
        rd.identified = analyse_vectors(coords, rd.frame.gram)
    except (NotARootSystem, NonSplitWeights) as exc:
        rd.failure = str(exc)
    except LieTorusError as exc:  # NotIrreducible and friends
        rd.failure = f"{type(exc).__name__}: {exc}"
    return rd


def _check_grading(s: LieAlgebra, spaces: dict) -> None:
    items = list(spaces.items())
    for wa, sa in items:
        for wb, sb in items:
            target = tuple(simplify(x + y) for x, y in zip(wa, wb))
            tsp = spaces.get(target)
            for a in sa.rows:
                for b in sb.rows:
                    v = s.bracket(a, b)
                    if any(v) and (tsp is None or not tsp.contains(v)):
                        raise CheckFailed("[s_a, s_b] is not contained in s_(a+b)")


# ---------------------------------------------------------------------------
# simplicity


@dataclass
class SimplicityResult:
    simple: bool
    reason: str
    certificate: Subspace | None = None

    def __bool__(self) -> bool:
        return self.simple

    def to_json(self) -> dict:
        out = {"simple": self.simple, "reason": self.reason}
        if self.certificate is not None:
            out["certificate_dim"] = self.certificate.dim
        return out


def is_simple(L: LieAlgebra) -> SimplicityResult:
    """Decide simplicity with a certificate.

    A proper nonzero ideal is returned when one is found.  For a semisimple
    algebra every root vector lies in exactly one simple ideal, so the ideal
    generated by a single root vector is all of L exactly when L is simple.
    """
    if L.dim == 0:
        return SimplicityResult(False, "zero algebra")
    if L.is_abelian():
        return SimplicityResult(False, "abelian", None if L.dim == 1 else L.span([L.basis_vector(0)]))
    der = L.derived_algebra()
    if der.dim < L.dim:
        return SimplicityResult(False, "derived algebra is a proper ideal", der)
    kappa = killing_form(L)
    rad = nullspace(kappa, L.dim)
    if rad:
        return SimplicityResult(False, "Killing form is degenerate; its radical is an ideal", L.span(rad))
    h = cartan_subalgebra(L)
    spaces = joint_eigenspaces(L, h.rows)
    root_vec = next(sp.rows[0] for w, sp in spaces.items() if any(w))
    ideal = L.ideal_closure([root_vec])
    if ideal.dim < L.dim:
        return SimplicityResult(False, "the ideal generated by a root vector is proper", ideal)
    return SimplicityResult(True, "semisimple and a root vector generates L", ideal)


# ---------------------------------------------------------------------------
# modules


@dataclass
class Summand:
    highest_weight: tuple  # base coordinates of the highest weight
    dimension: int
    identity: str
    space: Subspace
    weights: dict  # base coords -> multiplicity
    condition_m: bool

    def to_json(self) -> dict:
        return {"highest_weight": list(self.highest_weight), "dimension": self.dimension, "identity": self.identity,
                "condition_M": self.condition_m}


@dataclass
class ModuleReport:
    summands: list
    multiplicity_free_nonzero: bool
    a2_shape: bool
    weights_consistent: bool
    weights: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"summands": [s.to_json() for s in self.summands],
                "multiplicity_free_nonzero": self.multiplicity_free_nonzero,
                "A2_shape": self.a2_shape}


@dataclass
class SubalgebraData:
    """Root data of a split simple subalgebra g of s with respect to h."""

    g: Subspace
    h: Subspace
    datum: RootDatum
    positive_vectors: list  # e_i for the simple roots
    variants: object


def subalgebra_data(g: Subspace, h: Subspace, frame: WeightFrame, kappa_h) -> SubalgebraData:
    s = g.ambient
    rd = root_space_decomposition(s, h, kappa_h=kappa_h, frame=frame, space=g)
    if not rd.is_root_system:
        raise NonSplitWeights(f"g has no root system with respect to h: {rd.failure}")
    rs = rd.roots
    e = []
    for b in rs.base:
        sp = rd.space(b)
        if sp.dim != 1:
            raise NonSplitWeights("simple root space of g is not one-dimensional")
        e.append(sp.rows[0])
    return SubalgebraData(g, h, rd, e, derive_variants(rs))


def analyze_module(g, h: Subspace, V: Subspace, *, frame: WeightFrame | None = None, kappa_h=None,
                   data: SubalgebraData | None = None) -> ModuleReport:
    """Decompose a g-stable subspace V into irreducible summands.

    ``g`` is a Subspace (a subalgebra of the ambient algebra of V) or the
    ambient LieAlgebra itself.  Summands are generated by highest weight
    vectors, i.e. the joint kernels of the simple root vectors of g on each
    weight space of V.
    """
    s = V.ambient
    if isinstance(g, LieAlgebra):
        g = g.full()
    for x in g.rows:
        for v in V.rows:
            if not V.contains(s.bracket(x, v)):
                raise NotStable("V is not stable under g")
    if data is None:
        if kappa_h is None or frame is None:
            spaces = joint_eigenspaces(s, h.rows, g)
            kappa_h = kappa_h or cartan_killing(s, spaces, h.dim)
            frame = frame or WeightFrame.build(spaces, kappa_h)
        data = subalgebra_data(g, h, frame, kappa_h)
    frame = data.datum.frame
    ident = data.datum.identified
    rs = ident.system
    var = data.variants
    try:
        vspaces = joint_eigenspaces(s, h.rows, V)
    except NotAdDiagonalizable as exc:
        raise NonSplitWeights(str(exc)) from exc

    def to_base(w):
        c = frame.coords(w)
        # rational coordinates in the simple roots of g
        simple = ident.simple
        l = len(simple)
        if l == 0:
            return ()
        sub = [[simple[i][p] for p in range(len(c))] for i in range(l)]
        sol = _solve_rows(sub, list(c))
        if sol is None:
            raise NonSplitWeights(f"weight {w} is not in the span of the roots of g")
        return tuple(sol)

    vweights = {to_base(w): sp for w, sp in vspaces.items()}
    summands = []
    used = Echelon(s.dim)
    for mu in sorted(vweights, key=lambda c: (-sum(c), tuple(-x for x in c))):
        sp = vweights[mu]
        # highest weight vectors: joint kernel of ad e_i on V_mu
        if data.positive_vectors:
            mat = []
            for e in data.positive_vectors:
                imgs = [s.bracket(e, r) for r in sp.rows]
                mat.extend([[imgs[a][k] for a in range(len(imgs))] for k in range(s.dim)])
            ker = nullspace(mat, sp.dim)
        else:
            ker = [[ONE if i == a else ZERO for i in range(sp.dim)] for a in range(sp.dim)]
        for c in ker:
            v = sp.vector(c)
            if not used.add(v):
                continue
            closure = _module_closure(s, g.rows, v)
            for r in closure.rows:
                used.add(r)
            summands.append(_summand(s, h, closure, mu, data, to_base))
    if sum(x.dimension for x in summands) != V.dim:
        raise CheckFailed("summand dimensions do not add up to dim V")
    mult_free = all(sp.dim == 1 for mu, sp in vweights.items() if any(mu))
    nontrivial = [x for x in summands if x.dimension > 1 or any(x.highest_weight)]
    a2 = len(nontrivial) == 0 or (len(nontrivial) == 1 and nontrivial[0].condition_m)
    consistent = all(_expected_weights_ok(x, rs, var) for x in summands)
    return ModuleReport(summands, mult_free, a2, consistent,
                        {mu: sp.dim for mu, sp in vweights.items()})


def _solve_rows(rows, target):
    """Rational x with sum x_i rows[i] = target, or None."""
    from .linalg import rref as _rref

    l = len(rows)
    n = len(target)
    aug = [[rows[i][j] for i in range(l)] + [target[j]] for j in range(n)]
    red, piv = _rref(aug, l + 1)
    if l in piv:
        return None
    x = [mpq(0)] * l
    for row, p in zip(red, piv):
        x[p] = row[l]
    return [mpq(simplify(t)) for t in x]


def _module_closure(s: LieAlgebra, gens: Sequence[Sequence], v: Sequence) -> Subspace:
    ech = Echelon(s.dim, [v])
    frontier = [list(ech.rows[0])]
    while frontier:
        nxt = []
        for u in frontier:
            for x in gens:
                w = s.bracket(x, u)
                if any(w) and ech.add(w):
                    nxt.append(w)
        frontier = nxt
    return Subspace._from_echelon(s, ech)


def _summand(s, h, space: Subspace, mu, data: SubalgebraData, to_base) -> Summand:
    spaces = joint_eigenspaces(s, h.rows, space)
    weights = {to_base(w): sp.dim for w, sp in spaces.items()}
    var = data.variants
    rs = data.datum.roots
    if not any(mu):
        identity = "trivial" if space.dim == 1 else "other"
    elif tuple(mu) == var.theta:
        identity = "adjoint"
    elif tuple(mu) == var.theta_sh:
        identity = "little_adjoint"
    elif tuple(mu) == tuple(2 * c for c in var.theta_sh):
        identity = "symmetric"
    else:
        identity = "other"
    en = var.en.root_set
    in_en = all(all(mpq(c).denominator == 1 for c in w) and tuple(int(c) for c in w) in en for w in weights)
    cond_m = space.dim > 1 and in_en
    hw = tuple(int(c) if mpq(c).denominator == 1 else c for c in mu)
    return Summand(hw, space.dim, identity, space, weights, cond_m)


def _expected_weights_ok(x: Summand, rs: RootSystem, var) -> bool:
    nonzero = {w for w in x.weights if any(w)}
    if x.identity == "trivial":
        return not nonzero
    if x.identity == "adjoint":
        return nonzero == set(rs.nonzero)
    if x.identity == "little_adjoint":
        return nonzero == set(var.sh)
    if x.identity == "symmetric":
        return nonzero == set(var.en.nonzero)
    return True
