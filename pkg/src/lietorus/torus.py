"""Multiloop Lie tori LT(s, sigma, h) and their structure.

The torus is infinite dimensional, but its homogeneous component of degree
(alpha, lambda) is s_alpha^(lambda mod m) tensor z^lambda.  Everything here
is therefore computed on the finite kernel {s_alpha^lam-bar}, together with
the reduction lambda -> lambda mod m; statements about all of Z^n reduce to
statements about residues.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from gmpy2 import mpq

from .algebra import LieAlgebra, Subspace, _vector_label
from .chevalley import _matrix_label
from .autos import AReport, AutTuple, CharacterGrading, check_A_conditions, grading_by_tuple, torus_automorphism
from .errors import (
    HomogeneityViolation,
    InputError,
    NonCartanInput,
    NotAdDiagonalizable,
    NotAdmissible,
    WindowTooSmall,
)
from .field import scalar_to_str, simplify, zeta_of_order
from .intmat import hermite_rows, int_det
from .linalg import ZERO, Echelon, nullspace
from .rootsys import RootLatticeHom, RootSystem, derive_variants, short_roots
from .structure import RootDatum, is_simple, joint_eigenspaces, root_space_decomposition

DEFAULT_WINDOW = 2


def window_radius(radius: int | None = None) -> int:
    if radius is not None:
        return int(radius)
    try:
        return int(os.environ.get("LIETORUS_WINDOW", DEFAULT_WINDOW))
    except ValueError as exc:
        raise InputError("LIETORUS_WINDOW must be an integer") from exc


def cube(n: int, radius: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(-radius, radius + 1), repeat=n))


@dataclass
class MultiloopTorus:
    base: LieAlgebra
    tuple: AutTuple
    cartan: Subspace
    orders: tuple
    root_datum: RootDatum
    char_grading: CharacterGrading
    cells: dict  # (alpha in base coordinates, residue) -> Subspace
    a_report: AReport | None

    @property
    def is_torus(self) -> bool:
        return self.a_report is not None and self.a_report.passed

    @property
    def delta(self) -> RootSystem:
        return self.root_datum.roots

    @property
    def nullity(self) -> int:
        return len(self.orders)

    @property
    def q_rank(self) -> int:
        return self.delta.rank

    def residue(self, lam: Sequence[int]) -> tuple:
        return tuple(int(l) % m for l, m in zip(lam, self.orders))

    def cell(self, alpha: Sequence[int], lam: Sequence[int]) -> Subspace:
        """s_alpha^lam-bar; the degree (alpha, lam) component is this space times z^lam."""
        return self.cells.get((tuple(alpha), self.residue(lam)), Subspace(self.base))

    @property
    def support_q(self) -> set:
        return {a for (a, _), sp in self.cells.items() if sp.dim}

    @property
    def support_residues(self) -> set:
        return {r for (_, r), sp in self.cells.items() if sp.dim}

    def residues_of(self, alpha) -> frozenset:
        return frozenset(r for (a, r), sp in self.cells.items() if a == tuple(alpha) and sp.dim)

    def to_json(self) -> dict:
        out = {
            "nullity": self.nullity,
            "orders": list(self.orders),
            "is_torus": self.is_torus,
            "cartan_dim": self.cartan.dim,
        }
        if self.root_datum.is_root_system:
            out["type"] = str(self.delta.type)
            out["supp_Q"] = sorted(list(a) for a in self.support_q)
        if self.a_report is not None:
            out["A_conditions"] = self.a_report.to_json()
        return out


def _double_grading(s: LieAlgebra, h: Subspace, grading: CharacterGrading, rd: RootDatum) -> dict:
    cells = {}
    for lam, comp in grading.components.items():
        for w, sp in joint_eigenspaces(s, h.rows, comp).items():
            alpha = rd.base_coords(w) if rd.is_root_system else w
            cells[(alpha, lam)] = sp
    return dict(sorted(cells.items(), key=lambda kv: (kv[0][1], kv[0][0])))


def build_multiloop(s: LieAlgebra, sigma: AutTuple, h: Subspace | None = None,
                    m: Sequence[int] | None = None) -> MultiloopTorus:
    """Construct LT_m(s, sigma, h).

    Inputs that fail (A1)-(A3) are still built and flagged: the checker then
    reports which axiom breaks.
    """
    report = check_A_conditions(s, sigma, h)
    if h is None:
        h = report.cartan
    if h is None:
        raise NonCartanInput("no Cartan subalgebra of the fixed algebra is available")
    orders = tuple(int(x) for x in m) if m is not None else sigma.orders
    grading = report.grading if orders == sigma.orders else grading_by_tuple(s, sigma, orders)
    try:
        rd = report.datum if report.datum is not None else root_space_decomposition(s, h)
        cells = _double_grading(s, h, grading, rd)
    except NotAdDiagonalizable as exc:
        raise NonCartanInput(f"h is not ad-diagonalisable on s: {exc}") from exc
    return MultiloopTorus(s, sigma, h, orders, rd, grading, cells, report)


def window_bracket(T: MultiloopTorus, x, y):
    """[(x, lam), (y, mu)] = ([x, y], lam + mu) for homogeneous inputs."""
    (xv, lam), (yv, mu) = x, y
    s = T.base
    for v, deg in ((xv, lam), (yv, mu)):
        if any(v) and not T.char_grading.component(deg).contains(v):
            raise HomogeneityViolation(f"element is not in the component of degree {tuple(deg)}")
    return s.bracket(xv, yv), tuple(a + b for a, b in zip(lam, mu))


# ---------------------------------------------------------------------------
# axioms


@dataclass
class Sl2Triple:
    alpha: tuple
    residue: tuple
    e: list
    f: list
    h: list


def sl2_triple(T: MultiloopTorus, alpha, lam) -> Sl2Triple | None:
    """e in s_alpha^lam, f in s_-alpha^-lam with [e, f] acting as <beta, alpha^vee>.

    """
    s = T.base
    rd = T.root_datum
    rs = rd.roots
    alpha = tuple(alpha)
    ce = T.cell(alpha, lam)
    cf = T.cell(tuple(-a for a in alpha), tuple(-l for l in lam))
    if ce.dim != 1 or cf.dim != 1:
        return None
    e, f0 = ce.rows[0], cf.rows[0]
    # [[e, f0], e] = t e; rescale f0 so that [e, f] acts on e by 2
    h0e = s.bracket(s.bracket(e, f0), e)
    k = next(i for i, x in enumerate(e) if x)
    t = simplify(h0e[k] / e[k])
    if not t:
        return None
    f = [simplify(2 * x / t) for x in f0]
    hv = s.bracket(e, f)
    for (beta, _), sp in T.cells.items():
        if not sp.dim:
            continue
        n = rs.pairing(beta, alpha)
        for x in sp.rows:
            if s.bracket(hv, x) != [simplify(n * t) for t in x]:
                return None
    return Sl2Triple(alpha, T.residue(lam), e, f, hv)


def _subgroup_is_everything(residues: Sequence[Sequence[int]], orders: Sequence[int]) -> bool:
    n = len(orders)
    gens = [list(r) for r in residues] + [[m if i == j else 0 for j in range(n)] for i, m in enumerate(orders)]
    H = hermite_rows(gens)
    return len(H) == n and abs(int_det(H)) == 1


def verify_lie_torus_axioms(T: MultiloopTorus) -> dict:
    """(LT1)-(LT5) on the finite kernel, with witnesses for failures."""
    s = T.base
    rd = T.root_datum
    out: dict = {}
    if not rd.is_root_system:
        out["(LT1)"] = {"pass": False, "witness": rd.failure}
        for key in ("(LT2)(i)", "(LT2)(ii)", "(LT3)", "(LT4)", "(LT5)"):
            out[key] = {"pass": False, "witness": "no root system"}
        out["pass"] = False
        return out
    rs = rd.roots
    zero_res = tuple(0 for _ in T.orders)
    # (LT1): every weight of every component lies in Delta, and Delta is a root system
    bad = [list(a) for (a, _), sp in T.cells.items() if sp.dim and a not in rs.root_set]
    out["(LT1)"] = {"pass": not bad, "type": str(rs.type), "witness": bad or None}
    # (LT2)(i)
    ind = derive_variants(rs).ind
    missing = [list(a) for a in ind.nonzero if T.cell(a, zero_res).dim == 0]
    out["(LT2)(i)"] = {"pass": not missing, "witness": missing or None}
    # (LT2)(ii)
    failures = []
    for (a, r), sp in T.cells.items():
        if not any(a) or not sp.dim:
            continue
        if sp.dim > 1:
            failures.append({"cell": [list(a), list(r)], "reason": f"dimension {sp.dim} > 1"})
        elif sl2_triple(T, a, r) is None:
            failures.append({"cell": [list(a), list(r)], "reason": "no sl2 triple"})
    out["(LT2)(ii)"] = {"pass": not failures, "witness": failures or None}
    # (LT3): graded simplicity; s simple implies every homogeneous element generates s
    simple = is_simple(s)
    closure_fail = []
    if simple:
        for (a, r), sp in T.cells.items():
            if sp.dim and s.ideal_closure([sp.rows[0]]).dim != s.dim:
                closure_fail.append([list(a), list(r)])
    out["(LT3)"] = {"pass": bool(simple) and not closure_fail, "base_simple": bool(simple),
                    "witness": closure_fail or (None if simple else simple.reason)}
    # (LT4)
    gen = _subgroup_is_everything(sorted(T.support_residues), T.orders)
    a3 = T.a_report.A3 if T.a_report is not None else None
    out["(LT4)"] = {"pass": gen, "agrees_with_A3": (a3 == gen) if a3 is not None else None,
                    "witness": None if gen else sorted(list(r) for r in T.support_residues)}
    # (LT5)
    supp = T.support_q
    out["(LT5)"] = {"pass": supp == set(rs.roots), "witness": None if supp == set(rs.roots)
                    else sorted(list(a) for a in set(rs.roots) ^ supp)}
    out["pass"] = all(v["pass"] for k, v in out.items() if k.startswith("(LT"))
    return out


# ---------------------------------------------------------------------------
# semilattices


@dataclass(frozen=True)
class Semilattice:
    root: tuple
    residues: frozenset

    def to_json(self) -> dict:
        return {"root": list(self.root), "residues": sorted(list(r) for r in self.residues)}


def _add(a, b, m):
    return tuple((x + y) % k for x, y, k in zip(a, b, m))


def _sumset(A, B, m):
    return {_add(a, b, m) for a in A for b in B}


def _two_lambda(m):
    return {tuple((2 * x) % k for x, k in zip(v, m)) for v in itertools.product(*(range(k) for k in m))}


def support_semilattices(T: MultiloopTorus) -> tuple[dict, dict]:
    """Lambda_alpha residue sets and the semilattice properties at residue level."""
    rs = T.delta
    m = T.orders
    zero = tuple(0 for _ in m)
    qzero = tuple(0 for _ in range(rs.rank))
    sem = {a: Semilattice(a, T.residues_of(a)) for a in sorted(T.support_q)}
    R = {a: set(x.residues) for a, x in sem.items()}
    nz = [a for a in R if any(a)]
    ind = derive_variants(rs).ind
    sh = short_roots(rs)
    two = _two_lambda(m)
    supp_res = set().union(*R.values()) if R else set()
    props = {}
    props["(i)"] = all(zero in R.get(a, set()) for a in ind.nonzero)
    props["(ii)"] = all(_sumset(R[a], {tuple((2 * x) % k for x, k in zip(v, m)) for v in R[a]}, m) <= R[a]
                        and {tuple((-x) % k for x, k in zip(v, m)) for v in R[a]} == R[a] for a in nz)
    props["(iii)"] = all(R[a] == R[b] for a in nz for b in nz if rs.norm(a) == rs.norm(b))
    props["(iv)"] = all(R[a] <= R.get(b, set()) for a in nz for b in sh)
    v_ok = True
    for b in sh:
        Rb = R.get(b, set())
        v_ok = v_ok and supp_res == R.get(qzero, set()) == _sumset(Rb, Rb, m)
        v_ok = v_ok and _subgroup_is_everything(sorted(Rb), m)
        v_ok = v_ok and _sumset(Rb, two, m) <= Rb and two <= Rb
    props["(v)"] = v_ok
    props["(vi)"] = two <= supp_res
    props["pass"] = all(props.values())
    return sem, props


# ---------------------------------------------------------------------------
# root grading pair, centroid


@dataclass
class RootGradingPair:
    g: Subspace
    h: Subspace
    g_type: str | None
    checks: dict

    def to_json(self) -> dict:
        return {"g_dim": self.g.dim, "h_dim": self.h.dim, "g_type": self.g_type, "checks": self.checks}


def root_grading_pair(T: MultiloopTorus) -> RootGradingPair:
    s = T.base
    zero = tuple(0 for _ in T.orders)
    g = T.char_grading.component(zero)
    h0 = T.cell(tuple(0 for _ in range(T.q_rank)), zero)
    checks = {}
    checks["h_equals_cartan"] = h0 == T.cartan
    g_alg = s.subalgebra(g)
    checks["g_simple"] = bool(is_simple(g_alg))
    g_type = None
    rep = T.a_report
    if rep is not None and rep.delta_g is not None:
        g_type = str(rep.delta_g.type)
    checks["g_split_by_h"] = rep is not None and rep.g_data is not None
    # L_alpha = {x : [h, x] = alpha(h) x} on every cell
    rd = T.root_datum
    ok = True
    for (a, _), sp in T.cells.items():
        w = rd.weight_of(a)
        for x in sp.rows:
            for hv, val in zip(T.cartan.rows, w):
                if s.bracket(hv, x) != [simplify(val * t) for t in x]:
                    ok = False
    checks["eigen_description"] = ok
    return RootGradingPair(g, h0, g_type, checks)


@dataclass
class CentralGradingGroup:
    basis: list
    index: int
    fgc: bool
    window_check: bool

    def to_json(self) -> dict:
        return {"basis": self.basis, "index": self.index, "fgc": self.fgc, "window_check": self.window_check}


def central_grading_group(T: MultiloopTorus, radius: int | None = None) -> CentralGradingGroup:
    """Gamma = sum m_i Z.  Checked on a window: z^lambda shifts every
    component into itself (s^mu ⊆ s^(mu+lambda)) exactly when lambda is in
    Gamma."""
    r = window_radius(radius)
    n = len(T.orders)
    comps = T.char_grading.components
    ok = True
    for lam in cube(n, r):
        lam_bar = T.residue(lam)
        centroid = all(T.char_grading.component(_add(mu, lam_bar, T.orders)).contains_space(sp)
                       for mu, sp in comps.items() if sp.dim)
        if centroid != (not any(lam_bar)):
            ok = False
    basis = [[m if i == j else 0 for j in range(n)] for i, m in enumerate(T.orders)]
    return CentralGradingGroup(basis, math.prod(T.orders), True, ok)


# ---------------------------------------------------------------------------
# isotopes


@dataclass
class IsotopeResult:
    shift: RootLatticeHom
    twist: AutTuple
    twisted_tuple: AutTuple
    new_torus: MultiloopTorus
    window_check: bool
    feasibility: dict

    def to_json(self) -> dict:
        return {"shift": [list(v) for v in self.shift.images], "window_check": self.window_check,
                "feasibility": self.feasibility, "new_torus": self.new_torus.to_json()}


def twist_tuple(T: MultiloopTorus, shift: RootLatticeHom) -> tuple[AutTuple, AutTuple]:
    """tau_i = Ad(rho_i) with rho_i(alpha_j) = zeta_(m_i)^(-s_i(alpha_j)), and sigma~_i = tau_i sigma_i."""
    s = T.base
    ctx = s.context
    rs = T.delta
    taus = []
    for i, mi in enumerate(T.orders):
        z = zeta_of_order(ctx, mi)
        rho = [simplify(z ** ((-shift(b)[i]) % mi)) for b in rs.base]
        taus.append(torus_automorphism(T.root_datum, rho))
    twist = AutTuple(taus)
    new = AutTuple([t * sg for t, sg in zip(taus, T.tuple.entries)])
    return twist, new


def _fixed_algebra(s: LieAlgebra, sigma: AutTuple) -> Subspace:
    d = s.dim
    rows = []
    for e in sigma.entries:
        rows.extend([[e.matrix[i][j] - (1 if i == j else 0) for j in range(d)] for i in range(d)])
    return Subspace(s, nullspace(rows, d))


def make_isotope(T: MultiloopTorus, shift: RootLatticeHom, radius: int | None = None) -> IsotopeResult:
    """The isotope L^(s), realised as LT(s, sigma~, h)."""
    if not T.is_torus:
        raise InputError(f"isotopes need a Lie torus; the tuple fails {T.a_report.failures()}")
    rs = T.delta
    if shift.target_rank != T.nullity or len(shift.images) != rs.rank:
        raise InputError("shift must send each base root to a vector of length n")
    s = T.base
    for b in rs.base:
        res = T.residue(shift(b))
        allowed = T.residues_of(b)
        if res not in allowed:
            twist, new = twist_tuple(T, shift)
            fixed = _fixed_algebra(s, new)
            simp = is_simple(s.subalgebra(fixed)) if fixed.dim else None
            witness = {
                "fixed_dim": fixed.dim,
                "fixed_basis": [_label(s, r) for r in fixed.rows],
                "fixed_simple": bool(simp) if simp is not None else False,
                "reason": simp.reason if simp is not None else "zero algebra",
            }
            raise NotAdmissible(
                f"s({list(b)}) = {list(shift(b))} is not in Lambda_alpha (residues {sorted(map(list, allowed))})",
                root=b, residues=sorted(allowed), witness=witness)
    twist, new = twist_tuple(T, shift)
    T2 = build_multiloop(s, new, T.cartan, T.orders)
    # new cell (alpha, lam) = old cell (alpha, lam + s(alpha)) on the window
    r = window_radius(radius)
    ok = True
    for lam in cube(T.nullity, r):
        for a in rs.roots:
            shifted = tuple(x + y for x, y in zip(lam, shift(a)))
            if T2.cell(a, lam) != T.cell(a, shifted):
                ok = False
    fixed = _fixed_algebra(s, new)
    feas = {}
    for b in rs.base:
        for a in (b, tuple(-x for x in b)):
            inter = fixed.intersect(T.root_datum.space(a))
            feas[",".join(map(str, a))] = {"dim": inter.dim, "basis": [_label(s, v) for v in inter.rows]}
    return IsotopeResult(shift, twist, new, T2, ok, feas)


def _label(s: LieAlgebra, v) -> str:
    if s.realization is not None:
        return _matrix_label(s.matrix_of(v))
    return _vector_label(v, s.labels)


# ---------------------------------------------------------------------------
# Weyl automorphisms


def _ad_apply(s: LieAlgebra, e, deg, X: dict) -> dict:
    out = {}
    for mu, v in X.items():
        w = s.bracket(e, v)
        if any(w):
            key = tuple(a + b for a, b in zip(mu, deg))
            if key in out:
                out[key] = [simplify(x + y) for x, y in zip(out[key], w)]
            else:
                out[key] = w
    return {k: v for k, v in out.items() if any(v)}


def _exp_ad(s: LieAlgebra, e, deg, X: dict, box: int) -> dict:
    result = {k: list(v) for k, v in X.items()}
    term = X
    k = 0
    while term:
        k += 1
        term = _ad_apply(s, e, deg, term)
        term = {mu: [simplify(x / k) for x in v] for mu, v in term.items()}
        for mu, v in term.items():
            if any(abs(c) > box for c in mu):
                raise WindowTooSmall(f"intermediate degree {mu} leaves the padded window")
            if mu in result:
                result[mu] = [simplify(x + y) for x, y in zip(result[mu], v)]
            else:
                result[mu] = v
        if k > s.dim + 1:
            raise InputError("ad e is not nilpotent")
    return {m: v for m, v in result.items() if any(v)}


def _nilpotency(s: LieAlgebra, e) -> int:
    k = 0
    vecs = [s.basis_vector(i) for i in range(s.dim)]
    while any(any(v) for v in vecs):
        vecs = [s.bracket(e, v) for v in vecs]
        k += 1
        if k > s.dim + 1:
            raise InputError("ad e is not nilpotent")
    return k


@dataclass
class WeylWindowResult:
    alpha: tuple
    lam: tuple
    checked: int
    passed: bool
    failures: list

    def to_json(self) -> dict:
        return {"alpha": list(self.alpha), "lambda": list(self.lam), "checked": self.checked,
                "pass": self.passed, "failures": self.failures}


def weyl_automorphism_window(T: MultiloopTorus, alpha, lam, radius: int | None = None,
                             pad: int | None = None) -> WeylWindowResult:
    """theta = exp(ad e) exp(ad -f) exp(ad e) for the sl2 triple at (alpha, lam),
    checked to send L_beta^mu to L_(w_alpha beta)^(mu - <beta, alpha^vee> lam)."""
    s = T.base
    rs = T.delta
    alpha, lam = tuple(alpha), tuple(int(x) for x in lam)
    tri = sl2_triple(T, alpha, lam)
    if tri is None:
        raise InputError(f"no sl2 triple at ({list(alpha)}, {list(lam)})")
    r = window_radius(radius)
    if pad is None:
        pad = 3 * _nilpotency(s, tri.e) * max([abs(x) for x in lam] + [1])
    box = r + pad
    neg = tuple(-x for x in lam)
    minus_f = [-x for x in tri.f]
    failures = []
    checked = 0
    for mu in cube(T.nullity, r):
        for beta in rs.roots:
            sp = T.cell(beta, mu)
            if not sp.dim:
                continue
            target_beta = rs.reflect(beta, alpha)
            n = rs.pairing(beta, alpha)
            target_mu = tuple(m - n * l for m, l in zip(mu, lam))
            target = T.cell(target_beta, target_mu)
            for x in sp.rows:
                X = {mu: list(x)}
                X = _exp_ad(s, tri.e, lam, X, box)
                X = _exp_ad(s, minus_f, neg, X, box)
                X = _exp_ad(s, tri.e, lam, X, box)
                checked += 1
                if list(X) != [target_mu] or not target.contains(X[target_mu]):
                    failures.append({"beta": list(beta), "mu": list(mu)})
    return WeylWindowResult(alpha, lam, checked, not failures, failures)
