"""Integer-matrix classification tools for tori.

Generating tuples of a finite abelian group G up to the right action of
GL_n(Z), the normal form modulo the right ideal diag(m) Mat_n(Z), and
bi-isomorphism fingerprints and certificates for multiloop tori.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import LieAlgebra, Subspace
from .autos import AutTuple, Automorphism, torus_automorphism
from .errors import (
    CheckFailed,
    DivisibilityChainViolated,
    InputError,
    NotAnIsomorphism,
    NotATorusAutomorphism,
    NotAWitness,
    OrbitTooLarge,
    TooFewSlots,
)
from .field import simplify
from .intmat import int_det, int_matmul, smith_normal_form
from .linalg import determinant, identity, inverse, matmul, matvec
from .structure import cartan_subalgebra
from .torus import MultiloopTorus

__all__ = [
    "Modulus",
    "NormalForm",
    "Fingerprint",
    "smith_normal_form",
    "normalize_mod_ideal",
    "normalize_batch",
    "solve_witness",
    "orbit_representatives",
    "brute_force_orbit_oracle",
    "orbit_partition",
    "oracle_agreement",
    "biiso_fingerprint",
    "certificate_check",
    "untwisted_test",
]

ORBIT_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Modulus:
    m: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "m", m)
        if not m or any(x < 1 for x in m):
            raise InputError("moduli must be positive integers")
        if any(m[i] % m[i + 1] for i in range(len(m) - 1)):
            raise DivisibilityChainViolated(f"{list(m)} is not a chain m_(i+1) | m_i")

    @property
    def n(self) -> int:
        return len(self.m)

    def reduce(self, A) -> list[list[int]]:
        return [[int(x) % mi for x in row] for row, mi in zip(A, self.m)]


@dataclass(frozen=True)
class NormalForm:
    P: tuple
    p: int

    def to_json(self) -> dict:
        return {"P": [list(r) for r in self.P], "p": self.p}


def _check_square(A, n: int) -> list[list[int]]:
    if len(A) != n or any(len(r) != n for r in A):
        raise InputError(f"matrix must be {n}x{n}")
    return [[int(x) for x in r] for r in A]


def solve_witness(A, m: Modulus) -> list[list[int]]:
    """Some B with AB = Id (mod M), or NotAWitness if A is not invertible mod M.

    Column k solves A b + diag(m) y = e_k over Z through the Smith form of
    [A | diag(m)].
    """
    n = m.n
    A = _check_square(A, n)
    big = [A[i] + [m.m[i] if j == i else 0 for j in range(n)] for i in range(n)]
    U, D, V = smith_normal_form(big)
    cols = []
    for k in range(n):
        rhs = [U[i][k] for i in range(n)]
        z = []
        for i in range(n):
            d = D[i][i]
            if d == 0 or rhs[i] % d:
                raise NotAWitness("A is not invertible modulo M")
            z.append(rhs[i] // d)
        z += [0] * n
        x = [sum(V[r][c] * z[c] for c in range(2 * n)) for r in range(2 * n)]
        cols.append(x[:n])
    return [[cols[k][i] for k in range(n)] for i in range(n)]


def _col_op(A, P, src: int, dst: int, q: int) -> None:
    """column dst += q column src."""
    if q:
        for M in (A, P):
            for row in M:
                row[dst] += q * row[src]


def _col_gcd(A, P, k: int, cols: Sequence[int]) -> None:
    """Column operations on row k leaving gcd in column k and zeros in ``cols``."""
    while True:
        nz = [j for j in [k, *cols] if A[k][j]]
        if not nz:
            return
        piv = min(nz, key=lambda j: abs(A[k][j]))
        if piv != k:
            for M in (A, P):
                for row in M:
                    row[k], row[piv] = row[piv], row[k]
        done = True
        for j in cols:
            if A[k][j]:
                _col_op(A, P, k, j, -(A[k][j] // A[k][k]))
                if A[k][j]:
                    done = False
        if done:
            if A[k][k] < 0:
                for M in (A, P):
                    for row in M:
                        row[k] = -row[k]
            return


def normalize_mod_ideal(A, m: Modulus | Sequence[int], B=None) -> NormalForm:
    """P in GL_n(Z) and p with AP = diag(1, ..., 1, p) (mod M).

    Matrices are congruent mod M when their entries in row i agree mod m_i.
    ``B`` is a witness for AB = Id (mod M).  When it is omitted the
    reduction itself decides invertibility, and P diag(1, ..., 1, 1/p) is
    returned to the caller's check as the witness.
    """
    if not isinstance(m, Modulus):
        m = Modulus(tuple(m))
    n = m.n
    A0 = _check_square(A, n)
    if B is not None:
        B = _check_square(B, n)
        if m.reduce(int_matmul(A0, B)) != m.reduce(identity_int(n)):
            raise NotAWitness("AB is not congruent to the identity modulo M")
    A = m.reduce(A0)
    P = identity_int(n)
    for k in range(n):
        mk = m.m[k]
        rest = list(range(k + 1, n))
        if A[k][k] == 0:
            A[k][k] = mk
        _col_gcd(A, P, k, rest)
        if rest:
            A[k][n - 1] = mk
            _col_gcd(A, P, k, rest)
        d = A[k][k]
        if math.gcd(d, mk) != 1:
            raise NotAWitness(f"pivot {d} is not a unit modulo {mk}")
        u = pow(d, -1, mk) if mk > 1 else 0
        for j in range(k):
            _col_op(A, P, k, j, -A[k][j] * u)
        A = m.reduce(A)
        if k < n - 1 and A[k][k] != 1 % mk:
            raise CheckFailed("column reduction did not reach 1")
    p = A[n - 1][n - 1] % m.m[-1]
    if p > m.m[-1] // 2:
        for row in P:
            row[n - 1] = -row[n - 1]
        p = (-p) % m.m[-1]
    target = [[(1 if i == j else 0) for j in range(n)] for i in range(n)]
    target[n - 1][n - 1] = p
    if m.reduce(int_matmul(A0, P)) != m.reduce(target):
        raise CheckFailed("AP is not congruent to diag(1, ..., 1, p)")
    if abs(int_det(P)) != 1:
        raise CheckFailed("P is not unimodular")
    if B is None:
        mn = m.m[-1]
        u = pow(p, -1, mn) if mn > 1 else 0
        B = [row[:-1] + [row[-1] * u] for row in P]
        if m.reduce(int_matmul(A0, B)) != m.reduce(identity_int(n)):
            raise CheckFailed("derived witness fails")
    det = int_det(A0) % m.m[-1]
    if p % m.m[-1] not in (det, (-det) % m.m[-1]):
        raise CheckFailed("p is not congruent to +-det A")
    return NormalForm(tuple(tuple(r) for r in P), p)


def normalize_batch(As: np.ndarray, m: Modulus | Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`normalize_mod_ideal` over a stack of matrices.

    Runs the same column reduction on ``As`` of shape (K, n, n) and returns
    (p, valid): p per matrix and a mask of the matrices invertible modulo M
    (p is -1 where invalid).  Every result is checked: AP = diag(1, ..., 1, p)
    mod M, det P = +-1 and p = +-det A mod m_n.
    """
    if not isinstance(m, Modulus):
        m = Modulus(tuple(m))
    n = m.n
    A0 = np.asarray(As, dtype=np.int64)
    if A0.ndim != 3 or A0.shape[1:] != (n, n):
        raise InputError(f"expected a stack of {n}x{n} matrices")
    K = A0.shape[0]
    mod = np.array(m.m, dtype=np.int64)[None, :, None]
    A = A0 % mod
    P = np.broadcast_to(np.eye(n, dtype=np.int64), (K, n, n)).copy()
    valid = np.ones(K, dtype=bool)
    rows = np.arange(K)

    def col_gcd(k, rest):
        cols = [k, *rest]
        while True:
            block = A[:, k, cols]
            if not block[:, 1:].any():
                break
            big = np.iinfo(np.int64).max
            piv = np.argmin(np.where(block != 0, np.abs(block), big), axis=1)
            src = np.array(cols)[piv]
            for M in (A, P):
                ck, cp = M[rows, :, k].copy(), M[rows, :, src].copy()
                M[rows, :, k], M[rows, :, src] = cp, ck
            dk = A[:, k, k]
            safe = np.where(dk == 0, 1, dk)
            for j in rest:
                q = np.where(dk == 0, 0, -(A[:, k, j] // safe))
                A[:, :, j] += q[:, None] * A[:, :, k]
                P[:, :, j] += q[:, None] * P[:, :, k]
        neg = A[:, k, k] < 0
        A[neg, :, k] *= -1
        P[neg, :, k] *= -1

    for k in range(n):
        mk = m.m[k]
        rest = list(range(k + 1, n))
        A[A[:, k, k] == 0, k, k] = mk
        col_gcd(k, rest)
        if rest:
            A[:, k, n - 1] = mk
            col_gcd(k, rest)
        d = A[:, k, k]
        valid &= np.gcd(d, mk) == 1
        table = np.array([pow(r, -1, mk) if math.gcd(r, mk) == 1 and mk > 1 else 0 for r in range(mk)],
                         dtype=np.int64)
        u = table[d % mk]
        for j in range(k):
            c = -A[:, k, j] * u
            A[:, :, j] += c[:, None] * A[:, :, k]
            P[:, :, j] += c[:, None] * P[:, :, k]
        A %= mod
        if np.abs(P).max(initial=0) > 2 ** 40:
            raise CheckFailed("unimodular factor outgrew int64 headroom")
    mn = m.m[-1]
    p = A[:, n - 1, n - 1] % mn
    flip = p > mn // 2
    P[flip, :, n - 1] *= -1
    p = np.where(flip, (-p) % mn, p)
    target = np.broadcast_to(np.eye(n, dtype=np.int64), (K, n, n)).copy()
    target[:, n - 1, n - 1] = p
    ok = ((np.einsum("kij,kjl->kil", A0, P) - target) % mod == 0).all(axis=(1, 2))
    detP = np.rint(np.linalg.det(P.astype(float))).astype(np.int64)
    detA = np.rint(np.linalg.det(A0.astype(float))).astype(np.int64) % mn
    ok &= np.abs(detP) == 1
    ok &= (p == detA) | (p == (-detA) % mn)
    if not ok[valid].all():
        raise CheckFailed("batch normal form failed its own verification")
    return np.where(valid, p, -1), valid


def identity_int(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _chain(factors: Sequence[int], n: int) -> tuple:
    f = sorted((int(x) for x in factors if int(x) != 1), reverse=True)
    if any(x < 1 for x in f):
        raise InputError("invariant factors must be positive")
    if any(f[i] % f[i + 1] for i in range(len(f) - 1)):
        raise DivisibilityChainViolated(f"{f} is not a divisibility chain")
    if len(f) > n:
        raise TooFewSlots(f"a group with {len(f)} invariant factors needs at least {len(f)} generators")
    return tuple(f + [1] * (n - len(f)))


def orbit_representatives(factors: Sequence[int], n: int) -> list[NormalForm]:
    """Orbit representatives (tau_1, ..., tau_(n-1), tau_n^p) of GL_n(Z) on gs_n(G)."""
    m = _chain(factors, n)
    mn = m[-1]
    out = []
    for p in range(mn // 2 + 1):
        if math.gcd(p, mn) == 1:
            A = identity_int(n)
            A[n - 1][n - 1] = p
            out.append(NormalForm(tuple(tuple(r) for r in A), p))
    return out


# ---------------------------------------------------------------------------
# brute-force oracle on G^n, G = Z/m_1 + ... + Z/m_r


def _encode_base(m: Sequence[int], n: int) -> list[int]:
    # slot-major mixed radix: tuple entry j, coordinate i
    return [mi for _ in range(n) for mi in m]


def _decode_all(m: Sequence[int], n: int) -> np.ndarray:
    radices = _encode_base(m, n)
    total = math.prod(radices)
    idx = np.arange(total, dtype=np.int64)
    out = np.empty((total, len(radices)), dtype=np.int64)
    for c in range(len(radices) - 1, -1, -1):
        out[:, c] = idx % radices[c]
        idx //= radices[c]
    return out.reshape(total, n, len(m))


def _encode(arr: np.ndarray, m: Sequence[int]) -> np.ndarray:
    total_slots = arr.shape[1]
    flat = arr.reshape(arr.shape[0], -1)
    radices = _encode_base(m, total_slots)
    code = np.zeros(arr.shape[0], dtype=np.int64)
    for c, r in enumerate(radices):
        code = code * r + flat[:, c]
    return code


def _generators(n: int):
    """Swaps, a negation and a transvection: the standard generators of GL_n(Z)."""
    gens = []
    for i, j in itertools.combinations(range(n), 2):
        gens.append(("swap", i, j))
    gens.append(("neg", 0, 0))
    if n > 1:
        gens.append(("add", 0, 1))  # sigma_1 <- sigma_1 + sigma_2
    return gens


def _apply(arr: np.ndarray, gen, m: np.ndarray) -> np.ndarray:
    kind, i, j = gen
    out = arr.copy()
    if kind == "swap":
        out[:, i], out[:, j] = arr[:, j], arr[:, i]
    elif kind == "neg":
        out[:, i] = (-arr[:, i]) % m
    else:
        out[:, i] = (arr[:, i] + arr[:, j]) % m
    return out


def _check_size(m: Sequence[int], n: int) -> None:
    size = math.prod(m) ** n
    if size > ORBIT_LIMIT:
        raise OrbitTooLarge(f"|G|^n = {size} exceeds {ORBIT_LIMIT}")


def orbit_partition(factors: Sequence[int], n: int):
    """Connected components of G^n under the elementary generators.

    Returns (tuples, labels): all tuples as an array of shape (|G|^n, n, r)
    and the orbit label of each.
    """
    m = tuple(int(x) for x in factors if int(x) != 1) or (1,)
    _check_size(m, n)
    allt = _decode_all(m, n)
    mm = np.array(m, dtype=np.int64)
    total = allt.shape[0]
    src, dst = [], []
    base = np.arange(total, dtype=np.int64)
    for g in _generators(n):
        src.append(base)
        dst.append(_encode(_apply(allt, g, mm), m))
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(total, total))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return allt, labels


def brute_force_orbit_oracle(factors: Sequence[int], sigma: Sequence[Sequence[int]]) -> tuple:
    """Lexicographically least tuple in the GL_n(Z)-orbit of ``sigma``.

    Group elements are coordinate vectors in Z/m_1 + ... + Z/m_r; the orbit
    is closed under the elementary generators by breadth-first search.
    """
    m = tuple(int(x) for x in factors if int(x) != 1) or (1,)
    n = len(sigma)
    _check_size(m, n)
    start = tuple(tuple(int(c) % mi for c, mi in zip(g, m)) for g in sigma)
    if any(len(g) != len(m) for g in sigma):
        raise InputError(f"group elements need {len(m)} coordinates")
    seen = {start}
    frontier = [start]
    mm = np.array(m, dtype=np.int64)
    gens = _generators(n)
    while frontier:
        arr = np.array(frontier, dtype=np.int64).reshape(len(frontier), n, len(m))
        nxt = []
        for g in gens:
            for row in _apply(arr, g, mm):
                t = tuple(tuple(int(c) for c in e) for e in row)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return min(seen)


def oracle_agreement(factors: Sequence[int], n: int) -> dict:
    """Compare the normal-form invariant p with the brute-force orbit partition.

    Every tuple in G^n is read as its coordinate matrix A (column j holds
    sigma_j) and passed through :func:`normalize_batch`.  Agreement means:
    invertibility of A modulo M is constant on orbits, p is constant on each
    generating orbit, distinct generating orbits get distinct p, and the set
    of p values is the one listed by :func:`orbit_representatives`.
    """
    m = _chain(factors, n)
    r = len([x for x in m if x != 1]) or 1
    allt, labels = orbit_partition(m[:r], n)
    A = np.zeros((allt.shape[0], n, n), dtype=np.int64)
    A[:, :r, :] = allt.transpose(0, 2, 1)
    p, valid = normalize_batch(A, m)
    gen_orbits = set(labels[valid].tolist())
    mixed = gen_orbits & set(labels[~valid].tolist())
    by_orbit: dict = {}
    for lab, q in zip(labels[valid].tolist(), p[valid].tolist()):
        by_orbit.setdefault(lab, set()).add(q)
    values = sorted(q for qs in by_orbit.values() for q in qs)
    expected = [nf.p for nf in orbit_representatives(factors, n)]
    agree = (not mixed and all(len(qs) == 1 for qs in by_orbit.values())
             and values == expected)
    return {"factors": list(m[:r]), "n": n, "tuples": int(allt.shape[0]),
            "generating": int(valid.sum()), "orbits": len(by_orbit), "p": values,
            "expected_p": expected, "agree": agree}


# ---------------------------------------------------------------------------
# fingerprints and certificates


@dataclass
class Fingerprint:
    invariant_factors: tuple
    fixed_type: str | None
    delta_type: str | None
    component_dims: tuple
    eigen_profile: tuple
    fixed_dims: tuple

    def to_json(self) -> dict:
        return {
            "invariant_factors": list(self.invariant_factors),
            "fixed_type": self.fixed_type,
            "Delta_type": self.delta_type,
            "component_dims": list(self.component_dims),
            "eigen_profile": [[list(p) for p in prof] for prof in self.eigen_profile],
            "fixed_dims": list(self.fixed_dims),
        }

    def differences(self, other: "Fingerprint") -> list[str]:
        return [k for k in self.__dataclass_fields__ if getattr(self, k) != getattr(other, k)]


def biiso_fingerprint(T: MultiloopTorus) -> Fingerprint:
    """Invariants of the pair (<sigma>, s) under sigma -> phi sigma^P phi^-1."""
    sigma = T.tuple
    gs = sigma.group_structure
    profiles, fixed = [], []
    for _, mat in sigma.elements.values():
        g = Automorphism(T.base, mat, check=False)
        profiles.append(tuple(g.eigen_profile()))
        fixed.append(g.fixed_dim())
    rep = T.a_report
    fixed_type = str(rep.delta_g.type) if rep is not None and rep.delta_g is not None else None
    delta_type = str(T.delta.type) if T.root_datum.is_root_system else None
    return Fingerprint(
        invariant_factors=tuple(gs.invariant_factors),
        fixed_type=fixed_type,
        delta_type=delta_type,
        component_dims=tuple(sorted(sp.dim for sp in T.char_grading.components.values())),
        eigen_profile=tuple(sorted(profiles)),
        fixed_dims=tuple(sorted(fixed)),
    )


def _as_matrix(phi, L: LieAlgebra):
    if isinstance(phi, Automorphism):
        return phi.matrix
    if phi is None:
        return identity(L.dim)
    return [[simplify(x) for x in row] for row in phi]


def check_isomorphism(src: LieAlgebra, dst: LieAlgebra, mat) -> None:
    """phi[b_i, b_j] = [phi b_i, phi b_j] on all basis pairs, and phi invertible."""
    if src.dim != dst.dim or len(mat) != dst.dim or any(len(r) != src.dim for r in mat):
        raise NotAnIsomorphism("dimensions do not match")
    if not determinant(mat):
        raise NotAnIsomorphism("map is singular")
    cols = [[mat[i][j] for i in range(dst.dim)] for j in range(src.dim)]
    for i in range(src.dim):
        for j in range(i + 1, src.dim):
            lhs = matvec(mat, src.bracket(src.basis_vector(i), src.basis_vector(j)))
            if dst.bracket(cols[i], cols[j]) != [simplify(x) for x in lhs]:
                raise NotAnIsomorphism(f"bracket of basis vectors {i}, {j} is not preserved")


def _check_torus_automorphism(T: MultiloopTorus, tau: Automorphism, mi: int) -> None:
    """tau = Ad(rho) for a character rho of Q, and tau^m_i = id."""
    rd = T.root_datum
    rs = T.delta
    rho = []
    for b in rs.base:
        sp = rd.space(b)
        v = sp.rows[0]
        img = tau(v)
        k = next(i for i, x in enumerate(v) if x)
        rho.append(simplify(img[k] / v[k]))
    if any(not r for r in rho):
        raise NotATorusAutomorphism("tau kills a root vector")
    expected = torus_automorphism(rd, rho)
    if expected.matrix != tau.matrix:
        raise NotATorusAutomorphism("tau is not Ad(rho) for a character rho of Q")
    if mi % tau.order:
        raise NotATorusAutomorphism(f"tau has order {tau.order}, which does not divide {mi}")


def certificate_check(T: MultiloopTorus, T2: MultiloopTorus, P, phi=None, mode: str = "biiso",
                      tau: Sequence[Automorphism] | None = None) -> bool:
    """Check sigma' = phi rho^P phi^-1 entrywise, with phi(h) = h'.

    rho is sigma in "biiso" mode and (tau_1 sigma_1, ..., tau_n sigma_n) in
    "isotopy" mode.  A True result certifies a bi-isomorphism (resp. an
    isotopy) of the two tori.
    """
    s, s2 = T.base, T2.base
    n = T.nullity
    P = _check_square(P, n)
    if abs(int_det(P)) != 1:
        raise InputError("P must be in GL_n(Z)")
    mat = _as_matrix(phi, s)
    check_isomorphism(s, s2, mat)
    sigma = T.tuple
    if mode == "isotopy":
        if tau is None or len(tau) != n:
            raise InputError("isotopy mode needs one torus automorphism per slot")
        for t, mi in zip(tau, T.orders):
            _check_torus_automorphism(T, t, mi)
        sigma = AutTuple([t * sg for t, sg in zip(tau, sigma.entries)])
    elif mode != "biiso":
        raise InputError(f"unknown mode {mode!r}")
    inv = inverse(mat)
    for j in range(n):
        exps = [P[i][j] for i in range(n)]
        rhs = matmul(matmul(mat, sigma.element(exps).matrix), inv)
        if [[simplify(x) for x in r] for r in rhs] != T2.tuple.entries[j].matrix:
            return False
    image = Subspace(s2, (matvec(mat, v) for v in T.cartan.rows))
    return image == T2.cartan


def untwisted_test(T: MultiloopTorus) -> bool:
    """h is a Cartan subalgebra of s, which happens exactly when sigma = 1."""
    s = T.base
    rank = s.root_system.rank if getattr(s, "root_system", None) is not None else cartan_subalgebra(s).dim
    by_rank = T.cartan.dim == rank
    literal = all(e.is_identity() for e in T.tuple.entries)
    if by_rank != literal:
        raise CheckFailed("rank test and sigma = 1 disagree")
    return by_rank
