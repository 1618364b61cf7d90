"""Finite irreducible root systems that contain 0.

Roots are integer vectors in the coordinates of a fixed base
(Bourbaki numbering for the standard types).  The inner product is carried
as the Gram matrix of the base, so the pairing <a, b^vee> = 2(a,b)/(b,b)
never depends on a choice of normalisation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import InvalidType, NotARootSystem, NotIrreducible, RootNotInSystem
from .linalg import rref

FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "BC")
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4, "BC": 1}
_FIXED = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


@dataclass(frozen=True, order=True)
class RootSystemType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidType(f"unknown family {self.family!r}")
        ok = (self.rank >= _MIN_RANK[self.family]) if self.family in _MIN_RANK else self.rank in _FIXED[self.family]
        if not ok:
            raise InvalidType(f"{self.family}{self.rank} is not an admissible type")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        m = re.fullmatch(r"\s*(BC|[A-G])_?(\d+)\s*", str(text))
        if not m:
            raise InvalidType(f"cannot parse root system type {text!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def reduced(self) -> bool:
        return self.family != "BC"


def _gram(family: str, rank: int) -> list[list[mpq]]:
    """Gram matrix of the simple roots."""
    n = rank
    g = [[mpq(0)] * n for _ in range(n)]
    if family in ("A", "D", "E"):
        for i in range(n):
            g[i][i] = mpq(2)
        if family == "A":
            edges = [(i, i + 1) for i in range(n - 1)]
        elif family == "D":
            edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        else:  # Bourbaki: 1-3-4-5-..., 2 attached to 4
            edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
        for i, j in edges:
            g[i][j] = g[j][i] = mpq(-1)
        return g
    if family in ("B", "BC"):
        for i in range(n - 1):
            g[i][i] = mpq(2)
            g[i][i + 1] = g[i + 1][i] = mpq(-1)
        g[n - 1][n - 1] = mpq(1)
        return g
    if family == "C":
        for i in range(n - 1):
            g[i][i] = mpq(2)
            g[i][i + 1] = g[i + 1][i] = mpq(-1)
        g[n - 1][n - 1] = mpq(4)
        g[n - 2][n - 1] = g[n - 1][n - 2] = mpq(-2)
        return g
    if family == "F":
        diag = [2, 2, 1, 1]
        for i in range(4):
            g[i][i] = mpq(diag[i])
        g[0][1] = g[1][0] = mpq(-1)
        g[1][2] = g[2][1] = mpq(-1)
        g[2][3] = g[3][2] = mpq(-1, 2)
        return g
    if family == "G":
        g[0][0], g[1][1] = mpq(1), mpq(3)
        g[0][1] = g[1][0] = mpq(-3, 2)
        return g
    raise InvalidType(family)


def _form(gram, a, b):
    return sum(a[i] * gram[i][j] * b[j] for i in range(len(a)) if a[i] for j in range(len(b)) if b[j])


@dataclass(frozen=True)
class RootSystem:
    """A root system together with 0, in base coordinates."""

    type: RootSystemType
    roots: tuple[tuple[int, ...], ...]
    base: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[mpq, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.base)

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @cached_property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    @cached_property
    def nonzero(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r for r in self.roots if any(r))

    @cached_property
    def positive(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r for r in self.nonzero if all(c >= 0 for c in r))

    def __contains__(self, v) -> bool:
        return tuple(v) in self.root_set

    def form(self, a, b) -> mpq:
        return _form(self.gram, a, b)

    def norm(self, a) -> mpq:
        return _form(self.gram, a, a)

    def pairing(self, a, b) -> int:
        """<a, b^vee> for b nonzero."""
        val = 2 * self.form(a, b) / self.norm(b)
        if val.denominator != 1:
            raise NotARootSystem(f"non-integral pairing <{a}, {b}^vee> = {val}")
        return int(val)

    def reflect(self, a, b) -> tuple[int, ...]:
        """w_b(a) = a - <a, b^vee> b."""
        n = self.pairing(a, b)
        return tuple(x - n * y for x, y in zip(a, b))

    @staticmethod
    def height(a) -> int:
        return sum(a)

    @cached_property
    def is_reduced(self) -> bool:
        return not any(tuple(2 * c for c in r) in self.root_set for r in self.nonzero)

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.pairing(a, b) for b in self.base) for a in self.base)

    def to_json(self) -> dict:
        return {"type": str(self.type), "roots": [list(r) for r in self.roots]}


def _sort_roots(roots: Iterable[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(set(roots), key=lambda r: (sum(r), tuple(-c for c in r))))


def _closure(seeds, reflect) -> set:
    seen = set(seeds)
    frontier = list(seen)
    while frontier:
        nxt = []
        for r in frontier:
            for w in reflect(r):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


@lru_cache(maxsize=None)
def _build(family: str, rank: int) -> RootSystem:
    gram = _gram(family, rank)
    base = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
    norms = [gram[i][i] for i in range(rank)]

    def simple_reflections(r):
        out = []
        for i in range(rank):
            n = 2 * sum(r[k] * gram[k][i] for k in range(rank)) / norms[i]
            n = int(n)
            out.append(tuple(c - n * (1 if k == i else 0) for k, c in enumerate(r)))
        return out

    roots = _closure(base, simple_reflections)
    if family == "BC":
        short = min(_form(gram, r, r) for r in roots)
        roots |= {tuple(2 * c for c in r) for r in roots if _form(gram, r, r) == short}
    roots.add((0,) * rank)
    gram_t = tuple(tuple(row) for row in gram)
    return RootSystem(RootSystemType(family, rank), _sort_roots(roots), base, gram_t)


def build_root_system(t: RootSystemType | str) -> RootSystem:
    """Full root system of the given type with the standard base."""
    if isinstance(t, str):
        t = RootSystemType.parse(t)
    return _build(t.family, t.rank)


# ---------------------------------------------------------------------------
# derived sets


@dataclass(frozen=True)
class Variants:
    ind: RootSystem
    en: RootSystem
    sh: tuple[tuple[int, ...], ...]
    theta: tuple[int, ...]
    theta_sh: tuple[int, ...]


def short_roots(rs: RootSystem) -> tuple[tuple[int, ...], ...]:
    m = min(rs.norm(r) for r in rs.nonzero)
    return tuple(r for r in rs.nonzero if rs.norm(r) == m)


def _with_roots(rs: RootSystem, roots) -> RootSystem:
    roots = _sort_roots(roots)
    t = identify_type(roots, rs.gram)
    return RootSystem(t, roots, rs.base, rs.gram)


def is_type_b(t: RootSystemType) -> bool:
    """Type B_l for l >= 1, reading B_1 as A_1."""
    return t.family == "B" or (t.family == "A" and t.rank == 1)


def derive_variants(rs: RootSystem) -> Variants:
    """(Delta_ind, Delta_en, Delta_sh, theta, theta_sh)."""
    ind = [r for r in rs.roots if not (all(c % 2 == 0 for c in r) and any(r)
                                        and tuple(c // 2 for c in r) in rs.root_set)]
    sh = short_roots(rs)
    if is_type_b(rs.type):
        en = set(rs.roots) | {tuple(2 * c for c in r) for r in sh}
    else:
        en = set(rs.roots)
    theta = max(rs.nonzero, key=lambda r: (sum(r), r))
    theta_sh = max(sh, key=lambda r: (sum(r), r))
    ind_rs = rs if len(ind) == len(rs.roots) else _with_roots(rs, ind)
    en_rs = rs if len(en) == len(rs.roots) else _with_roots(rs, en)
    return Variants(ind_rs, en_rs, sh, theta, theta_sh)


def weyl_orbit(rs: RootSystem, alpha) -> frozenset:
    alpha = tuple(alpha)
    if alpha not in rs.root_set:
        raise RootNotInSystem(f"{alpha} is not a root of {rs.type}")
    gens = rs.nonzero
    return frozenset(_closure([alpha], lambda r: [rs.reflect(r, b) for b in gens]))


@dataclass(frozen=True)
class RootLatticeHom:
    """A homomorphism Q -> Z^n given by the images of the base roots."""

    target_rank: int
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(tuple(int(c) for c in v) for v in self.images))
        if any(len(v) != self.target_rank for v in self.images):
            raise InvalidType("image vectors must have length target_rank")

    def __call__(self, alpha) -> tuple[int, ...]:
        out = [0] * self.target_rank
        for a, img in zip(alpha, self.images):
            if a:
                for i, c in enumerate(img):
                    out[i] += a * c
        return tuple(out)

    def __neg__(self) -> "RootLatticeHom":
        return RootLatticeHom(self.target_rank, tuple(tuple(-c for c in v) for v in self.images))


# ---------------------------------------------------------------------------
# identification


_ROOT_COUNT = {
    "A": lambda l: l * (l + 1),
    "B": lambda l: 2 * l * l,
    "C": lambda l: 2 * l * l,
    "D": lambda l: 2 * l * (l - 1),
    "BC": lambda l: 2 * l * (l + 1),
}
_EXCEPTIONAL_COUNT = {("E", 6): 72, ("E", 7): 126, ("E", 8): 240, ("F", 4): 48, ("G", 2): 12}


def _count(t: RootSystemType) -> int:
    if t.family in _ROOT_COUNT:
        return _ROOT_COUNT[t.family](t.rank)
    return _EXCEPTIONAL_COUNT[(t.family, t.rank)]


def _lex_positive(v) -> bool:
    for c in v:
        if c:
            return c > 0
    return False


@dataclass(frozen=True)
class Identified:
    """A root system recovered from vectors, with the coordinate change."""

    system: RootSystem
    simple: tuple[tuple, ...]
    coords: dict

    def base_coords(self, v) -> tuple[int, ...]:
        return self.coords[tuple(v)]


def analyse_vectors(vectors: Iterable[Sequence], form=None) -> Identified:
    """Recognise a finite irreducible root system given by vectors and a form.

    ``vectors`` may include 0.  ``form`` is the Gram matrix of the ambient
    coordinates (identity when omitted).
    """
    vecs = {tuple(mpq(c) for c in v) for v in vectors}
    dim = len(next(iter(vecs))) if vecs else 0
    if any(len(v) != dim for v in vecs):
        raise NotARootSystem("vectors of different lengths")
    zero = (mpq(0),) * dim
    vecs.discard(zero)
    if not vecs:
        raise NotARootSystem("no nonzero roots")
    if form is None:
        form = [[mpq(1) if i == j else mpq(0) for j in range(dim)] for i in range(dim)]
    form = [[mpq(c) for c in row] for row in form]

    def ip(a, b):
        return _form(form, a, b)

    norms = {v: ip(v, v) for v in vecs}
    if any(n <= 0 for n in norms.values()):
        raise NotARootSystem("form is not positive on the roots")
    for b in vecs:
        nb = norms[b]
        for a in vecs:
            n = 2 * ip(a, b) / nb
            if n.denominator != 1:
                raise NotARootSystem(f"pairing of {a} with {b} is not integral")
            if n and tuple(x - n * y for x, y in zip(a, b)) not in vecs:
                raise NotARootSystem(f"not closed under the reflection in {b}")
    positive = [v for v in vecs if _lex_positive(v)]
    pos_set = set(positive)
    half = {v for v in positive if tuple(c / 2 for c in v) in vecs}
    sums = {tuple(x + y for x, y in zip(a, b)) for a in positive for b in positive}
    simple = sorted((v for v in positive if v not in half and v not in sums), reverse=True)
    red, piv = rref([list(v) for v in simple])
    if len(red) != len(simple):
        raise NotARootSystem("candidate simple roots are dependent")
    span_rank = len(rref([list(v) for v in vecs])[0])
    if span_rank != len(simple):
        raise NotARootSystem("simple roots do not span")
    # coordinates in the simple roots, via the pivots of the RREF of simple
    from .linalg import inverse, transpose

    l = len(simple)
    sub = [[simple[i][p] for p in piv] for i in range(l)]
    inv = inverse(sub)
    coords = {}
    for v in vecs | {zero}:
        vp = [v[p] for p in piv]
        c = [sum(vp[k] * inv[k][i] for k in range(l)) for i in range(l)]
        if any(mpq(x).denominator != 1 for x in c):
            raise NotARootSystem(f"{v} is not an integral combination of simple roots")
        ci = tuple(int(x) for x in c)
        if any(ci) and not (all(x >= 0 for x in ci) or all(x <= 0 for x in ci)):
            raise NotARootSystem(f"{v} has mixed-sign coordinates")
        if tuple(sum(ci[i] * simple[i][j] for i in range(l)) for j in range(dim)) != v:
            raise NotARootSystem(f"{v} is outside the span of the simple roots")
        coords[v] = ci
    gram = tuple(tuple(ip(a, b) for b in simple) for a in simple)
    # connectivity of the Dynkin graph
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(l):
            if j not in seen and gram[i][j]:
                seen.add(j)
                stack.append(j)
    if len(seen) != l:
        raise NotIrreducible("the Dynkin diagram is disconnected")
    t = _classify(gram, reduced=not half)
    roots = _sort_roots(coords.values())
    if len(roots) - 1 != _count(t):
        raise NotARootSystem(f"expected {_count(t)} roots for {t}, found {len(roots) - 1}")
    base = tuple(tuple(1 if i == j else 0 for j in range(l)) for i in range(l))
    rs = RootSystem(t, roots, base, gram)
    return Identified(rs, tuple(simple), coords)


def _classify(gram, reduced: bool) -> RootSystemType:
    l = len(gram)
    a = [[int(2 * gram[i][j] / gram[j][j]) for j in range(l)] for i in range(l)]
    mult = {(i, j): a[i][j] * a[j][i] for i in range(l) for j in range(l) if i != j and a[i][j]}
    if not reduced:
        # the indivisible part must be of type B_l (A_1 when l = 1)
        if l > 1 and _classify(gram, True).family != "B":
            raise NotARootSystem("non-reduced system whose indivisible part is not of type B")
        return RootSystemType("BC", l)
    if l == 1:
        return RootSystemType("A", 1)
    if 3 in mult.values():
        return RootSystemType("G", 2)
    deg = [sum(1 for j in range(l) if (i, j) in mult) for i in range(l)]
    doubles = [(i, j) for (i, j), m in mult.items() if m == 2 and i < j]
    if doubles:
        i, j = doubles[0]
        if l == 2:
            return RootSystemType("B", 2)
        if l == 4 and deg[i] == 2 and deg[j] == 2:
            return RootSystemType("F", 4)
        end = i if deg[i] == 1 else j
        other = j if end == i else i
        return RootSystemType("B" if gram[end][end] < gram[other][other] else "C", l)
    branch = [i for i in range(l) if deg[i] == 3]
    if not branch:
        return RootSystemType("A", l)
    b = branch[0]
    arms = []
    for start in (j for j in range(l) if (b, j) in mult):
        length, prev, cur = 1, b, start
        while True:
            nxt = [k for k in range(l) if (cur, k) in mult and k != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return RootSystemType("D", l)
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return RootSystemType("E", l)
    raise NotARootSystem(f"unrecognised Dynkin diagram with arms {arms}")


def identify_type(roots, form=None) -> RootSystemType:
    """Type of a root system given as vectors (with optional Gram matrix)."""
    if isinstance(roots, RootSystem):
        return analyse_vectors(roots.roots, roots.gram).system.type
    return analyse_vectors(roots, form).system.type
