"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) modulo the
N-th cyclotomic polynomial, with ``gmpy2.mpq`` coordinates.  Inside the
linear-algebra kernels rational scalars are kept as bare ``mpq`` values;
:class:`CyclotomicNumber` interoperates with them transparently, and
:func:`simplify` demotes a rational cyclotomic number back to ``mpq``.

Roots of unity are chosen compatibly: ``zeta(m) = zeta_N ** (N // m)``, so
``zeta(m * l) ** m == zeta(l)`` whenever ``m * l`` divides ``N``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np
from gmpy2 import mpq

from .errors import (
    ContextMismatch,
    DivisionByZero,
    InputError,
    NonSplittingPolynomial,
    OrderNotDividingConductor,
)

RATIONAL_TYPES = (int, mpq)


def parse_rational(text) -> mpq:
    """Parse ``"a/b"``, ``"a"`` or an int into an ``mpq``."""
    if isinstance(text, RATIONAL_TYPES):
        return mpq(text)
    try:
        return mpq(str(text).strip())
    except ValueError as exc:
        raise InputError(f"not an exact rational: {text!r}") from exc


def format_rational(q) -> str:
    q = mpq(q)
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise InputError(f"conductor must be positive, got {n}")
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_poly_exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _int_poly_exact_div(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for k in range(len(quot) - 1, -1, -1):
        c = num[k + dd]  # den is monic
        quot[k] = c
        if c:
            for i, b in enumerate(den):
                num[k + i] -= c * b
    assert not any(num[:dd]), "inexact cyclotomic division"
    return quot


class FieldContext:
    """The field Q(zeta_N).  One instance per conductor."""

    _cache: dict[int, "FieldContext"] = {}

    def __new__(cls, N: int):
        N = int(N)
        if N < 1:
            raise InputError(f"conductor must be positive, got {N}")
        ctx = cls._cache.get(N)
        if ctx is None:
            ctx = super().__new__(cls)
            ctx._setup(N)
            cls._cache[N] = ctx
        return ctx

    def __getnewargs__(self):
        return (self.N,)

    def _setup(self, N: int) -> None:
        self.N = N
        self.cyclotomic_polynomial = cyclotomic_polynomial(N)
        self.degree = len(self.cyclotomic_polynomial) - 1
        # x^k mod Phi_N for 0 <= k < 2*degree - 1
        deg = self.degree
        rows = []
        cur = [0] * deg
        cur[0] = 1
        for _ in range(max(2 * deg - 1, 1)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(deg):
                    cur[i] -= top * self.cyclotomic_polynomial[i]
        self._reduce = rows
        self._zero = CyclotomicNumber._raw((mpq(0),) * deg, self)

    def __repr__(self) -> str:
        return f"FieldContext(N={self.N})"

    def __reduce__(self):
        return (FieldContext, (self.N,))

    def zeta_power(self, k: int) -> "CyclotomicNumber":
        """zeta_N ** k for any integer k."""
        k %= self.N
        poly = [mpq(0)] * k + [mpq(1)]
        return CyclotomicNumber(poly, self)

    def zeta(self, m: int) -> "CyclotomicNumber":
        return zeta_of_order(self, m)

    def element(self, value) -> "CyclotomicNumber":
        """Coerce an int, rational string, mpq or cyclotomic number."""
        if isinstance(value, CyclotomicNumber):
            if value.context is not self:
                raise ContextMismatch(f"element of Q(zeta_{value.context.N}) used in Q(zeta_{self.N})")
            return value
        if isinstance(value, str):
            value = parse_rational(value)
        return CyclotomicNumber([mpq(value)], self)

    def embed(self, value) -> "CyclotomicNumber":
        """Map an element of Q(zeta_M), M | N, into this field."""
        if not isinstance(value, CyclotomicNumber):
            return self.element(value)
        src = value.context
        if src is self:
            return value
        if self.N % src.N:
            raise ContextMismatch(f"Q(zeta_{src.N}) is not a subfield of Q(zeta_{self.N})")
        step = self.N // src.N
        out = self._zero
        for j, c in enumerate(value.coeffs):
            if c:
                out = out + self.zeta_power(j * step) * c
        return out

    def units(self) -> list[int]:
        return [k for k in range(1, self.N + 1) if math.gcd(k, self.N) == 1]


class CyclotomicNumber:
    """An element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("coeffs", "context")

    def __init__(self, coeffs: Iterable, context: FieldContext):
        coeffs = [mpq(c) if not isinstance(c, mpq) else c for c in coeffs]
        deg = context.degree
        if len(coeffs) > deg:
            coeffs = _reduce_poly(coeffs, context)
        elif len(coeffs) < deg:
            coeffs = coeffs + [mpq(0)] * (deg - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.context = context

    @classmethod
    def _raw(cls, coeffs: tuple, context: FieldContext) -> "CyclotomicNumber":
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.context = context
        return obj

    # coercion -----------------------------------------------------------
    def _other(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.context is not self.context:
                raise ContextMismatch(
                    f"Q(zeta_{self.context.N}) and Q(zeta_{other.context.N}) elements mixed"
                )
            return other.coeffs
        if isinstance(other, RATIONAL_TYPES):
            return (mpq(other),) + (mpq(0),) * (self.context.degree - 1)
        return None

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        oc = self._other(other)
        if oc is None:
            return NotImplemented
        return CyclotomicNumber._raw(tuple(a + b for a, b in zip(self.coeffs, oc)), self.context)

    __radd__ = __add__

    def __sub__(self, other):
        oc = self._other(other)
        if oc is None:
            return NotImplemented
        return CyclotomicNumber._raw(tuple(a - b for a, b in zip(self.coeffs, oc)), self.context)

    def __rsub__(self, other):
        oc = self._other(other)
        if oc is None:
            return NotImplemented
        return CyclotomicNumber._raw(tuple(b - a for a, b in zip(self.coeffs, oc)), self.context)

    def __neg__(self):
        return CyclotomicNumber._raw(tuple(-a for a in self.coeffs), self.context)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            q = mpq(other)
            return CyclotomicNumber._raw(tuple(a * q for a in self.coeffs), self.context)
        oc = self._other(other)
        if oc is None:
            return NotImplemented
        ctx = self.context
        deg = ctx.degree
        if deg == 1:
            return CyclotomicNumber._raw((self.coeffs[0] * oc[0],), ctx)
        prod = [mpq(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(oc):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:deg])
        table = ctx._reduce
        for k in range(deg, 2 * deg - 1):
            c = prod[k]
            if c:
                for i, t in enumerate(table[k]):
                    if t:
                        out[i] += c * t
        return CyclotomicNumber._raw(tuple(out), ctx)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if not self:
            raise DivisionByZero("inverse of zero in Q(zeta_%d)" % self.context.N)
        ctx = self.context
        if ctx.degree == 1:
            return CyclotomicNumber._raw((1 / self.coeffs[0],), ctx)
        # extended Euclid: s*a + t*Phi = 1
        a = _strip([c for c in self.coeffs])
        phi = [mpq(c) for c in ctx.cyclotomic_polynomial]
        r0, r1 = phi, a
        s0, s1 = [], [mpq(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # Phi_N is irreducible, so the last remainder is a nonzero constant
        c = r1[0]
        return CyclotomicNumber([x / c for x in s1], ctx)

    def __truediv__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            if not other:
                raise DivisionByZero("division by zero")
            q = 1 / mpq(other)
            return CyclotomicNumber._raw(tuple(a * q for a in self.coeffs), self.context)
        if isinstance(other, CyclotomicNumber):
            self._other(other)
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            return self.inverse() * mpq(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = CyclotomicNumber([mpq(1)], self.context)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison ---------------------------------------------------------
    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (CyclotomicNumber,) + RATIONAL_TYPES):
            return self.coeffs == self._other(other)
        if isinstance(other, float):
            return False
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.context.N, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def sort_key(self) -> tuple:
        return self.coeffs

    # numerics and display ----------------------------------------------
    def to_complex(self, k: int = 1) -> complex:
        """Image under the embedding zeta_N -> exp(2 pi i k / N)."""
        N = self.context.N
        return sum(float(c) * cmath.exp(2j * math.pi * j * k / N) for j, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self}, N={self.context.N})"

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self) -> dict:
        return {"N": self.context.N, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CyclotomicNumber":
        ctx = FieldContext(int(data["N"]))
        coeffs = [parse_rational(c) for c in data["coeffs"]]
        if len(coeffs) != ctx.degree:
            raise InputError(f"expected {ctx.degree} coefficients for N={ctx.N}, got {len(coeffs)}")
        return cls(coeffs, ctx)


def zeta_of_order(ctx: FieldContext, m: int) -> CyclotomicNumber:
    """The primitive m-th root of unity zeta_N ** (N/m)."""
    if m < 1 or ctx.N % m:
        raise OrderNotDividingConductor(f"order {m} does not divide the conductor {ctx.N}")
    return ctx.zeta_power(ctx.N // m)


def simplify(x):
    """Demote a rational cyclotomic number to ``mpq``."""
    if isinstance(x, CyclotomicNumber) and x.is_rational():
        return x.coeffs[0]
    return x


def scalar_key(x) -> tuple:
    """Deterministic sort key for mixed mpq / cyclotomic scalars."""
    if isinstance(x, CyclotomicNumber):
        return x.coeffs
    return (mpq(x),)


def scalar_to_str(x) -> str:
    """Exact text form: ``"a/b"`` for rationals, ``"[a/b, ...]@N"`` otherwise."""
    x = simplify(x)
    if isinstance(x, CyclotomicNumber):
        return "[" + ",".join(format_rational(c) for c in x.coeffs) + f"]@{x.context.N}"
    return format_rational(x)


def scalar_from_str(text, ctx: FieldContext):
    if isinstance(text, dict):
        return ctx.embed(CyclotomicNumber.from_json(text))
    if isinstance(text, RATIONAL_TYPES):
        return mpq(text)
    text = str(text).strip()
    if text.startswith("["):
        body, _, n = text.rpartition("@")
        coeffs = [parse_rational(c) for c in body.strip("[]").split(",")]
        src = FieldContext(int(n))
        if len(coeffs) != src.degree:
            raise InputError(f"bad cyclotomic literal {text!r}")
        return simplify(ctx.embed(CyclotomicNumber(coeffs, src)))
    return parse_rational(text)


# ---------------------------------------------------------------------------
# rational polynomial helpers (lowest degree first)


def _strip(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _strip(out)


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _strip(a)
    q = [mpq(0)] * (len(a) - db)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = a[k + db] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    return _strip(q), _strip(a[:db])


def _reduce_poly(coeffs: list, ctx: FieldContext) -> list:
    phi = ctx.cyclotomic_polynomial
    deg = ctx.degree
    coeffs = list(coeffs)
    for k in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[k]
        if c:
            for i, b in enumerate(phi):
                coeffs[k - deg + i] -= c * b
    return coeffs[:deg]


# ---------------------------------------------------------------------------
# polynomials over the field


class ExactPolynomial:
    """Dense polynomial over Q(zeta_N), coefficients lowest degree first.

    Coefficients may be ``mpq`` or :class:`CyclotomicNumber`; the zero
    polynomial has an empty coefficient list.
    """

    __slots__ = ("coefficients", "context")

    def __init__(self, coefficients: Iterable, context: FieldContext):
        coeffs = [simplify(context.element(c)) if isinstance(c, (str, CyclotomicNumber)) else mpq(c)
                  if isinstance(c, int) else c for c in coefficients]
        self.coefficients = tuple(_strip(coeffs))
        self.context = context

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"ExactPolynomial({[str(c) for c in self.coefficients]}, N={self.context.N})"

    def lead(self):
        return self.coefficients[-1]

    def _new(self, coeffs) -> "ExactPolynomial":
        obj = object.__new__(ExactPolynomial)
        obj.coefficients = tuple(_strip([simplify(c) for c in coeffs]))
        obj.context = self.context
        return obj

    def __add__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return self._new([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __sub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return self._new([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])

    def __mul__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return self._new([])
        out = [mpq(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return self._new(out)

    def scale(self, c) -> "ExactPolynomial":
        return self._new([c * x for x in self.coefficients])

    def __divmod__(self, other: "ExactPolynomial"):
        if not other:
            raise DivisionByZero("polynomial division by zero")
        a = list(self.coefficients)
        b = other.coefficients
        db = len(b) - 1
        if len(a) - 1 < db:
            return self._new([]), self
        inv_lead = 1 / b[-1]
        q = [mpq(0)] * (len(a) - db)
        for k in range(len(q) - 1, -1, -1):
            c = a[k + db] * inv_lead
            q[k] = c
            if c:
                for i, y in enumerate(b):
                    if y:
                        a[k + i] = a[k + i] - c * y
        return self._new(q), self._new(a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = mpq(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "ExactPolynomial":
        return self._new([c * k for k, c in enumerate(self.coefficients)][1:])

    def monic(self) -> "ExactPolynomial":
        if not self:
            return self
        inv = 1 / self.lead()
        return self._new([c * inv for c in self.coefficients])

    @classmethod
    def from_roots(cls, roots: Iterable, context: FieldContext) -> "ExactPolynomial":
        p = cls([1], context)
        for r in roots:
            p = p * cls([-r, 1], context)
        return p


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(p: ExactPolynomial) -> list[tuple[ExactPolynomial, int]]:
    """Yun's algorithm: monic p = prod a_i ** i with a_i square-free, coprime."""
    p = p.monic()
    out = []
    if p.degree < 1:
        return out
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p // a0
    c = dp // a0
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def _integral_coords(x) -> list:
    if isinstance(x, CyclotomicNumber):
        return list(x.coeffs)
    return [mpq(x)]


def _roots_squarefree(q: ExactPolynomial) -> tuple[list, ExactPolynomial]:
    """Roots of a monic square-free polynomial, and the root-free remainder."""
    ctx = q.context
    n = q.degree
    if n == 0:
        return [], q
    den = 1
    for c in q.coefficients:
        for x in _integral_coords(c):
            den = math.lcm(den, int(x.denominator))
    # y = den * x turns q into a monic polynomial over Z[zeta_N]
    qi = q._new([c * mpq(den) ** (n - k) for k, c in enumerate(q.coefficients)])
    found = []
    residual = qi
    for y in _candidate_roots(qi):
        if residual.degree < 1:
            break
        if not residual(y):
            residual = residual // ExactPolynomial([-y, 1], ctx)
            found.append(y)
    roots = [simplify(y / den) if isinstance(y, CyclotomicNumber) else mpq(y) / den for y in found]
    rem = ExactPolynomial([1], ctx)
    if residual.degree > 0:
        rem = q._new([c / mpq(den) ** (residual.degree - k) for k, c in enumerate(residual.coefficients)])
    return roots, rem


def _fujiwara_bound(coeffs_abs: list[float]) -> float:
    n = len(coeffs_abs) - 1
    best = 0.0
    for k in range(1, n + 1):
        a = coeffs_abs[n - k]
        if a:
            best = max(best, (a / (2.0 if k == n else 1.0)) ** (1.0 / k))
    return 2.0 * best


def _candidate_roots(qi: ExactPolynomial):
    """Candidate roots in Z[zeta_N] for a monic integral polynomial.

    Degree-1 fields use an exhaustive integer scan when the root bound is
    small; otherwise candidates come from high-precision complex roots of
    each embedding, matched across embeddings and rounded.  Every candidate
    is verified exactly by the caller.
    """
    ctx = qi.context
    deg = ctx.degree
    if deg == 1:
        ints = [int(simplify(c)) for c in qi.coefficients]
        bound = _fujiwara_bound([abs(float(c)) for c in ints])
        if bound <= 20000:
            b = int(math.ceil(bound)) + 1
            for y in range(-b, b + 1):
                acc = 0
                for c in reversed(ints):
                    acc = acc * y + c
                if acc == 0:
                    yield mpq(y)
            return
    N = ctx.N
    emb = [k for k in ctx.units() if 2 * k <= N] if deg > 1 else [1]
    numeric = {k: _numeric_roots(qi, k) for k in emb}
    # real linear system: coordinates -> (Re, Im) of each chosen embedding
    rows = []
    for k in emb:
        rows.append([math.cos(2 * math.pi * j * k / N) for j in range(deg)])
        if deg > 1:
            rows.append([math.sin(2 * math.pi * j * k / N) for j in range(deg)])
    mat = np.array(rows, dtype=float)
    seen = set()
    budget = 200000
    for combo in itertools.product(*(numeric[k] for k in emb)):
        budget -= 1
        if budget < 0:
            return
        rhs = []
        for z in combo:
            rhs.append(z.real)
            if deg > 1:
                rhs.append(z.imag)
        try:
            sol = np.linalg.solve(mat, np.array(rhs))
        except np.linalg.LinAlgError:
            return
        key = tuple(int(round(v)) for v in sol)
        if key in seen:
            continue
        seen.add(key)
        y = CyclotomicNumber([mpq(v) for v in key], ctx)
        yield simplify(y) if deg == 1 else y


def _numeric_roots(qi: ExactPolynomial, k: int) -> list[complex]:
    ctx = qi.context
    N = ctx.N
    with mpmath.workdps(60):
        w = mpmath.exp(2j * mpmath.pi * k / N)
        coeffs = []
        for c in reversed(qi.coefficients):
            coeffs.append(sum(mpmath.mpf(int(x.numerator)) / int(x.denominator) * w ** j
                              for j, x in enumerate(_integral_coords(c))))
        if len(coeffs) == 2:
            return [complex(-coeffs[1] / coeffs[0])]
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=200)
        except mpmath.libmp.libhyper.NoConvergence:
            roots = np.roots([complex(c) for c in coeffs])
        return [complex(r) for r in roots]


def split_into_linear_factors(p: ExactPolynomial) -> list[tuple[CyclotomicNumber, int]]:
    """Roots of p in Q(zeta_N) with multiplicities.

    Raises NonSplittingPolynomial carrying the root-free part when p does
    not factor into linear factors over the field.  Roots are ordered
    lexicographically by their power-basis coordinates.
    """
    if not p:
        raise InputError("the zero polynomial has no factorisation")
    ctx = p.context
    out = []
    leftover = ExactPolynomial([1], ctx)
    for part, mult in squarefree_decomposition(p):
        roots, rem = _roots_squarefree(part)
        out.extend((r, mult) for r in roots)
        if rem.degree > 0:
            for _ in range(mult):
                leftover = leftover * rem
    if leftover.degree > 0:
        raise NonSplittingPolynomial(leftover)
    out.sort(key=lambda rm: scalar_key(rm[0]))
    return [(ctx.element(r), m) for r, m in out]
