import math

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from lietorus.errors import ContextMismatch, DivisionByZero, NonSplittingPolynomial, OrderNotDividingConductor
from lietorus.field import (
    CyclotomicNumber,
    ExactPolynomial,
    FieldContext,
    cyclotomic_polynomial,
    scalar_from_str,
    scalar_to_str,
    simplify,
    split_into_linear_factors,
    zeta_of_order,
)

CONDUCTORS = [1, 3, 4, 5, 8, 12]
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12).map(lambda f: mpq(f.numerator, f.denominator))


@st.composite
def elements(draw, N):
    ctx = FieldContext(N)
    return CyclotomicNumber([draw(rationals) for _ in range(ctx.degree)], ctx)


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_polynomial_matches_sympy(n):
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in ref]


def test_context_is_singleton():
    assert FieldContext(12) is FieldContext(12)


@pytest.mark.parametrize("N", CONDUCTORS)
def test_field_axioms(N):
    @given(elements(N), elements(N), elements(N))
    def check(a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0 * a
        if a:
            assert simplify(a * a.inverse()) == 1

    check()


def test_zero_inverse_raises():
    with pytest.raises(DivisionByZero):
        CyclotomicNumber([0, 0], FieldContext(3)).inverse()


def test_mixing_contexts_raises():
    with pytest.raises(ContextMismatch):
        FieldContext(3).zeta_power(1) + FieldContext(4).zeta_power(1)


@pytest.mark.parametrize("N", range(1, 25))
def test_roots_of_unity_compatible(N):
    """zeta_(m l)^m = zeta_l for every divisor pair of the conductor."""
    ctx = FieldContext(N)
    for l in range(1, N + 1):
        for m in range(1, N // l + 1):
            if N % (m * l) == 0:
                assert simplify(zeta_of_order(ctx, m * l) ** m) == simplify(zeta_of_order(ctx, l))
    z = zeta_of_order(ctx, N)
    assert simplify(z ** N) == 1
    assert all(simplify(z ** k) != 1 for k in range(1, N))


def test_order_must_divide_conductor():
    with pytest.raises(OrderNotDividingConductor):
        zeta_of_order(FieldContext(4), 3)


def test_embedding_is_a_homomorphism():
    small, big = FieldContext(3), FieldContext(12)
    a = small.zeta_power(1)
    b = CyclotomicNumber([mpq(1, 2), mpq(-3)], small)
    assert big.embed(a * b) == big.embed(a) * big.embed(b)
    assert big.embed(a) == zeta_of_order(big, 3)


@pytest.mark.parametrize("N", CONDUCTORS)
def test_scalar_text_round_trip(N):
    @given(elements(N))
    def check(a):
        x = simplify(a)
        assert scalar_from_str(scalar_to_str(x), FieldContext(N)) == x

    check()


def test_rational_cyclotomic_hash_agrees():
    ctx = FieldContext(5)
    x = CyclotomicNumber([mpq(3, 2)], ctx)
    assert simplify(x) == mpq(3, 2) and hash(simplify(x)) == hash(mpq(3, 2))


@pytest.mark.parametrize("N", [1, 4, 8])
def test_split_matches_sympy_root_count(N):
    ctx = FieldContext(N)
    x = sympy.Symbol("x")
    cases = [x ** 2 + 1, x ** 4 - 1, (x - 2) ** 3 * (x + mpq(1, 3)), x ** 8 - 1, x ** 2 - 2]
    for expr in cases:
        poly = sympy.Poly(expr, x)
        coeffs = [mpq(str(c)) for c in poly.all_coeffs()[::-1]]
        p = ExactPolynomial(coeffs, ctx)
        ext = sympy.Poly(expr, x, extension=sympy.exp(2 * sympy.pi * sympy.I / N)) if N > 2 else poly
        linear = sum(m for f, m in ext.factor_list()[1] if f.degree() == 1)
        if linear == poly.degree():
            roots = split_into_linear_factors(p)
            assert sum(m for _, m in roots) == poly.degree()
            for r, _ in roots:
                assert simplify(p(r)) == 0
        else:
            with pytest.raises(NonSplittingPolynomial) as info:
                split_into_linear_factors(p)
            assert info.value.factor.degree == poly.degree() - linear


def test_split_x4_minus_1_over_gaussian():
    ctx = FieldContext(4)
    p = ExactPolynomial([-1, 0, 0, 0, 1], ctx)
    roots = {scalar_to_str(simplify(r)) for r, _ in split_into_linear_factors(p)}
    i = zeta_of_order(ctx, 4)
    assert roots == {scalar_to_str(simplify(v)) for v in (mpq(1), mpq(-1), i, -i)}
