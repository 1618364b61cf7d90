import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from lietorus.intmat import hermite_rows, int_det, int_matmul, invariant_factors, smith_normal_form

ints = st.integers(min_value=-9, max_value=9)


def mats(r, c):
    return st.lists(st.lists(ints, min_size=c, max_size=c), min_size=r, max_size=r)


shapes = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: mats(r, c)))


@given(shapes)
def test_smith_form_is_a_factorisation(a):
    U, D, V = smith_normal_form(a)
    assert int_matmul(int_matmul(U, a), V) == D
    assert abs(int_det(U)) == 1 and abs(int_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@given(shapes)
def test_invariant_factors_match_sympy(a):
    ref = sympy_snf(sympy.Matrix(a), domain=sympy.ZZ)
    expected = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i])
    assert sorted(invariant_factors(a)) == expected


@given(st.integers(1, 5).flatmap(lambda n: mats(n, n)))
def test_bareiss_determinant(a):
    assert int_det(a) == int(sympy.Matrix(a).det())


@given(shapes)
def test_hermite_rows_span_the_same_lattice(a):
    H = hermite_rows(a)
    # same row lattice: each side lies in the other's row span over Z
    Ha = sympy.Matrix(H) if H else sympy.zeros(0, len(a[0]))
    A = sympy.Matrix(a)
    assert Ha.rank() == A.rank()
    if H:
        ref = sympy_snf(A, domain=sympy.ZZ)
        refH = sympy_snf(Ha, domain=sympy.ZZ)
        d1 = [abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i]]
        d2 = [abs(int(refH[i, i])) for i in range(min(refH.shape)) if refH[i, i]]
        assert sorted(d1) == sorted(d2)
        for row in H:
            sol = sympy.Matrix(a).T.gauss_jordan_solve(sympy.Matrix(row))[0]
            assert sol is not None


def test_diag_4_6():
    _, D, _ = smith_normal_form([[4, 0], [0, 6]])
    assert [D[0][0], D[1][1]] == [2, 12]


def test_identity_and_scalar():
    assert smith_normal_form([[1, 0], [0, 1]]) == ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]])
    _, D, _ = smith_normal_form([[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert D == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
