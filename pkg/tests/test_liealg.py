import pytest
from gmpy2 import mpq

from lietorus.chevalley import chevalley_basis, orthogonal_algebra
from lietorus.errors import InputError, SingularGram, StructureError
from lietorus.field import FieldContext
from lietorus.liealg import (
    LieAlgebra,
    analyze_module,
    cartan_subalgebra,
    is_simple,
    joint_eigenspaces,
    killing_form,
    root_space_decomposition,
)
from lietorus.rootsys import build_root_system

REDUCED = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"]
DIMS = {"A1": 3, "A2": 8, "A3": 15, "B2": 10, "B3": 21, "C3": 21, "D4": 28, "G2": 14, "F4": 52, "E6": 78}


@pytest.mark.parametrize("name", REDUCED + ["E6"])
def test_chevalley_dimension_and_integrality(name):
    L, ep = chevalley_basis(name)
    assert L.dim == DIMS[name]
    for _, _, terms in L.nonzero_brackets():
        assert all(mpq(c).denominator == 1 for _, c in terms)
    assert ep.check_serre(L)


@pytest.mark.parametrize("name", REDUCED)
def test_chevalley_jacobi(name):
    L, _ = chevalley_basis(name)
    L.verify()


@pytest.mark.parametrize("name", ["A2", "B3", "G2"])
def test_chevalley_structure_constants_are_p_plus_one(name):
    """N_(a,b) = +-(p+1) where b - p a is the end of the a-string through b."""
    L, _ = chevalley_basis(name)
    rs = L.root_system
    idx = L.root_index
    for a in rs.nonzero:
        for b in rs.nonzero:
            c = tuple(x + y for x, y in zip(a, b))
            if c in rs.root_set and any(c):
                p = 0
                while tuple(y - (p + 1) * x for x, y in zip(a, b)) in rs.root_set:
                    p += 1
                v = L.bracket(L.basis_vector(idx[a]), L.basis_vector(idx[b]))
                assert abs(v[idx[c]]) == p + 1


def test_a1_killing_form():
    L, _ = chevalley_basis("A1")
    assert killing_form(L) == [[8, 0, 0], [0, 0, 4], [0, 4, 0]]


@pytest.mark.parametrize("name", ["A1", "A2", "G2", "B3", "F4"])
def test_simplicity_cartan_and_roots(name):
    L, _ = chevalley_basis(name)
    assert is_simple(L).simple
    h = cartan_subalgebra(L)
    rd = root_space_decomposition(L, h)
    assert str(rd.roots.type) == name
    assert all(sp.dim == 1 for w, sp in rd.spaces.items() if any(w))
    assert sum(sp.dim for sp in rd.spaces.values()) == L.dim


def _direct_sum(L, M):
    br = {}
    for i, j, terms in L.nonzero_brackets():
        br[(i, j)] = list(terms)
    for i, j, terms in M.nonzero_brackets():
        br[(L.dim + i, L.dim + j)] = [(L.dim + k, c) for k, c in terms]
    return LieAlgebra(L.dim + M.dim, br)


def test_a1_plus_a1_is_not_simple():
    L, _ = chevalley_basis("A1")
    res = is_simple(_direct_sum(L, L))
    assert not res.simple
    assert res.certificate is not None and 0 < res.certificate.dim < 6


def test_abelian_and_o2_are_not_simple():
    o2 = orthogonal_algebra([[1, 0], [0, 1]])
    assert o2.dim == 1
    assert is_simple(o2).reason == "abelian"


def test_so3_is_a1():
    so3 = orthogonal_algebra([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    rd = root_space_decomposition(so3, cartan_subalgebra(so3))
    assert str(rd.roots.type) == "A1"


def test_b3_orthogonal_algebra(b3):
    s, _, h = b3
    assert s.dim == 21
    assert s.labels[0] == "e11-e33"
    assert "e37-e71" in s.labels
    assert is_simple(s).simple
    rd = root_space_decomposition(s, cartan_subalgebra(s))
    assert str(rd.roots.type) == "B3"
    for i in range(s.dim):
        m = s.matrix_of(s.basis_vector(i))
        G = s.form
        # x^T G + G x = 0
        assert all(sum(m[k][a] * G[k][b] + G[a][k] * m[k][b] for k in range(7)) == 0
                   for a in range(7) for b in range(7))


def test_orthogonal_algebra_input_errors():
    with pytest.raises(SingularGram):
        orthogonal_algebra([[1, 0], [0, 0]])
    with pytest.raises(InputError):
        orthogonal_algebra([[1, 1], [0, 1]])


def test_structure_errors():
    with pytest.raises(StructureError):
        LieAlgebra(2, {(0, 1): [(0, 1)], (1, 0): [(0, 1)]})
    # [b0,b1]=b1, [b0,b2]=b1, [b1,b2]=b0 breaks Jacobi
    with pytest.raises(StructureError):
        LieAlgebra(3, {(0, 1): [(1, 1)], (0, 2): [(1, 1)], (1, 2): [(0, 1)]})


def test_adjoint_module_of_a1_is_adjoint():
    L, _ = chevalley_basis("A1")
    h = cartan_subalgebra(L)
    rep = analyze_module(L, h, L.full())
    assert [x.identity for x in rep.summands] == ["adjoint"]


def test_module_decomposition_of_b3_components(b3_torus):
    rep = b3_torus.a_report
    kinds = sorted(tuple(sorted(x.identity for x in m.summands)) for m in rep.modules.values())
    assert kinds.count(("adjoint",)) == 4
    assert kinds.count(("trivial", "trivial")) == 3


def test_joint_eigenspaces_need_split_field():
    so2 = orthogonal_algebra([[1, 0, 0], [0, 1, 0], [0, 0, 1]])  # so3 in the form x^2+y^2+z^2
    from lietorus.errors import FieldTooSmall

    with pytest.raises(FieldTooSmall):
        joint_eigenspaces(so2, [so2.basis_vector(0)])
    so2i = orthogonal_algebra([[1, 0, 0], [0, 1, 0], [0, 0, 1]], FieldContext(4))
    spaces = joint_eigenspaces(so2i, [so2i.basis_vector(0)])
    assert sorted(sp.dim for sp in spaces.values()) == [1, 1, 1]


def test_json_round_trip():
    L, _ = chevalley_basis("G2")
    M = LieAlgebra.from_json(L.to_json())
    assert M.dim == L.dim
    assert all(M.bracket(M.basis_vector(i), M.basis_vector(j)) == L.bracket(L.basis_vector(i), L.basis_vector(j))
               for i in range(L.dim) for j in range(L.dim))


def test_chevalley_roots_match_root_system():
    L, _ = chevalley_basis("C3")
    assert L.root_system == build_root_system("C3")
