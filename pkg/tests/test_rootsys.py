import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from lietorus.errors import InvalidType, NotARootSystem
from lietorus.linalg import inverse, matmul, transpose
from lietorus.rootsys import (
    RootLatticeHom,
    RootSystemType,
    analyse_vectors,
    build_root_system,
    derive_variants,
    identify_type,
    short_roots,
    weyl_orbit,
)

# number of nonzero roots, from the order formulas l(l+1), 2l^2, 2l(l-1), ...
COUNTS = {"A1": 2, "A2": 6, "A3": 12, "A4": 20, "B2": 8, "B3": 18, "B4": 32, "C3": 18, "C4": 32,
          "D4": 24, "D5": 40, "E6": 72, "E7": 126, "E8": 240, "F4": 48, "G2": 12,
          "BC1": 4, "BC2": 12, "BC3": 24}
TYPES = sorted(COUNTS)


@pytest.mark.parametrize("name", TYPES)
def test_root_counts(name):
    rs = build_root_system(name)
    assert len(rs.nonzero) == COUNTS[name]
    assert rs.zero in rs.root_set
    assert all(tuple(-c for c in r) in rs.root_set for r in rs.roots)


@pytest.mark.parametrize("name", TYPES)
def test_axioms(name):
    rs = build_root_system(name)
    for a in rs.nonzero:
        for b in rs.nonzero:
            assert rs.reflect(b, a) in rs.root_set
            rs.pairing(b, a)  # integrality is checked inside


@pytest.mark.parametrize("name", [t for t in TYPES if not t.startswith("BC")])
def test_cartan_matrix_is_generalised_cartan(name):
    C = build_root_system(name).cartan_matrix
    n = len(C)
    assert all(C[i][i] == 2 for i in range(n))
    assert all(C[i][j] <= 0 and (C[i][j] == 0) == (C[j][i] == 0) for i in range(n) for j in range(n) if i != j)


@pytest.mark.parametrize("name,theta,theta_sh", [
    ("F4", (2, 3, 4, 2), (1, 2, 3, 2)),
    ("G2", (3, 2), (2, 1)),
    ("B3", (1, 2, 2), (1, 1, 1)),
    ("E6", (1, 2, 2, 3, 2, 1), (1, 2, 2, 3, 2, 1)),
])
def test_highest_roots(name, theta, theta_sh):
    v = derive_variants(build_root_system(name))
    assert v.theta == theta and v.theta_sh == theta_sh


def test_enlarged_and_indivisible():
    assert str(derive_variants(build_root_system("A1")).en.type) == "BC1"
    assert str(derive_variants(build_root_system("B3")).en.type) == "BC3"
    assert derive_variants(build_root_system("C3")).en.type == RootSystemType("C", 3)
    assert str(derive_variants(build_root_system("BC2")).ind.type) == "B2"


@pytest.mark.parametrize("name", TYPES)
def test_identification_round_trip(name):
    rs = build_root_system(name)
    assert identify_type(rs.roots, rs.gram) == rs.type


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "F4", "BC2"])
def test_identification_after_change_of_basis(name):
    """Identify a root system presented in scrambled coordinates."""
    rs = build_root_system(name)
    n = rs.rank
    # unimodular change of coordinates: v -> U v
    U = [[1 if i == j else (1 if j == i + 1 else 0) for j in range(n)] for i in range(n)]
    vecs = [tuple(sum(U[i][j] * r[j] for j in range(n)) for i in range(n)) for r in rs.roots]
    # transport the form: G' = U^-T G U^-1
    Ui = inverse([[mpq(x) for x in row] for row in U])
    G = matmul(matmul(transpose(Ui), [list(r) for r in rs.gram]), Ui)
    ident = analyse_vectors(vecs, G)
    assert ident.system.type == rs.type
    assert len(ident.coords) == len(rs.roots)


def test_non_root_systems_rejected():
    with pytest.raises(NotARootSystem):
        analyse_vectors([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1), (2, 1)])
    with pytest.raises(InvalidType):
        RootSystemType.parse("D3x")
    with pytest.raises(InvalidType):
        RootSystemType("E", 5)


def test_weyl_orbits_are_length_classes():
    rs = build_root_system("F4")
    sh = set(short_roots(rs))
    assert weyl_orbit(rs, next(iter(sh))) == frozenset(sh)
    assert len(sh) == 24


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_root_lattice_hom_is_additive(u, v):
    s = RootLatticeHom(2, [(1, 0), (0, 1), (1, 1)])
    w = tuple(a + b for a, b in zip(u, v))
    assert s(w) == tuple(a + b for a, b in zip(s(u), s(v)))
    assert (-s)(u) == tuple(-c for c in s(u))
