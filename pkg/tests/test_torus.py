import pytest
from hypothesis import given, strategies as st

from lietorus import catalog
from lietorus.errors import HomogeneityViolation, InputError, NotAdmissible
from lietorus.rootsys import RootLatticeHom
from lietorus.torus import (
    build_multiloop,
    central_grading_group,
    cube,
    make_isotope,
    root_grading_pair,
    sl2_triple,
    support_semilattices,
    verify_lie_torus_axioms,
    weyl_automorphism_window,
    window_bracket,
)

E = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


@pytest.fixture(scope="module")
def untwisted():
    out = {}
    for t in ("A1", "A2", "G2"):
        for n in (1, 2):
            s, sigma = catalog.untwisted_tuple(t, n)
            out[(t, n)] = build_multiloop(s, sigma)
    return out


def test_b3_torus_shape(b3_torus):
    T = b3_torus
    assert T.is_torus and T.nullity == 3 and T.orders == (2, 2, 2)
    assert sorted(T.delta.roots) == [(-1,), (0,), (1,)]
    assert T.residues_of((1,)) == frozenset([(0, 0, 0), *E, (1, 1, 1)])
    assert T.residues_of((-1,)) == T.residues_of((1,))
    assert len(T.residues_of((0,))) == 8


def test_b3_axioms(b3_torus):
    ax = verify_lie_torus_axioms(b3_torus)
    assert ax["pass"]
    assert ax["(LT4)"]["agrees_with_A3"] is True
    assert ax["(LT1)"]["type"] == "A1"


def test_b3_cells_are_at_most_one_dimensional_off_zero(b3_torus):
    for (a, _), sp in b3_torus.cells.items():
        if any(a):
            assert sp.dim <= 1


def test_b3_sl2_triple(b3_torus):
    T = b3_torus
    tri = sl2_triple(T, (1,), (1, 0, 0))
    s = T.base
    assert s.bracket(tri.e, tri.f) == [x for x in tri.h]
    assert s.bracket(tri.h, tri.e) == [2 * x for x in tri.e]
    assert sl2_triple(T, (1,), (0, 1, 1)) is None


def test_b3_semilattices(b3_torus):
    _, props = support_semilattices(b3_torus)
    assert props["pass"], props


def test_b3_root_grading_pair(b3_torus):
    rgp = root_grading_pair(b3_torus)
    assert rgp.g.dim == 3 and rgp.h.dim == 1 and rgp.g_type == "A1"
    assert all(rgp.checks.values())


def test_b3_central_grading_group(b3_torus):
    G = central_grading_group(b3_torus, 2)
    assert G.index == 8 and G.fgc and G.window_check
    assert G.basis == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]


def test_window_bracket_degrees(b3_torus):
    T = b3_torus
    x = T.cell((1,), (1, 0, 0)).rows[0]
    y = T.cell((-1,), (0, 1, 0)).rows[0]
    z, deg = window_bracket(T, (x, (1, 0, 0)), (y, (0, 1, 0)))
    assert deg == (1, 1, 0)
    assert T.cell((0,), deg).contains(z)
    with pytest.raises(HomogeneityViolation):
        window_bracket(T, (x, (0, 0, 0)), (y, (0, 1, 0)))


def test_b3_weyl_window(b3_torus):
    res = weyl_automorphism_window(b3_torus, (1,), (1, 0, 0), radius=1)
    assert res.passed and res.checked > 0


def test_b3_isotope_admissible(b3_torus):
    res = make_isotope(b3_torus, RootLatticeHom(3, [(1, 1, 1)]), radius=1)
    assert res.window_check
    assert verify_lie_torus_axioms(res.new_torus)["pass"]
    assert res.feasibility["1"]["dim"] == 1
    assert res.feasibility["-1"]["basis"] == ["e37-e71"]


def test_b3_isotope_variant_rejected(b3_torus):
    with pytest.raises(NotAdmissible) as info:
        make_isotope(b3_torus, RootLatticeHom(3, [(1, 1, 0)]))
    w = info.value.witness
    assert w["fixed_dim"] == 1 and not w["fixed_simple"]


@given(st.sampled_from([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (0, 0, 0), (2, -1, 2), (-1, -1, -1)]))
def test_admissible_shifts_shift_cells(b3_torus, shift):
    res = make_isotope(b3_torus, RootLatticeHom(3, [shift]), radius=1)
    assert res.window_check


def test_isotope_needs_torus():
    s, sigma = catalog.untwisted_tuple("A1", 1)
    T = build_multiloop(s, sigma)
    with pytest.raises(InputError):
        make_isotope(T, RootLatticeHom(1, [(1, 2)]))


@pytest.mark.parametrize("key", [("A1", 1), ("A1", 2), ("A2", 1), ("A2", 2), ("G2", 1), ("G2", 2)])
def test_untwisted_property_suite(untwisted, key):
    T = untwisted[key]
    n = key[1]
    assert verify_lie_torus_axioms(T)["pass"]
    assert support_semilattices(T)[1]["pass"]
    assert all(root_grading_pair(T).checks.values())
    G = central_grading_group(T, 1)
    assert G.index == 1 and G.window_check
    for a in T.delta.base:
        for lam in cube(n, 1):
            assert weyl_automorphism_window(T, a, lam, radius=1).passed


def test_cube_size():
    assert len(cube(2, 1)) == 9
    assert len(cube(3, 2)) == 125
