import pytest
from hypothesis import given, strategies as st

from lietorus import catalog
from lietorus.autos import (
    AutTuple,
    Automorphism,
    check_A_conditions,
    conjugation_automorphism,
    diagram_automorphism,
    grading_by_tuple,
    identity_automorphism,
    torus_automorphism,
    tuple_power_action,
)
from lietorus.chevalley import chevalley_basis
from lietorus.errors import (
    NonCommutingTuple,
    NotADiagramSymmetry,
    NotAnAutomorphism,
    NotInIsometryGroup,
    ZeroScalar,
)
from lietorus.field import FieldContext, zeta_of_order
from lietorus.structure import cartan_subalgebra, root_space_decomposition


def test_b3_tuple_orders_and_fixed_dims(b3):
    s, sigma, _ = b3
    assert sigma.orders == (2, 2, 2)
    assert sigma.group_order == 8
    assert sigma.group_structure.invariant_factors == (2, 2, 2)
    assert [e.fixed_dim() for e in sigma] == [11, 11, 11]
    assert sigma[0].eigen_profile() == [(1, 11), (2, 10)]


def test_b3_grading_components(b3):
    s, sigma, _ = b3
    gr = grading_by_tuple(s, sigma)
    dims = gr.dims()
    assert dims[(0, 0, 0)] == 3
    assert sorted(dims.values()) == [2, 2, 2, 3, 3, 3, 3, 3]
    assert sum(dims.values()) == 21
    # odd parity in all three slots lands in a 3-dimensional component
    assert dims[(1, 1, 1)] == 3


def test_b3_A_conditions(b3):
    s, sigma, h = b3
    rep = check_A_conditions(s, sigma, h)
    assert rep.passed and rep.failures() == []
    assert rep.fixed_dim == 3 and str(rep.delta_g.type) == "A1"
    assert str(rep.delta.type) == "A1"
    assert rep.relation == "Delta = Delta_g"
    kinds = sorted(x.identity for m in rep.modules.values() for x in m.summands)
    assert kinds.count("adjoint") == 4
    assert kinds.count("trivial") == 6  # three 2-dim components, two trivial summands each


def test_identity_tuple_is_untwisted():
    s, sigma = catalog.untwisted_tuple("G2", 2)
    rep = check_A_conditions(s, sigma)
    assert rep.passed
    assert rep.fixed_dim == 14 and str(rep.delta.type) == "G2"


def test_identity_tuple_over_nonsimple_fixed_fails_A1(b3):
    s, sigma, _ = b3
    # a single diagonal reflection fixes o(3) + o(4), which is not simple
    one = AutTuple([sigma[0]])
    rep = check_A_conditions(s, one)
    assert not rep.A1
    assert "(A1)" in rep.failures()


@pytest.mark.parametrize("name,order", [("A2", 2), ("A3", 2), ("D4", 2), ("D4-3", 3)])
def test_diagram_automorphism_order(name, order):
    s, sigma = catalog.diagram_tuple(name)
    assert sigma.orders == (order,)
    assert sigma[0].matrix != identity_automorphism(s).matrix


def test_diagram_automorphism_rejects_non_symmetry():
    s, ep = chevalley_basis("B2")
    with pytest.raises(NotADiagramSymmetry):
        diagram_automorphism(s, ep, (1, 0))
    with pytest.raises(NotADiagramSymmetry):
        diagram_automorphism(s, ep, (0, 0))


def test_not_an_automorphism():
    s, _ = chevalley_basis("A1")
    with pytest.raises(NotAnAutomorphism):
        Automorphism(s, [[1, 0, 0], [0, 2, 0], [0, 0, 1]])


def test_noncommuting_tuple(b3):
    s, sigma, _ = b3
    swap = [[int(j == {3: 4, 4: 3}.get(i, i)) for j in range(7)] for i in range(7)]
    with pytest.raises(NonCommutingTuple):
        AutTuple([sigma[0], conjugation_automorphism(s, swap)])


def test_torus_automorphism_scalars():
    s, _ = chevalley_basis("A2")
    s = s.over(FieldContext(3))
    rd = root_space_decomposition(s, cartan_subalgebra(s))
    z = zeta_of_order(s.context, 3)
    t = torus_automorphism(rd, [z, z])
    assert t.order == 3
    # fixed algebra of Ad(rho) with rho = (z, z) is the Cartan plus nothing else
    assert t.fixed_dim() == 2
    with pytest.raises(ZeroScalar):
        torus_automorphism(rd, [0, 1])


def test_conjugation_requires_isometry(b3):
    s, _, _ = b3
    bad = [[2 if i == j == 3 else int(i == j) for j in range(7)] for i in range(7)]
    with pytest.raises(NotInIsometryGroup):
        conjugation_automorphism(s, bad)


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_element_is_a_homomorphism(b3, a, b):
    _, sigma, _ = b3
    lhs = sigma.element([x + y for x, y in zip(a, b)])
    assert lhs == sigma.element(a) * sigma.element(b)


def test_power_action_preserves_group(b3):
    _, sigma, _ = b3
    P = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    tau = tuple_power_action(sigma, P)
    mats = lambda tup: {tuple(map(tuple, m)) for _, m in tup.elements.values()}
    assert mats(tau) == mats(sigma)


def test_json_round_trip(b3):
    s, sigma, _ = b3
    e = sigma[1]
    assert Automorphism.from_json(s, e.to_json()) == e


def test_grading_dimension_sum_and_modulus(b3):
    s, sigma, _ = b3
    gr = grading_by_tuple(s, sigma, modulus=(4, 2, 2))
    assert sum(gr.dims().values()) == 21
    # residues in the first slot only use even classes when the modulus doubles
    assert all(k[0] % 2 == 0 for k, v in gr.dims().items() if v)
