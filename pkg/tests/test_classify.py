import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lietorus import catalog
from lietorus.autos import AutTuple, conjugation_automorphism, tuple_power_action
from lietorus.classify import (
    Modulus,
    biiso_fingerprint,
    brute_force_orbit_oracle,
    certificate_check,
    check_isomorphism,
    normalize_batch,
    normalize_mod_ideal,
    oracle_agreement,
    orbit_partition,
    orbit_representatives,
    solve_witness,
    untwisted_test,
)
from lietorus.errors import (
    DivisibilityChainViolated,
    InputError,
    NotAnIsomorphism,
    NotATorusAutomorphism,
    NotAWitness,
    OrbitTooLarge,
    TooFewSlots,
)
from lietorus.intmat import int_det, int_matmul
from lietorus.torus import build_multiloop

ID3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def _twisted(b3):
    s, sigma, h = b3
    twist = [conjugation_automorphism(s, catalog.B3_TWIST)] * 3
    return twist, build_multiloop(s, AutTuple([t * g for t, g in zip(twist, sigma.entries)]), h)


# normal forms


def test_normalize_examples():
    assert normalize_mod_ideal([[1, 0], [0, 2]], (5, 5)).p == 2
    assert normalize_mod_ideal([[1, 0], [0, 3]], (4, 4)).p == 1
    assert normalize_mod_ideal([[1, 0], [0, 4]], (5, 5)).p == 1
    assert normalize_mod_ideal([[2, 1], [1, 1]], (7, 7)).p == 1


def test_normalize_rejects_non_units():
    with pytest.raises(NotAWitness):
        normalize_mod_ideal([[2, 0], [0, 1]], (4, 4))
    with pytest.raises(NotAWitness):
        normalize_mod_ideal([[1, 0], [0, 1]], (4, 4), B=[[1, 0], [0, 3]])
    with pytest.raises(DivisibilityChainViolated):
        Modulus((2, 4))


@st.composite
def unit_problem(draw):
    n = draw(st.integers(1, 3))
    m = sorted((draw(st.sampled_from([1, 2, 3, 4, 6, 8, 12])) for _ in range(n)), reverse=True)
    # keep a chain: each later modulus divides the previous one
    for i in range(1, n):
        m[i] = math.gcd(m[i], m[i - 1])
    A = [[draw(st.integers(-20, 20)) for _ in range(n)] for _ in range(n)]
    return A, tuple(m)


@given(unit_problem())
def test_normalize_properties(prob):
    A, m = prob
    M = Modulus(m)
    try:
        B = solve_witness(A, M)
    except NotAWitness:
        with pytest.raises(NotAWitness):
            normalize_mod_ideal(A, M)
        return
    n = len(m)
    assert M.reduce(int_matmul(A, B)) == M.reduce([[int(i == j) for j in range(n)] for i in range(n)])
    nf = normalize_mod_ideal(A, M, B)
    P = [list(r) for r in nf.P]
    assert abs(int_det(P)) == 1
    target = [[int(i == j) for j in range(n)] for i in range(n)]
    target[-1][-1] = nf.p
    assert M.reduce(int_matmul(A, P)) == M.reduce(target)
    assert 0 <= nf.p <= m[-1] // 2 or m[-1] == 1
    d = int_det(A) % m[-1]
    assert nf.p % m[-1] in (d, (-d) % m[-1])
    # batch agrees with the scalar routine
    p, valid = normalize_batch(np.array([A]), M)
    assert valid[0] and p[0] == nf.p


def test_batch_marks_non_units():
    p, valid = normalize_batch(np.array([[[2, 0], [0, 1]], [[1, 0], [0, 1]]]), (4, 4))
    assert list(valid) == [False, True] and p[0] == -1 and p[1] == 1


def test_batch_shape_check():
    with pytest.raises(InputError):
        normalize_batch(np.zeros((2, 3, 3)), (4, 4))


# orbits


def test_representative_counts():
    assert [r.p for r in orbit_representatives([5, 5], 2)] == [1, 2]
    assert [r.p for r in orbit_representatives([4], 1)] == [1]
    assert [r.p for r in orbit_representatives([12], 3)] == [0]
    assert len(orbit_representatives([7], 1)) == 3
    assert len(orbit_representatives([7], 2)) == 1
    with pytest.raises(TooFewSlots):
        orbit_representatives([2, 2, 2], 2)
    with pytest.raises(DivisibilityChainViolated):
        orbit_representatives([6, 4], 2)


@pytest.mark.parametrize("factors,n", [([5, 5], 2), ([6], 2), ([4, 2], 2), ([2, 2, 2], 3), ([9], 1), ([8], 2)])
def test_oracle_agreement(factors, n):
    rep = oracle_agreement(factors, n)
    assert rep["agree"], rep
    assert rep["orbits"] == len(orbit_representatives(factors, n))


@pytest.mark.parametrize("factors,n", [([4, 4], 2), ([3, 3], 2), ([2, 2], 2), ([4], 1), ([3], 1), ([8, 4], 2)])
def test_transitive_when_last_modulus_at_most_four(factors, n):
    rep = oracle_agreement(factors, n)
    assert rep["agree"] and rep["orbits"] == 1


def test_count_formula():
    # phi(m_n)/2 orbits for m_n > 2 when n equals the number of invariant factors
    for m in (5, 7, 8, 9, 10, 12):
        assert oracle_agreement([m], 1)["orbits"] == sum(math.gcd(k, m) == 1 for k in range(m)) // 2


def test_brute_force_oracle_examples():
    assert brute_force_orbit_oracle([5, 5], [(1, 0), (0, 2)]) == brute_force_orbit_oracle([5, 5], [(2, 0), (0, 1)])
    assert brute_force_orbit_oracle([5, 5], [(1, 0), (0, 1)]) != brute_force_orbit_oracle([5, 5], [(1, 0), (0, 2)])
    with pytest.raises(OrbitTooLarge):
        orbit_partition([64, 64], 3)


def test_orbits_preserve_generation():
    allt, labels = orbit_partition([4, 2], 2)
    assert allt.shape == (64, 2, 2)
    assert len(set(labels.tolist())) > 1


# fingerprints and certificates


def test_isotope_certificate_and_fingerprints(b3, b3_torus):
    twist, T2 = _twisted(b3)
    assert T2.is_torus
    assert certificate_check(b3_torus, T2, ID3, None, "isotopy", twist)
    f1, f2 = biiso_fingerprint(b3_torus), biiso_fingerprint(T2)
    assert f1.fixed_dims == (9, 11, 11, 11, 11, 11, 11, 21)
    assert f2.fixed_dims == (9, 9, 9, 11, 11, 11, 15, 21)
    assert "fixed_dims" in f1.differences(f2)
    assert f1.invariant_factors == f2.invariant_factors == (2, 2, 2)
    assert not certificate_check(b3_torus, T2, ID3)


def test_biiso_certificate_for_power_action(b3, b3_torus):
    s, sigma, h = b3
    P = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    T2 = build_multiloop(s, tuple_power_action(sigma, P), h)
    assert certificate_check(b3_torus, T2, P)
    assert biiso_fingerprint(b3_torus) == biiso_fingerprint(T2)


def test_biiso_certificate_with_conjugating_phi(b3, b3_torus):
    s, sigma, h = b3
    # swapping e4 <-> e5 conjugates d1 <-> d2 and fixes h
    swap = [[int(j == {3: 4, 4: 3}.get(i, i)) for j in range(7)] for i in range(7)]
    phi = conjugation_automorphism(s, swap)
    conj = AutTuple([phi * g * phi.inverse() for g in sigma.entries])
    T2 = build_multiloop(s, conj, h)
    assert certificate_check(b3_torus, T2, ID3, phi)
    P = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert certificate_check(b3_torus, build_multiloop(s, tuple_power_action(sigma, P), h), P)


def test_certificate_input_errors(b3, b3_torus):
    s, _, _ = b3
    with pytest.raises(InputError):
        certificate_check(b3_torus, b3_torus, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(InputError):
        certificate_check(b3_torus, b3_torus, ID3, mode="other")
    bad = [[int(i == j) * (2 if i == 0 else 1) for j in range(21)] for i in range(21)]
    with pytest.raises(NotAnIsomorphism):
        check_isomorphism(s, s, bad)
    swap = [[int(j == {3: 4, 4: 3}.get(i, i)) for j in range(7)] for i in range(7)]
    not_torus = [conjugation_automorphism(s, swap)] * 3
    with pytest.raises(NotATorusAutomorphism):
        certificate_check(b3_torus, b3_torus, ID3, None, "isotopy", not_torus)


def test_untwisted_test(b3_torus):
    s, sigma = catalog.untwisted_tuple("A2", 2)
    assert untwisted_test(build_multiloop(s, sigma))
    assert not untwisted_test(b3_torus)
