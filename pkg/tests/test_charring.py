import json
import random

import pytest
from hypothesis import given, strategies as st

from oracles import full_to_weyl, kostant_multiplicity, multiply_full, weyl_character_full, weyl_dimension_type_a
from tiltchar.charring import (
    FullCharacter,
    NotDivisible,
    OrbitCharacter,
    WeylCombo,
    brauer_multiply,
    divide_exact,
    dual,
    expand,
    freudenthal,
    frobenius_twist,
    from_json,
    is_good_filtration,
    multiply_orbit_by_weyl,
    orbit_product,
    orbit_sum,
    orbit_to_weyl,
    to_json,
    to_orbit,
    weyl_character,
    weyl_to_orbit,
)
from tiltchar.rootdata import build_root_system, dominance_leq, restricted_weights, weyl_orbit

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
A3 = build_root_system("A", 3)
B2 = build_root_system("B", 2)
G2 = build_root_system("G", 2)


def test_freudenthal_examples():
    assert freudenthal(A1, (0,)) == orbit_sum(A1, (0,))
    assert freudenthal(A2, (1, 1)) == OrbitCharacter(A2, {(1, 1): 1, (0, 0): 2})
    assert freudenthal(A1, (4,)) == OrbitCharacter(A1, {(4,): 1, (2,): 1, (0,): 1})
    with pytest.raises(ValueError):
        freudenthal(A2, (1, -1))


@pytest.mark.parametrize("rs", [A1, A2, A3], ids=lambda r: r.name)
def test_freudenthal_matches_kostant(rs):
    for lam in restricted_weights(rs.rank, 5):
        eta = freudenthal(rs, lam)
        for mu in eta.support() | {lam}:
            assert eta[mu] == kostant_multiplicity(rs.cartan_matrix, lam, mu)


@pytest.mark.parametrize("rs,lam", [(B2, (2, 3)), (G2, (1, 2)), (G2, (2, 1)), (build_root_system("C", 3), (1, 0, 2))], ids=str)
def test_freudenthal_other_types(rs, lam):
    eta = freudenthal(rs, lam)
    for mu in eta.support():
        assert eta[mu] == kostant_multiplicity(rs.cartan_matrix, lam, mu)


@pytest.mark.parametrize("lam", [(1, 1, 1), (3, 0, 2), (2, 2, 2), (4, 1, 3)])
def test_dimension_formula(lam):
    eta = freudenthal(A3, lam)
    dim = sum(c * len(weyl_orbit(A3, mu)) for mu, c in eta.items())
    assert dim == weyl_dimension_type_a(lam)


@pytest.mark.parametrize("rs,lam", [(A2, (4, 3)), (A3, (3, 2, 3)), (B2, (3, 4)), (G2, (2, 2))], ids=str)
def test_orbit_coefficients_decrease_upwards(rs, lam):
    eta = freudenthal(rs, lam)
    supp = sorted(eta.support())
    assert eta[lam] == 1
    for mu in supp:
        for nu in supp:
            if dominance_leq(rs, mu, nu):
                assert eta[mu] >= eta[nu]
    # support is every dominant weight below lam
    assert set(supp) == {mu for mu in _all_dominant_below(rs, lam)}


def _all_dominant_below(rs, lam):
    from tiltchar.rootdata import dominant_weights_below

    return dominant_weights_below(rs, lam)


def test_basis_change_examples():
    assert orbit_to_weyl(orbit_sum(A1, (0,))) == weyl_character(A1, (0,))
    assert weyl_to_orbit(weyl_character(A1, (0,))) == orbit_sum(A1, (0,))
    assert orbit_to_weyl(orbit_sum(A1, (2,))) == WeylCombo(A1, {(2,): 1, (0,): -1})


def test_brauer_examples():
    assert brauer_multiply(A2, (2, 1), (0, 0)) == weyl_character(A2, (2, 1))
    assert brauer_multiply(A1, (1,), (1,)) == WeylCombo(A1, {(2,): 1, (0,): 1})
    assert brauer_multiply(A1, (0,), (2,)) == WeylCombo(A1, {(2,): 1, (0,): -1})


def test_multiply_orbit_by_weyl_examples():
    assert multiply_orbit_by_weyl(orbit_sum(A2, (0, 0)), (3, 1)) == weyl_character(A2, (3, 1))
    assert multiply_orbit_by_weyl(OrbitCharacter(A2), (3, 1)) == WeylCombo(A2)


def _brute_product(rs, lam, mu):
    prod = multiply_full(weyl_character_full(rs.cartan_matrix, lam), weyl_character_full(rs.cartan_matrix, mu))
    return WeylCombo(rs, full_to_weyl(rs.cartan_matrix, prod))


@given(st.sampled_from([A1, A2]), st.data())
def test_weyl_products_match_brute_force(rs, data):
    lam = tuple(data.draw(st.integers(0, 3)) for _ in range(rs.rank))
    mu = tuple(data.draw(st.integers(0, 2)) for _ in range(rs.rank))
    got = multiply_orbit_by_weyl(weyl_to_orbit(weyl_character(rs, mu)), lam)
    assert got == _brute_product(rs, lam, mu)


@given(st.sampled_from([A1, A2, B2]), st.data())
def test_brauer_matches_straightened_expansion(rs, data):
    lam = tuple(data.draw(st.integers(0, 3)) for _ in range(rs.rank))
    mu = tuple(data.draw(st.integers(0, 3)) for _ in range(rs.rank))
    # chi(lam) s(mu), computed in Z[X] and peeled
    prod = multiply_full(weyl_character_full(rs.cartan_matrix, lam), expand(orbit_sum(rs, mu)).terms)
    assert brauer_multiply(rs, lam, mu) == WeylCombo(rs, full_to_weyl(rs.cartan_matrix, prod))


def _random_orbit_char(rs, rng, size=4, top=4):
    return OrbitCharacter(rs, {tuple(rng.randint(0, top) for _ in range(rs.rank)): rng.randint(-5, 5) for _ in range(size)})


@pytest.mark.parametrize("seed", range(8))
def test_basis_round_trips(seed):
    rng = random.Random(seed)
    for rs in (A2, A3, B2, G2):
        eta = _random_orbit_char(rs, rng)
        assert weyl_to_orbit(orbit_to_weyl(eta)) == eta
        f = WeylCombo(rs, eta.terms)
        assert orbit_to_weyl(weyl_to_orbit(f)) == f


def test_basis_change_is_unitriangular():
    f = orbit_to_weyl(orbit_sum(A3, (2, 1, 2)))
    assert f[(2, 1, 2)] == 1
    assert all(dominance_leq(A3, mu, (2, 1, 2)) for mu in f.support())


def test_orbit_product_matches_full_product():
    rng = random.Random(1)
    for rs in (A2, B2, G2):
        a = _random_orbit_char(rs, rng, 3, 2)
        b = _random_orbit_char(rs, rng, 3, 2)
        assert expand(orbit_product(a, b)) == expand(a) * expand(b)


def test_good_filtration():
    assert is_good_filtration(weyl_character(A2, (1, 0)))
    assert not is_good_filtration(WeylCombo(A1, {(2,): 1, (0,): -1}))
    assert not is_good_filtration(WeylCombo(A1))


def test_twist_and_dual():
    assert frobenius_twist(orbit_sum(A2, (0, 0)), 5) == orbit_sum(A2, (0, 0))
    assert dual(orbit_sum(A2, (1, 0))) == orbit_sum(A2, (0, 1))
    assert dual(orbit_sum(B2, (1, 2))) == orbit_sum(B2, (1, 2))
    eta = OrbitCharacter(A3, {(1, 0, 2): 3, (0, 1, 0): -1})
    assert frobenius_twist(frobenius_twist(eta, 3), 5) == frobenius_twist(eta, 15)
    assert dual(dual(eta)) == eta
    assert dual(eta) == OrbitCharacter(A3, {(2, 0, 1): 3, (0, 1, 0): -1})
    assert expand(dual(eta)) == dual(expand(eta))


def test_twist_is_ring_map():
    a = freudenthal(A2, (1, 0))
    b = freudenthal(A2, (1, 1))
    assert frobenius_twist(orbit_product(a, b), 3) == orbit_product(frobenius_twist(a, 3), frobenius_twist(b, 3))


def test_divide_examples():
    g = expand(freudenthal(A2, (2, 2)))
    assert divide_exact(g, g) == FullCharacter(A2, {(0, 0): 1})
    st_char = expand(freudenthal(A2, (4, 4)))
    chi = expand(freudenthal(A2, (2, 1)))
    assert divide_exact(chi * st_char, st_char) == chi
    c2 = expand(freudenthal(A1, (2,)))
    assert divide_exact(c2 * c2, c2) == c2


@pytest.mark.parametrize("seed", range(6))
def test_divide_round_trip(seed):
    rng = random.Random(seed)
    rs = rng.choice([A1, A2, B2, G2])
    g = expand(freudenthal(rs, tuple(rng.randint(0, 2) for _ in range(rs.rank))))
    q = FullCharacter(rs, {tuple(rng.randint(-2, 2) for _ in range(rs.rank)): rng.randint(-3, 3) for _ in range(4)})
    assert divide_exact(q * g, g) == q


def test_brauer_division_trivial_case():
    lam = (2, 1)
    assert to_orbit(divide_exact(expand(brauer_multiply(A2, lam, (0, 0))), expand(freudenthal(A2, lam)))) == orbit_sum(A2, (0, 0))


def test_not_divisible():
    g = expand(freudenthal(A2, (1, 0)))
    f = g * g + FullCharacter(A2, {(0, 0): 1})
    with pytest.raises(NotDivisible):
        divide_exact(f, g)
    with pytest.raises(ZeroDivisionError):
        divide_exact(g, FullCharacter(A2))


def test_to_orbit_rejects_non_invariant():
    with pytest.raises(ValueError):
        to_orbit(FullCharacter(A1, {(1,): 1}))


def test_json_round_trip_and_stability():
    eta = freudenthal(A3, (2, 1, 2))
    text = to_json(eta, 5)
    back, p = from_json(text)
    assert back == eta and p == 5
    doc = json.loads(text)
    assert doc["type"] == "A3" and doc["basis"] == "orbit"
    assert [t["weight"] for t in doc["terms"]] == sorted(t["weight"] for t in doc["terms"])
    assert to_json(back, 5) == text
    for f in (orbit_to_weyl(eta), expand(eta)):
        assert from_json(to_json(f))[0] == f


def test_dominant_keys_enforced():
    with pytest.raises(ValueError):
        OrbitCharacter(A2, {(1, -1): 1})
    with pytest.raises(TypeError):
        orbit_sum(A2, (0, 0)) + weyl_character(A2, (0, 0))


def test_arithmetic_prunes_zeros():
    a = OrbitCharacter(A2, {(1, 1): 2, (0, 0): 1})
    assert (a - a) == OrbitCharacter(A2)
    assert len(a + (-a)) == 0
    assert 3 * a == a.scale(3)
    assert a[(5, 5)] == 0
