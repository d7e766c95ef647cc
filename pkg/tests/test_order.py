import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import straighten, to_root_coords, weyl_group
from tiltchar.order import (
    AffineContext,
    dot_dominant_rep,
    dot_reflect,
    is_p_regular,
    straighten_many,
    up_down_set,
    up_leq,
)
from tiltchar.rootdata import build_root_system, dominance_leq

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
A3 = build_root_system("A", 3)
B2 = build_root_system("B", 2)
G2 = build_root_system("G", 2)


def test_context_validation():
    with pytest.raises(ValueError):
        AffineContext(A1, 1)
    with pytest.raises(ValueError):
        AffineContext(A3, 3).require_lcf()
    AffineContext(A3, 5).require_lcf()


def test_dot_reflect_examples():
    ctx = AffineContext(A1, 5)
    assert dot_reflect(ctx, (8,), 0, 2) == (10,)
    # on the wall <nu + rho, alpha^vee> = np
    assert dot_reflect(ctx, (4,), 0, 1) == (4,)
    assert dot_reflect(ctx, (9,), 0, 2) == (9,)


@given(st.sampled_from([A2, A3, B2, G2]), st.data())
def test_dot_reflect_is_involution(rs, data):
    ctx = AffineContext(rs, data.draw(st.sampled_from([2, 3, 5, 7])))
    nu = tuple(data.draw(st.integers(-8, 12)) for _ in range(rs.rank))
    k = data.draw(st.integers(0, len(rs.positive_roots) - 1))
    n = data.draw(st.integers(-2, 3))
    once = dot_reflect(ctx, nu, k, n)
    assert dot_reflect(ctx, once, k, n) == nu


def test_p_regular_examples():
    ctx = AffineContext(A1, 5)
    assert not is_p_regular(ctx, (4,))
    assert is_p_regular(ctx, (3,))
    assert not is_p_regular(AffineContext(A3, 5), (-1, -1, -1))


def test_dot_dominant_rep_examples():
    assert dot_dominant_rep(A2, (2, 1)) == ((2, 1), 1)
    assert dot_dominant_rep(A1, (-2,)) == ((0,), -1)
    assert dot_dominant_rep(A1, (-1,)) is None


@given(st.sampled_from([A2, A3, B2, G2]), st.data())
def test_straightening_matches_group_search(rs, data):
    nu = tuple(data.draw(st.integers(-9, 6)) for _ in range(rs.rank))
    assert dot_dominant_rep(rs, nu) == straighten(rs.cartan_matrix, nu)


@pytest.mark.parametrize("rs", [A2, A3, B2, G2], ids=lambda r: r.name)
def test_straighten_many_matches_scalar(rs):
    rng = np.random.default_rng(3)
    rows = rng.integers(-10, 8, size=(300, rs.rank))
    dom, sign = straighten_many(rs, rows + 1)
    for row, d, s in zip(rows.tolist(), dom.tolist(), sign.tolist()):
        hit = dot_dominant_rep(rs, tuple(row))
        if hit is None:
            assert s == 0
        else:
            assert (tuple(a - 1 for a in d), s) == hit


def _a1_downset(lam, p):
    # shifted class of lam is {+-lam + 2pk}; in rank one the up-order is the usual order
    return {(m,) for m in range(0, lam + 1) if (m - lam) % (2 * p) == 0 or (m + lam) % (2 * p) == 0}


@pytest.mark.parametrize("lam", range(0, 30))
@pytest.mark.parametrize("p", [2, 3, 5])
def test_downset_rank_one_closed_form(lam, p):
    ctx = AffineContext(A1, p)
    assert up_down_set((lam,), ctx) == _a1_downset(lam, p)


def test_downset_examples():
    assert up_down_set((4,), AffineContext(A1, 5)) == {(4,)}
    assert len(up_down_set((4, 4, 4), AffineContext(A3, 5))) == 8
    assert len(up_down_set((6, 6, 6, 6), AffineContext(build_root_system("A", 4), 7))) == 52


CASES = [
    (A2, 3, (5, 4)), (A2, 5, (9, 7)), (A2, 2, (6, 3)),
    (A3, 5, (4, 4, 4)), (A3, 5, (10, 5, 5)), (A3, 3, (4, 2, 5)),
    (B2, 5, (7, 6)), (B2, 3, (5, 5)), (G2, 7, (6, 6)), (G2, 5, (9, 4)),
    (build_root_system("C", 3), 7, (4, 3, 5)),
]


@pytest.mark.parametrize("rs,p,lam", CASES, ids=lambda v: str(v))
def test_downset_two_routes_agree(rs, p, lam):
    ctx = AffineContext(rs, p)
    assert up_down_set(lam, ctx, method="dominant") == up_down_set(lam, ctx, method="full")


def _linked(rs, p, mu, lam):
    """mu - rho in W_p . (lam - rho): w(lam) - mu in p * root lattice for some w in W."""
    for m, _ in weyl_group(rs.cartan_matrix):
        diff = to_root_coords(rs.cartan_matrix, m @ np.array(lam) - np.array(mu))
        if diff is not None and all(c % p == 0 for c in diff):
            return True
    return False


@pytest.mark.parametrize("rs,p,lam", CASES, ids=lambda v: str(v))
def test_downset_invariants(rs, p, lam):
    ctx = AffineContext(rs, p)
    psi = up_down_set(lam, ctx)
    assert lam in psi
    for mu in psi:
        assert min(mu) >= 0
        assert dominance_leq(rs, mu, lam)
        assert _linked(rs, p, mu, lam)
        assert up_down_set(mu, ctx) <= psi
        assert up_leq(ctx, mu, lam)


@pytest.mark.parametrize("rs,p,sigma", [(A2, 3, (2, 1)), (A3, 5, (1, 0, 2)), (B2, 3, (2, 2)), (G2, 5, (1, 1))])
def test_downset_of_p_multiple_stays_in_pX(rs, p, sigma):
    lam = tuple(p * s for s in sigma)
    for mu in up_down_set(lam, AffineContext(rs, p)):
        assert all(a % p == 0 for a in mu)


def test_up_leq_rejects_unlinked():
    ctx = AffineContext(A3, 5)
    assert not up_leq(ctx, (3, 3, 3), (4, 4, 4))
    assert up_leq(ctx, (1, 2, 1), (4, 4, 4))
    assert not up_leq(ctx, (4, 4, 4), (1, 2, 1))


def test_bad_method_and_nondominant():
    ctx = AffineContext(A2, 3)
    with pytest.raises(ValueError):
        up_down_set((1, 1), ctx, method="nope")
    with pytest.raises(ValueError):
        up_down_set((-1, 2), ctx)
