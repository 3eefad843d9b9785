from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sample
from oracles import grid_best_payoff_1d, probe_patterns, region_of, sweep_regions_1d
from predgame import (ABOVE, BELOW, FREE, ONE, Constant, InputError, Linear, ResourceError, Sample, UnsupportedError,
                      UserPoint, best_linear_response, enumerate_regions, pvf)
from predgame.linear import parse_regions, region_string
from predgame.model import satisfaction_vector


def two_points():
    return Sample((UserPoint((1,), 0, 0.5), UserPoint((2,), 2, 0.5)))


@pytest.mark.parametrize("method", ["exact", "lp"])
def test_pvf_examples(method):
    S = two_points()
    res = pvf(S, (FREE, FREE), method=method)
    assert res and all(v == 0 for v in res.h)
    assert not pvf(S, (ONE, ONE), method=method)
    res = pvf(S, (ABOVE, ONE), method=method)
    assert res
    a = float(res.h[0])
    assert 0.5 < a <= 1.25
    assert not pvf(S, (BELOW, ONE), method=method)


def test_pvf_exact_witness_example():
    res = pvf(two_points(), (ABOVE, ONE))
    assert res.h == (Fraction(1),)
    assert res.slack > 0


def test_pvf_strict_boundary():
    # a single point at x=1, y=0, t=1: ABOVE needs a > 1, BELOW needs a < -1
    S = Sample((UserPoint((1,), 0, 1),))
    for v in (ONE, ABOVE, BELOW):
        res = pvf(S, (v,))
        assert res and region_of(res.h, (1,), 0, 1) == v
    # two copies forcing a > 1 and a <= 1 together is infeasible
    S2 = Sample((UserPoint((1,), 0, 1), UserPoint((1,), 2, 1)))
    assert not pvf(S2, (ABOVE, BELOW))
    assert pvf(S2, (ONE, ONE)).h == (Fraction(1),)


def test_pvf_zero_feature_vector():
    S = Sample((UserPoint((0, 0), 1, 2), UserPoint((0, 0), 5, 1)))
    assert pvf(S, (ONE, FREE))
    assert not pvf(S, (FREE, ONE))
    assert not pvf(S, (ABOVE, FREE))
    assert pvf(S, (FREE, BELOW))
    assert enumerate_regions(S) == [(ONE, BELOW)]


def test_pvf_errors():
    S = two_points()
    with pytest.raises(InputError):
        pvf(S, (ONE,))
    with pytest.raises(InputError):
        pvf(S, (ONE, ONE), method="simplex")
    big = Sample((UserPoint((1, 2, 3, 4), 0, 1),))
    with pytest.raises(UnsupportedError):
        pvf(big, (ONE,))
    assert pvf(big, (ONE,), limit=4)


def test_region_strings_round_trip():
    v = (ONE, ABOVE, BELOW, FREE)
    assert region_string(v) == "1ab0"
    assert parse_regions("1ab0") == v
    with pytest.raises(InputError):
        parse_regions("1x")


def test_enumerate_single_point():
    S = Sample((UserPoint((2,), 1, 0.3),))
    assert enumerate_regions(S) == [(ONE,), (ABOVE,), (BELOW,)]


def test_enumerate_two_points_matches_sweep():
    S = two_points()
    got = enumerate_regions(S)
    assert [region_string(v) for v in got] == ["1b", "a1", "aa", "ab", "bb"]
    assert set(got) == sweep_regions_1d(S)
    assert got == enumerate_regions(S, method="lp")


def test_enumerate_budget():
    S = Sample(tuple(UserPoint((k + 1,), k, 0.5) for k in range(6)))
    with pytest.raises(ResourceError):
        enumerate_regions(S, budget=3)


def test_enumerate_sorted_and_witnessed(rng):
    S = random_sample(rng, 7, 2)
    out = enumerate_regions(S, with_witnesses=True)
    regs = [v for v, _ in out]
    assert regs == sorted(regs) and len(set(regs)) == len(regs)
    for v, h in out:
        assert tuple(region_of(h, p.x, p.y, p.t) for p in S) == v


@pytest.mark.parametrize("seed", range(20))
def test_enumerate_1d_matches_sweep(seed):
    rng = np.random.default_rng(seed)
    S = random_sample(rng, int(rng.integers(1, 11)), 1)
    got = enumerate_regions(S)
    assert set(got) == sweep_regions_1d(S)
    assert len(got) <= 4 * S.m + 1


@pytest.mark.parametrize("seed", range(6))
def test_enumerate_2d_complete_against_probe(seed):
    rng = np.random.default_rng(100 + seed)
    S = random_sample(rng, int(rng.integers(2, 9)), 2)
    got = {tuple(int(e) for e in v) for v in enumerate_regions(S)}
    assert probe_patterns(S, n_random=20000, seed=seed) <= got


@pytest.mark.parametrize("seed", range(6))
def test_exact_and_lp_routes_agree(seed):
    rng = np.random.default_rng(200 + seed)
    n = 1 + seed % 3
    S = random_sample(rng, int(rng.integers(1, 7)), n)
    assert enumerate_regions(S) == enumerate_regions(S, method="lp")


# ---------------------------------------------------------------------------
# best response


def test_blr_single_point():
    S = Sample((UserPoint((1,), 3, 0),))
    r = best_linear_response(S, [])
    assert r.payoff == 1 and r.hypothesis == Linear((Fraction(3),))


def test_blr_two_points_no_opponents():
    S = two_points()
    r = best_linear_response(S, [])
    assert r.payoff == Fraction(1, 2)
    assert grid_best_payoff_1d(S, [1, 1]) == pytest.approx(0.5)


def test_blr_two_points_crowded_first():
    S = two_points()
    opp = [Constant(0), Constant(0)]  # both hit point 1 only
    assert list(satisfaction_vector(opp[0], S)) == [True, False]
    r = best_linear_response(S, opp)
    assert r.payoff == Fraction(1, 2)
    a = r.hypothesis.coefficients[0]
    assert abs(2 * a - 2) <= Fraction(1, 2)
    assert grid_best_payoff_1d(S, [Fraction(1, 3), 1]) == pytest.approx(0.5)
    rf = best_linear_response(S, opp, mode="floating")
    assert rf.payoff == pytest.approx(0.5, abs=1e-12)


def test_blr_with_bias():
    pts = tuple(UserPoint((x,), 3 + 0 * x, 0.1) for x in (0.0, 1.0, 2.0, 5.0))
    S = Sample(pts)
    homog = best_linear_response(S, [])
    biased = best_linear_response(S, [], with_bias=True)
    assert biased.payoff == 1
    assert homog.payoff < 1
    assert biased.hypothesis.evaluate((7.0,), exact=True) == 3


def test_blr_tie_goes_to_lexicographically_smallest():
    S = two_points()
    r = best_linear_response(S, [])
    # both single-point patterns score 1; "1b" sorts first
    assert r.region == (ONE, BELOW)


def test_blr_soundness(rng):
    for _ in range(15):
        S = random_sample(rng, int(rng.integers(1, 8)), int(rng.integers(1, 3)))
        opp = [Linear(tuple(np.round(rng.uniform(-2, 2, S.n), 2))) for _ in range(int(rng.integers(0, 4)))]
        r = best_linear_response(S, opp)
        sat = satisfaction_vector(r.hypothesis, S, "rational")
        assert tuple(sat) == tuple(e == ONE for e in r.region)


coord = st.integers(-8, 8).map(lambda k: k / 4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coord, coord, st.integers(0, 4).map(lambda k: k / 4)), min_size=1, max_size=6),
       st.lists(coord, max_size=3), st.integers(0, 5))
def test_blr_weight_monotone_in_opponents(pts, opp_consts, j):
    S = Sample(tuple(UserPoint((x,), y, t) for x, y, t in pts))
    opp = [Constant(c) for c in opp_consts]
    base = best_linear_response(S, opp)
    more = best_linear_response(S, opp + [Constant(S[j % S.m].y)])
    assert more.payoff <= base.payoff
