from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import pytest
from scipy import stats

from oracles import payoffs_by_loop
from predgame import (ConfigError, InputError, IntervalIndicator, PointMass, Sample, Segment, UniformSegments,
                      UserPoint, draw_sample, empirical_payoffs, enumerate_pure_nash, example41_distribution,
                      make_example41, monte_carlo_payoffs, simulate_claim_a6, verify_epsilon_pne)
from predgame.scenarios import GaussianRegression, UniformOverSample


def test_point_mass_draws_copies():
    z = UserPoint((0.3, -1.0), 2.0, 0.1)
    S = draw_sample(PointMass(z), 7, seed=0)
    assert S.points == (z,) * 7


@pytest.mark.parametrize("dist", [example41_distribution(), GaussianRegression(0, 1, 2, 0, 0.3, 0.1),
                                  UniformOverSample(Sample((UserPoint((1,), 0, 0),)))])
def test_draws_deterministic(dist):
    assert draw_sample(dist, 50, seed=11) == draw_sample(dist, 50, seed=11)


def test_draw_sample_errors():
    with pytest.raises(InputError):
        draw_sample(example41_distribution(), 0, seed=0)
    with pytest.raises(ConfigError):
        draw_sample({"kind": "nope"}, 3, seed=0)
    with pytest.raises(ConfigError):
        UniformSegments((Segment(0, 1, 0, 0.5, 0.7),))
    with pytest.raises(ConfigError):
        UniformSegments((Segment(0, 1, 0, -0.5, 1.0),))


def test_example41_label_fraction():
    dist = example41_distribution()
    inside = sum(0.45 <= draw_sample(dist, 1000, seed=s).y.mean() <= 0.55 for s in range(200))
    assert inside >= 198


def test_uniform_segments_chi_square():
    dist = UniformSegments((Segment(0, 1, 0, 0.5, 0.2), Segment(1, 3, 1, 0.1, 0.3), Segment(5, 6, 2, 0.0, 0.5)))
    S = draw_sample(dist, 10 ** 4, seed=2024)
    counts = np.bincount(dist.segment_of(S.X), minlength=3)
    assert stats.chisquare(counts, 10 ** 4 * np.array([0.2, 0.3, 0.5])).pvalue > 0.001
    # labels and tolerances follow the segment
    seg = dist.segment_of(S.X)
    np.testing.assert_array_equal(S.y, np.array([0, 1, 2])[seg])
    # positions are uniform inside each segment
    first = S.X[seg == 0, 0]
    assert stats.kstest(first, "uniform", args=(0, 1)).pvalue > 0.001


# ---------------------------------------------------------------------------
# the non-learnability construction


def test_example41_memorizers():
    S = draw_sample(example41_distribution(), 30, seed=5)
    ex = make_example41(S, "rational")
    zero, one = ex.game.classes[0].members
    for p in S:
        assert zero(p.x) == 0 and one(p.x) == 1
    unseen = (1.2345678,)
    assert all(p.x != unseen for p in S)
    assert zero(unseen) == 1 and one(unseen) == 1
    assert zero((0.1234567,)) == one((0.1234567,)) == 0


def test_example41_rejects_foreign_sample():
    with pytest.raises(InputError):
        make_example41(Sample((UserPoint((0.5,), 1, 0.5),)))
    with pytest.raises(InputError):
        make_example41(Sample((UserPoint((2.5,), 1, 0.5),)))


@pytest.mark.parametrize("seed", range(5))
def test_example41_empirical_payoffs(seed):
    S = draw_sample(example41_distribution(), 40, seed=seed)
    ex = make_example41(S, "rational")
    pay = empirical_payoffs(ex.game, ex.profile)
    assert list(pay) == payoffs_by_loop(S, ex.profile)
    zeros = int((S.y == 0).sum())
    ones = S.m - zeros
    assert pay[0] == Fraction(zeros, 3 * S.m)
    assert pay[1] == pay[2] == Fraction(zeros, 3 * S.m) + Fraction(ones, 2 * S.m)


@pytest.mark.parametrize("seed", range(8))
def test_example41_enumeration_agrees_with_verify(seed):
    S = draw_sample(example41_distribution(), int(7 + seed), seed=seed)
    ex = make_example41(S, "rational")
    pne = enumerate_pure_nash(ex.game)
    profiles = list(product(*(c.members for c in ex.game.classes)))
    assert len(profiles) == 8
    for prof in profiles:
        assert bool(verify_epsilon_pne(ex.game, prof, 0)) == (prof in pne)
    zeros = int((S.y == 0).sum())
    assert (ex.profile in pne) == (2 * zeros >= S.m)


def test_example41_population_payoffs():
    S = draw_sample(example41_distribution(), 25, seed=1)
    ex = make_example41(S)
    zero = ex.profile[0]
    left, right = IntervalIndicator(0, 1, True, False), IntervalIndicator(1, 2, True, True)
    # inputs outside the sample get the base 1[1,2], which hits every label within t = 1/2
    closed_form = {
        (zero, right, right): (1 / 3, 1 / 3, 1 / 3),
        (zero, left, right): (1 / 2, 0, 1 / 2),
        (zero, left, left): (1, 0, 0),
    }
    for prof, want in closed_form.items():
        est = monte_carlo_payoffs(ex.distribution, prof, 2 * 10 ** 5, seed=7)
        tol = np.maximum(3 * est.stderr, 1e-12)
        assert np.all(np.abs(est.mean - want) <= tol)


# ---------------------------------------------------------------------------
# coin-flip claim


def test_claim_a6_exact_mass():
    exact = Fraction(sum(comb(15, k) for k in range(8, 12)), 2 ** 15)
    assert exact == Fraction(15808, 32768) == Fraction(247, 512)
    est = simulate_claim_a6(10 ** 5, 15, seed=0)
    assert abs(est - float(exact)) <= 0.01
    assert est >= 0.25


def test_claim_a6_strict_boundaries():
    # m=16: 8 heads gives mean exactly 1/2, 12 heads exactly 3/4; both are excluded
    exact = Fraction(sum(comb(16, k) for k in range(9, 12)), 2 ** 16)
    est = simulate_claim_a6(2 * 10 ** 5, 16, seed=3)
    assert abs(est - float(exact)) <= 0.005


def test_claim_a6_requires_m_at_least_15():
    with pytest.raises(InputError):
        simulate_claim_a6(10, 14, seed=0)
    assert simulate_claim_a6(1000, 15, seed=4) == simulate_claim_a6(1000, 15, seed=4)
