import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predgame import (ConfigError, Constant, FiniteList, InputError, PointMass, UserPoint, learn_equilibrium,
                      regression_market, required_sample_size, sample_size_rhs, uniform_convergence_bound,
                      verify_epsilon_pne)
from predgame.bounds import log_uniform_convergence_bound

# (epsilon, delta, d, N) -> ceiling of the sufficient sample-size expression, frozen from a
# separate 50-digit mpmath evaluation
SAMPLE_SIZES = [
    ((0.5, 0.5, 1, 1), 9488),
    ((0.1, 0.05, 1, 2), 344982),
    ((0.2, 0.1, 2, 2), 159094),
    ((0.05, 0.01, 3, 3), 5041918),
    ((0.3, 0.2, 5, 4), 177475),
    ((0.25, 0.05, 4, 10), 208163),
    ((0.9, 0.9, 1, 1), 2453),
    ((0.01, 0.01, 1, 1), 49381316),
    ((0.15, 0.001, 10, 5), 1716351),
    ((0.4, 0.3, 2, 7), 34244),
    ((0.7, 0.05, 3, 2), 15318),
    ((0.02, 0.5, 2, 20), 23305312),
    ((0.6, 0.6, 6, 6), 46752),
    ((0.33, 0.11, 7, 3), 208131),
    ((0.08, 0.02, 1, 100), 573419),
    ((0.45, 0.15, 8, 8), 121764),
    ((0.12, 0.07, 2, 1), 486959),
    ((0.99, 0.01, 1, 50), 2102),
    ((0.03, 0.25, 4, 4), 20441805),
    ((0.5, 0.001, 20, 2), 264352),
]


@pytest.mark.parametrize("args,want", SAMPLE_SIZES)
def test_sample_size_frozen(args, want):
    m = required_sample_size(*args)
    assert m == want
    rhs = sample_size_rhs(*args)
    assert m >= rhs > m - 1


def test_sample_size_third_term_scales_by_four():
    # the delta-dependent part is the only term that differs between two deltas
    def third(eps):
        return sample_size_rhs(eps, 0.01, 2, 3) - sample_size_rhs(eps, 0.5, 2, 3)
    assert third(0.1) == pytest.approx(4 * third(0.2), rel=1e-9)
    assert third(0.2) == pytest.approx(16 / 0.04 * math.log(50), rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.01, 0.98), st.integers(1, 20), st.integers(1, 50))
def test_sample_size_monotone(eps, delta, d, N):
    m = required_sample_size(eps, delta, d, N)
    assert required_sample_size(eps, min(delta + 0.01, 0.99), d, N) <= m
    assert required_sample_size(eps, delta, d + 1, N) >= m
    assert required_sample_size(eps, delta, d, N + 1) >= m


@pytest.mark.parametrize("bad", [(0, 0.5, 1, 1), (1, 0.5, 1, 1), (0.5, 0, 1, 1), (0.5, 1, 1, 1),
                                 (0.5, 0.5, 0, 1), (0.5, 0.5, 1, 0)])
def test_sample_size_rejects_out_of_range(bad):
    with pytest.raises(InputError):
        required_sample_size(*bad)


def test_ucb_direct_substitution():
    assert uniform_convergence_bound(1, 1, 1, 1) == pytest.approx(4 * (2 * math.e) ** 10 * math.exp(-1 / 8),
                                                                rel=1e-13)
    assert uniform_convergence_bound(1, 1, 1, 1) == pytest.approx(79619226.9877349, rel=1e-13)


def test_ucb_crossover():
    # smallest m > 100 with bound <= 1e-6 at eps=0.5, d=1, N=1 (frozen from a separate log-space evaluation)
    assert uniform_convergence_bound(0.5, 1, 1, 3654) <= 1e-6
    assert uniform_convergence_bound(0.5, 1, 1, 3653) > 1e-6


def test_ucb_decreasing_past_stationary_point():
    eps, d = 0.5, 1
    stationary = 80 * d / eps ** 2
    assert stationary == 320
    vals = [log_uniform_convergence_bound(eps, d, 3, m) for m in range(321, 2000, 37)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert log_uniform_convergence_bound(eps, d, 3, 100) < log_uniform_convergence_bound(eps, d, 3, 300)


def test_ucb_overflow_is_infinite():
    assert uniform_convergence_bound(0.01, 500, 10, 10 ** 6) == math.inf
    with pytest.raises(InputError):
        uniform_convergence_bound(0.5, 1, 1, 0)


@pytest.mark.parametrize("args,_", SAMPLE_SIZES)
def test_ucb_below_delta_at_required_size(args, _):
    eps, delta, d, N = args
    assert uniform_convergence_bound(eps, d, N, required_sample_size(*args)) <= delta


# ---------------------------------------------------------------------------
# learn-then-play


def test_learn_singleton_classes():
    dist = PointMass(UserPoint((0.0,), 0.0, 1.0))
    classes = [FiniteList((Constant(0),), 1), FiniteList((Constant(0.5),), 1)]
    res = learn_equilibrium(dist, classes, 0.5, 0.5, seed=1, m_cap=20)
    profile, sample, trace = res
    assert profile == (Constant(0), Constant(0.5)) and trace.iterations == 0
    assert sample.m == 20 and res.capped


def test_learn_uncapped_uses_half_epsilon_size():
    dist = PointMass(UserPoint((0.0,), 0.0, 1.0))
    classes = [FiniteList((Constant(0),), 1)]
    res = learn_equilibrium(dist, classes, 0.9, 0.9, seed=1)
    assert res.m_required == required_sample_size(0.45, 0.9, 1, 1) == res.m_used == res.sample.m
    assert not res.capped


def test_learn_requires_declared_pdim():
    dist = PointMass(UserPoint((0.0,), 0.0, 1.0))
    with pytest.raises(ConfigError):
        learn_equilibrium(dist, [FiniteList((Constant(0),))], 0.5, 0.5, m_cap=5)


def test_learn_capped_run_is_empirical_half_epsilon_pne():
    sc = regression_market()
    for seed in range(5):
        res = learn_equilibrium(sc.distribution, sc.classes, 0.2, 0.1, seed=seed, m_cap=500)
        assert res.m_used == 500 and res.capped and res.trace.terminated
        assert verify_epsilon_pne(res.game, res.profile, 0.1)


def test_learn_deterministic():
    sc = regression_market()
    a = learn_equilibrium(sc.distribution, sc.classes, 0.2, 0.1, seed=3, m_cap=200)
    b = learn_equilibrium(sc.distribution, sc.classes, 0.2, 0.1, seed=3, m_cap=200)
    assert a.profile == b.profile and a.sample == b.sample and a.trace == b.trace
