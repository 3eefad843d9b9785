"""Uniform-convergence bound, sample complexity and the learn-then-play procedure.

All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .dynamics import DynamicsTrace, ScheduleSpec, run_dynamics
from .errors import ConfigError, InputError
from .model import EmpiricalGame, Sample
from .scenarios import draw_sample

_LOG_MAX = math.log(1.7976931348623157e308)


def _check(epsilon, delta=None, d=1, N=1):
    if not 0 < epsilon < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")
    if delta is not None and not 0 < delta < 1:
        raise InputError(f"delta must lie in (0, 1), got {delta}")
    if d < 1 or N < 1:
        raise InputError("d and N must be >= 1")


def log_uniform_convergence_bound(epsilon: float, d: int, N: int, m: int) -> float:
    """``ln(4N) + 10 d ln(2 e m) - epsilon^2 m / 8``."""
    if m < 1:
        raise InputError("m must be >= 1")
    if epsilon <= 0 or d < 1 or N < 1:
        raise InputError("epsilon must be positive and d, N at least 1")
    return math.log(4 * N) + 10 * d * math.log(2 * math.e * m) - epsilon * epsilon * m / 8


def uniform_convergence_bound(epsilon: float, d: int, N: int, m: int) -> float:
    """Probability bound ``4N (2em)^(10d) exp(-epsilon^2 m / 8)`` on an epsilon payoff deviation.

    The raw value is returned (it may exceed 1); ``inf`` when it overflows.
    """
    lv = log_uniform_convergence_bound(epsilon, d, N, m)
    return math.inf if lv > _LOG_MAX else math.exp(lv)


def sample_size_rhs(epsilon: float, delta: float, d: int, N: int) -> float:
    _check(epsilon, delta, d, N)
    e2 = epsilon * epsilon
    return math.fsum((
        320 * d / e2 * math.log(160 * d / e2),
        160 * d * math.log(2 * math.e) / e2,
        16 / e2 * math.log(4 * N / delta),
    ))


def required_sample_size(epsilon: float, delta: float, d: int, N: int) -> int:
    """Smallest integer sample size meeting the closed-form sufficient condition."""
    return max(1, math.ceil(sample_size_rhs(epsilon, delta, d, N)))


@dataclass(frozen=True)
class LearnResult:
    profile: tuple
    sample: Sample
    trace: DynamicsTrace
    m_required: int
    m_used: int
    capped: bool
    game: EmpiricalGame

    def __iter__(self):
        return iter((self.profile, self.sample, self.trace))


def learn_equilibrium(dist, classes: Sequence, epsilon: float, delta: float, oracles=None, seed: int = 0,
                      m_cap: Optional[int] = None, mode: str = "floating",
                      schedule: Optional[ScheduleSpec] = None) -> LearnResult:
    """Draw ``m = m(epsilon/2, delta)`` users and run epsilon/2-better-response dynamics on them.

    ``m_cap`` truncates the sample for desk-scale runs; the result records
    whether it was applied, in which case the population guarantee is void.
    """
    _check(epsilon, delta)
    pdims = [getattr(c, "declared_pdim", None) for c in classes]
    if any(p is None for p in pdims):
        raise ConfigError("every hypothesis class needs a declared pseudo-dimension")
    m_required = required_sample_size(epsilon / 2, delta, sum(pdims), len(classes))
    capped = m_cap is not None and m_cap < m_required
    m = m_cap if capped else m_required
    if m < 1:
        raise ConfigError("m_cap must be >= 1")
    sample = draw_sample(dist, m, seed)
    game = EmpiricalGame(sample, classes, mode)
    profile, trace = run_dynamics(game, None, epsilon / 2, oracles, schedule)
    return LearnResult(profile, sample, trace, m_required, m, capped, game)
