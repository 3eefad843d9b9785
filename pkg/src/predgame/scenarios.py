"""Population distributions and reproducible game constructions.

All sampling goes through ``numpy.random.default_rng(seed)`` (PCG64), which
gives the same stream on every platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, InputError
from .model import (Constant, EmpiricalGame, Example41Class1, FiniteList, IntervalIndicator, Linear,
                    Sample, UserPoint)


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    y: float
    t: float
    mass: float


@dataclass(frozen=True)
class UniformSegments:
    """Mixture of uniform distributions over x-intervals, each with a fixed label and tolerance."""

    segments: tuple
    kind = "uniform-segments"

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ConfigError("at least one segment is required")
        for s in segs:
            if s.t < 0 or s.mass <= 0 or s.hi < s.lo:
                raise ConfigError(f"invalid segment {s}")
        if not math.isclose(sum(s.mass for s in segs), 1.0, abs_tol=1e-9):
            raise ConfigError("segment masses must sum to 1")

    n = 1

    def draw_arrays(self, m, rng):
        # Inverse CDF on a single uniform stream: the segment is chosen by u,
        # the position inside it by the rescaled remainder of u.
        mass = np.array([s.mass for s in self.segments])
        cum = np.cumsum(mass)
        cum[-1] = 1.0
        u = rng.random(m)
        k = np.minimum(np.searchsorted(cum, u, side="right"), len(mass) - 1)
        v = np.clip((u - (cum[k] - mass[k])) / mass[k], 0.0, np.nextafter(1.0, 0.0))
        lo = np.array([s.lo for s in self.segments])[k]
        hi = np.array([s.hi for s in self.segments])[k]
        X = (lo + v * (hi - lo)).reshape(m, 1)
        y = np.array([s.y for s in self.segments], dtype=float)[k]
        t = np.array([s.t for s in self.segments], dtype=float)[k]
        return X, y, t

    def segment_of(self, X) -> np.ndarray:
        """Index of the segment each drawn x came from (first matching half-open interval)."""
        x = np.asarray(X, dtype=float).reshape(-1)
        out = np.full(x.shape, -1)
        for q, s in reversed(list(enumerate(self.segments))):
            out[(x >= s.lo) & (x <= s.hi)] = q
        return out


@dataclass(frozen=True)
class PointMass:
    point: UserPoint
    kind = "point-mass"

    @property
    def n(self):
        return self.point.n

    def draw_arrays(self, m, rng):
        X = np.tile(np.array([float(v) for v in self.point.x]), (m, 1))
        return X, np.full(m, float(self.point.y)), np.full(m, float(self.point.t))

    def draw(self, m, rng) -> Sample:
        return Sample((self.point,) * m)


@dataclass(frozen=True)
class GaussianRegression:
    """x uniform on ``[x_lo, x_hi]``, ``y = slope x + intercept + noise``, constant tolerance."""

    x_lo: float
    x_hi: float
    slope: float
    intercept: float
    noise_sd: float
    t: float
    kind = "gaussian-regression"
    n = 1

    def __post_init__(self):
        if self.t < 0 or self.noise_sd < 0 or self.x_hi < self.x_lo:
            raise ConfigError(f"invalid gaussian regression spec {self}")

    def draw_arrays(self, m, rng):
        x = self.x_lo + rng.random(m) * (self.x_hi - self.x_lo)
        y = self.slope * x + self.intercept + self.noise_sd * rng.standard_normal(m)
        return x.reshape(m, 1), y, np.full(m, float(self.t))


@dataclass(frozen=True)
class UniformOverSample:
    sample: Sample
    kind = "uniform-over-sample"

    def __post_init__(self):
        if self.sample.m == 0:
            raise ConfigError("cannot draw from an empty sample")

    @property
    def n(self):
        return self.sample.n

    def draw_arrays(self, m, rng):
        idx = rng.integers(0, self.sample.m, size=m)
        return self.sample.X[idx], self.sample.y[idx], self.sample.t[idx]

    def draw(self, m, rng) -> Sample:
        idx = rng.integers(0, self.sample.m, size=m)
        return Sample(tuple(self.sample.points[j] for j in idx))


DISTRIBUTIONS = {cls.kind: cls for cls in (UniformSegments, PointMass, GaussianRegression, UniformOverSample)}


def draw_sample(dist, m: int, seed: int) -> Sample:
    """``m`` independent draws from ``dist``; identical for identical seeds."""
    if m < 1:
        raise InputError("sample size must be >= 1")
    if not hasattr(dist, "draw_arrays"):
        raise ConfigError(f"not a distribution spec: {dist!r}")
    rng = np.random.default_rng(seed)
    if hasattr(dist, "draw"):
        return dist.draw(m, rng)
    return Sample.from_arrays(*dist.draw_arrays(m, rng))


# ---------------------------------------------------------------------------
# the non-learnability construction


def example41_distribution() -> UniformSegments:
    """Half the mass on x in [0, 1) with label 0, half on [1, 2] with label 1; tolerance 1/2."""
    return UniformSegments((Segment(0.0, 1.0, 0.0, 0.5, 0.5), Segment(1.0, 2.0, 1.0, 0.5, 0.5)))


class Example41(NamedTuple):
    game: EmpiricalGame
    profile: tuple
    distribution: UniformSegments


def _in_example41_support(p: UserPoint) -> bool:
    if p.n != 1 or p.t != 0.5:
        return False
    x = p.x[0]
    return (p.y == 0 and 0 <= x < 1) or (p.y == 1 and 1 <= x <= 2)


def make_example41(sample: Sample, mode: str = "floating") -> Example41:
    """Three-player game: a sample-memorizing player against two interval players.

    Player 0 chooses between labelling every sampled input 0 or 1 (and the
    indicator of [1, 2] elsewhere); players 1 and 2 choose between the
    indicators of [0, 1) and [1, 2]. The returned profile is
    ``(memorize-0, 1[1,2], 1[1,2])``.
    """
    bad = [p for p in sample if not _in_example41_support(p)]
    if bad:
        raise InputError(f"{len(bad)} point(s) lie outside the construction's support, e.g. {bad[0]}")
    first = Example41Class1(sample)
    left, right = IntervalIndicator(0, 1, True, False), IntervalIndicator(1, 2, True, True)
    interval = FiniteList((left, right))
    game = EmpiricalGame(sample, (first, interval, interval), mode)
    return Example41(game, (first.members[0], right, right), example41_distribution())


def simulate_claim_a6(trials: int, m: int, seed: int) -> float:
    """Fraction of ``trials`` fair-coin samples of size ``m`` whose mean lies strictly in (1/2, 3/4)."""
    if m < 15:
        raise InputError("the claim concerns samples of size m >= 15")
    if trials < 1:
        raise InputError("trials must be >= 1")
    heads = np.random.default_rng(seed).binomial(m, 0.5, size=trials)
    inside = (2 * heads > m) & (4 * heads < 3 * m)
    return float(inside.mean())


# ---------------------------------------------------------------------------
# a small two-player regression market


class Scenario(NamedTuple):
    distribution: object
    classes: tuple


def regression_market() -> Scenario:
    """Two players with four simple predictors each over noisy ``y = x`` data."""
    members = (Constant(0.5), Linear((1.0,)), Linear((0.5,)), Constant(0.2))
    cls = FiniteList(members, declared_pdim=1)
    return Scenario(GaussianRegression(0.0, 1.0, 1.0, 0.0, 0.2, 0.2), (cls, cls))
