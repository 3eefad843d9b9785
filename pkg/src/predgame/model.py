"""Users, predictors and the payoff calculus of the competing-predictors game.

A user ``z = (x, y, t)`` is *satisfied* by a predictor ``h`` when
``|h(x) - y| <= t``. Every user hands out one unit of payoff, split equally
among the players that satisfy it. Payoffs are computed either exactly
(``mode="rational"``, :class:`fractions.Fraction` results) or in binary
floating point (``mode="floating"``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import InputError, UnsupportedError

MODES = ("rational", "floating")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise InputError(f"unknown arithmetic mode {mode!r}; expected one of {MODES}")
    return mode


def to_fraction(v) -> Fraction:
    """Exact rational value of an int, float or Fraction (floats convert without rounding)."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (bool, np.bool_)):
        return Fraction(int(v))
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return Fraction(float(v))


def canonical_key(x) -> tuple:
    # -0.0 and 0.0 collapse to one key; everything else is bitwise.
    return tuple(float(v) + 0.0 for v in x)


# ---------------------------------------------------------------------------
# users and samples


@dataclass(frozen=True)
class UserPoint:
    """One user: feature vector ``x``, label ``y``, tolerance ``t >= 0``."""

    x: tuple
    y: Real
    t: Real

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        if len(self.x) == 0:
            raise InputError("feature vector must have length >= 1")
        if self.t < 0:
            raise InputError(f"tolerance must be nonnegative, got {self.t}")

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class Sample:
    """An ordered sequence of users sharing one feature dimension."""

    points: tuple

    def __post_init__(self):
        pts = tuple(p if isinstance(p, UserPoint) else UserPoint(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if pts and len({p.n for p in pts}) != 1:
            raise InputError("all points of a sample must share one dimension")

    @classmethod
    def from_arrays(cls, X, y, t) -> "Sample":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] == 1 and len(np.atleast_1d(y)) != 1:
            X = X.T
        y = np.broadcast_to(np.asarray(y, dtype=float), (X.shape[0],))
        t = np.broadcast_to(np.asarray(t, dtype=float), (X.shape[0],))
        return cls(tuple(UserPoint(tuple(float(v) for v in row), float(yy), float(tt))
                         for row, yy, tt in zip(X, y, t)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[UserPoint]:
        return iter(self.points)

    def __getitem__(self, j) -> UserPoint:
        return self.points[j]

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        if not self.points:
            raise InputError("empty sample has no dimension")
        return self.points[0].n

    @cached_property
    def X(self) -> np.ndarray:
        return np.array([[float(v) for v in p.x] for p in self.points], dtype=float).reshape(self.m, -1)

    @cached_property
    def y(self) -> np.ndarray:
        return np.array([float(p.y) for p in self.points], dtype=float)

    @cached_property
    def t(self) -> np.ndarray:
        return np.array([float(p.t) for p in self.points], dtype=float)

    @cached_property
    def exact_points(self) -> tuple:
        return tuple((tuple(to_fraction(v) for v in p.x), to_fraction(p.y), to_fraction(p.t)) for p in self.points)

    def augmented(self) -> "Sample":
        """Append a constant-1 feature to every point (intercept support)."""
        return Sample(tuple(UserPoint(p.x + (1,), p.y, p.t) for p in self.points))


# ---------------------------------------------------------------------------
# hypotheses


class Hypothesis:
    """Base class for predictors ``x -> y``.

    ``evaluate(x, exact=True)`` returns an exact Fraction; ``predict`` is the
    vectorized float path used for Monte Carlo and floating-mode games.
    """

    form: str = ""

    def evaluate(self, x, exact: bool = False):
        raise NotImplementedError

    def predict(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def dim(self) -> Optional[int]:
        """Required input dimension, or None when any dimension is accepted."""
        return None

    def __call__(self, x):
        return self.evaluate(x, exact=False)


@dataclass(frozen=True)
class Linear(Hypothesis):
    coefficients: tuple
    intercept: Real = 0
    form = "linear"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    def dim(self):
        return len(self.coefficients)

    def evaluate(self, x, exact=False):
        if len(x) != len(self.coefficients):
            raise InputError(f"linear hypothesis of dimension {len(self.coefficients)} got input of length {len(x)}")
        if exact:
            terms = (to_fraction(c) * to_fraction(v) for c, v in zip(self.coefficients, x))
            return sum(terms, to_fraction(self.intercept))
        return float(sum(float(c) * float(v) for c, v in zip(self.coefficients, x))) + float(self.intercept)

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.shape[1] != len(self.coefficients):
            raise InputError("dimension mismatch in linear prediction")
        return X @ np.array([float(c) for c in self.coefficients]) + float(self.intercept)


@dataclass(frozen=True)
class Constant(Hypothesis):
    value: Real
    form = "constant"

    def evaluate(self, x, exact=False):
        return to_fraction(self.value) if exact else float(self.value)

    def predict(self, X):
        return np.full(np.asarray(X).shape[0], float(self.value))


@dataclass(frozen=True)
class IntervalIndicator(Hypothesis):
    """Predicts 1 on the interval between ``lo`` and ``hi`` and 0 elsewhere (n = 1)."""

    lo: Real
    hi: Real
    include_lo: bool = True
    include_hi: bool = True
    form = "interval"

    def dim(self):
        return 1

    def _inside(self, v) -> bool:
        above = v >= self.lo if self.include_lo else v > self.lo
        below = v <= self.hi if self.include_hi else v < self.hi
        return bool(above and below)

    def evaluate(self, x, exact=False):
        if len(x) != 1:
            raise InputError("interval indicator is defined for one-dimensional inputs")
        v = x[0]
        if not isinstance(v, Fraction):
            v = float(v)
        inside = self._inside(v)
        return Fraction(int(inside)) if exact else float(inside)

    def predict(self, X):
        v = np.asarray(X, dtype=float)[:, 0]
        lo, hi = float(self.lo), float(self.hi)
        above = v >= lo if self.include_lo else v > lo
        below = v <= hi if self.include_hi else v < hi
        return (above & below).astype(float)


@dataclass(frozen=True)
class SampleOverride(Hypothesis):
    """``base`` everywhere except on the listed inputs, which map to fixed values.

    Inputs are matched exactly on their float encoding.
    """

    base: Hypothesis
    overrides: tuple  # ((key, value), ...) with key = canonical_key(x)
    form = "override"

    def __post_init__(self):
        items = self.overrides.items() if isinstance(self.overrides, dict) else self.overrides
        object.__setattr__(self, "overrides", tuple(sorted((canonical_key(k), v) for k, v in items)))

    @classmethod
    def from_inputs(cls, base: Hypothesis, xs, value) -> "SampleOverride":
        return cls(base, tuple((canonical_key(x), value) for x in dict.fromkeys(canonical_key(x) for x in xs)))

    @cached_property
    def table(self) -> dict:
        return dict(self.overrides)

    def dim(self):
        return self.base.dim()

    def evaluate(self, x, exact=False):
        key = canonical_key(x)
        if key in self.table:
            v = self.table[key]
            return to_fraction(v) if exact else float(v)
        return self.base.evaluate(x, exact=exact)

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        out = np.asarray(self.base.predict(X), dtype=float).copy()
        if not self.overrides:
            return out
        if X.shape[1] == 1:
            keys = np.array([k[0] for k, _ in self.overrides])
            vals = np.array([float(v) for _, v in self.overrides])
            pos = np.clip(np.searchsorted(keys, X[:, 0]), 0, len(keys) - 1)
            hit = keys[pos] == X[:, 0]
            out[hit] = vals[pos[hit]]
            return out
        for r, row in enumerate(X):
            v = self.table.get(canonical_key(row))
            if v is not None:
                out[r] = float(v)
        return out


# ---------------------------------------------------------------------------
# hypothesis classes


@dataclass(frozen=True)
class FiniteList:
    members: tuple
    declared_pdim: Optional[int] = None
    kind = "finite"

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise InputError("a finite hypothesis class needs at least one member")
        if self.declared_pdim is not None and self.declared_pdim < 1:
            raise InputError("declared pseudo-dimension must be >= 1")

    def contains(self, h) -> bool:
        return h in self.members

    def initial(self) -> Hypothesis:
        return self.members[0]


@dataclass(frozen=True)
class LinearClass:
    """Homogeneous linear predictors on R^n, optionally with an intercept."""

    n: int
    with_bias: bool = False
    declared_pdim: Optional[int] = None
    kind = "linear"

    def __post_init__(self):
        if self.n < 1:
            raise InputError("linear class dimension must be >= 1")
        if self.declared_pdim is not None and self.declared_pdim < 1:
            raise InputError("declared pseudo-dimension must be >= 1")

    def contains(self, h) -> bool:
        return (isinstance(h, Linear) and len(h.coefficients) == self.n
                and (self.with_bias or h.intercept == 0))

    def initial(self) -> Linear:
        return Linear((0,) * self.n)


@dataclass(frozen=True)
class Example41Class1:
    """The two sample-memorizing predictors induced by a support sample.

    Member 0 labels every support input 0, member 1 labels it 1; off the
    support both agree with the indicator of ``[1, 2]``.
    """

    support: Sample
    declared_pdim: Optional[int] = None
    kind = "example41"

    @cached_property
    def members(self) -> tuple:
        base = IntervalIndicator(1, 2, True, True)
        xs = [p.x for p in self.support]
        return (SampleOverride.from_inputs(base, xs, 0), SampleOverride.from_inputs(base, xs, 1))

    def contains(self, h) -> bool:
        return h in self.members

    def initial(self) -> Hypothesis:
        return self.members[0]


HypothesisClass = Union[FiniteList, LinearClass, Example41Class1]


def is_finite(cls) -> bool:
    return isinstance(cls, (FiniteList, Example41Class1))


# ---------------------------------------------------------------------------
# satisfaction


def satisfies(z: UserPoint, h: Hypothesis, mode: str = "floating") -> bool:
    """True iff ``|h(x) - y| <= t`` (inclusive boundary)."""
    check_mode(mode)
    d = h.dim()
    if d is not None and d != z.n:
        raise InputError(f"hypothesis dimension {d} does not match point dimension {z.n}")
    if mode == "rational":
        return abs(h.evaluate(z.x, exact=True) - to_fraction(z.y)) <= to_fraction(z.t)
    return abs(float(h.evaluate(z.x)) - float(z.y)) <= float(z.t)


def satisfaction_vector(h: Hypothesis, sample: Sample, mode: str = "floating") -> np.ndarray:
    """Boolean vector ``I(z_j, h)`` over the sample."""
    check_mode(mode)
    if sample.m == 0:
        return np.zeros(0, dtype=bool)
    d = h.dim()
    if d is not None and d != sample.n:
        raise InputError(f"hypothesis dimension {d} does not match sample dimension {sample.n}")
    if mode == "rational":
        return np.array([abs(h.evaluate(x, exact=True) - y) <= t for x, y, t in sample.exact_points], dtype=bool)
    return np.abs(h.predict(sample.X) - sample.y) <= sample.t


# ---------------------------------------------------------------------------
# arithmetic back ends


class Arithmetic:
    """Weight and potential tables for one (mode, N, m).

    Rational mode scales every weight ``1/k`` by ``L = lcm(1..N)`` so sums
    are exact integers; a total ``T`` then represents ``T / (m L)``.
    """

    def __init__(self, mode: str, N: int, m: int):
        self.mode = check_mode(mode)
        self.N, self.m = N, m
        if mode == "rational":
            L = math.lcm(*range(1, N + 1)) if N > 1 else 1
            self.scale = L
            dtype = np.int64 if L * max(m, 1) * (N + 1) < 2 ** 62 else object
            w = [0] + [L // k for k in range(1, N + 2)]
            self.weights = np.array(w, dtype=dtype)
            self.harmonic = np.array(np.cumsum(np.array(w, dtype=object)), dtype=dtype)
        else:
            self.scale = 1
            w = [0.0] + [1.0 / k for k in range(1, N + 2)]
            self.weights = np.array(w)
            self.harmonic = np.cumsum(self.weights)

    def value(self, total):
        if self.mode == "rational":
            return Fraction(int(total), self.m * self.scale)
        return float(total) / self.m

    def values(self, totals) -> np.ndarray:
        return np.array([self.value(v) for v in totals], dtype=object if self.mode == "rational" else float)

    @property
    def slack(self):
        return 0 if self.mode == "rational" else 1e-12


# ---------------------------------------------------------------------------
# the empirical game


class EmpiricalGame:
    """A drawn sample plus one hypothesis class per player."""

    def __init__(self, sample: Sample, classes: Sequence, mode: str = "floating"):
        self.sample = sample if isinstance(sample, Sample) else Sample(tuple(sample))
        self.classes = tuple(classes)
        self.mode = check_mode(mode)
        if self.sample.m < 1:
            raise InputError("an empirical game needs a non-empty sample")
        if not self.classes:
            raise InputError("an empirical game needs at least one player")
        n = self.sample.n
        for i, cls in enumerate(self.classes):
            if isinstance(cls, LinearClass):
                if cls.n != n:
                    raise InputError(f"player {i}: linear class dimension {cls.n} != sample dimension {n}")
            elif is_finite(cls):
                for h in cls.members:
                    if h.dim() is not None and h.dim() != n:
                        raise InputError(f"player {i}: member {h} has dimension {h.dim()} != {n}")
            else:
                raise InputError(f"player {i}: unknown hypothesis class {cls!r}")
        self.arith = Arithmetic(mode, len(self.classes), self.sample.m)
        self._sat: dict = {}
        self._members: dict = {}
        for i, cls in enumerate(self.classes):
            if is_finite(cls):
                rows = self.member_predictions(i)
                if len({r.tobytes() if isinstance(r, np.ndarray) else tuple(r) for r in rows}) != len(rows):
                    raise InputError(f"player {i}: class members coincide on the sample")

    @property
    def N(self) -> int:
        return len(self.classes)

    @property
    def m(self) -> int:
        return self.sample.m

    def member_predictions(self, i):
        cls = self.classes[i]
        if self.mode == "rational":
            return [tuple(h.evaluate(x, exact=True) for x, _, _ in self.sample.exact_points) for h in cls.members]
        return [np.asarray(h.predict(self.sample.X), dtype=float) for h in cls.members]

    def satisfaction(self, h: Hypothesis) -> np.ndarray:
        s = self._sat.get(h)
        if s is None:
            s = satisfaction_vector(h, self.sample, self.mode)
            s.setflags(write=False)
            self._sat[h] = s
        return s

    def member_matrix(self, i: int) -> np.ndarray:
        """``K_i x m`` satisfaction matrix of a finite class."""
        M = self._members.get(i)
        if M is None:
            cls = self.classes[i]
            if not is_finite(cls):
                raise UnsupportedError(f"player {i} has an infinite class")
            M = np.array([self.satisfaction(h) for h in cls.members], dtype=bool).reshape(len(cls.members), self.m)
            self._members[i] = M
        return M

    def check_profile(self, profile) -> tuple:
        profile = tuple(profile)
        if len(profile) != self.N:
            raise InputError(f"profile has {len(profile)} strategies for {self.N} players")
        for i, (h, cls) in enumerate(zip(profile, self.classes)):
            if not cls.contains(h):
                raise InputError(f"player {i}: strategy {h} is not in its class")
        return profile

    def profile_matrix(self, profile) -> np.ndarray:
        return np.array([self.satisfaction(h) for h in profile], dtype=bool).reshape(len(profile), self.m)

    def deviation_weights(self, S: np.ndarray, i: int) -> np.ndarray:
        """Per-point payoff player ``i`` would receive for satisfying it, others fixed."""
        others = S.sum(axis=0) - S[i]
        return self.arith.weights[others + 1]

    def initial_profile(self) -> tuple:
        return tuple(cls.initial() for cls in self.classes)


def payoff_totals(arith: Arithmetic, S: np.ndarray) -> np.ndarray:
    counts = S.sum(axis=0)
    w = arith.weights[counts]
    return (S * w).sum(axis=1) if S.shape[1] else np.zeros(S.shape[0], dtype=w.dtype)


def payoff_weights(z: UserPoint, profile: Sequence[Hypothesis], mode: str = "floating") -> np.ndarray:
    """Share of user ``z`` each player receives under ``profile``."""
    if len(profile) < 1:
        raise InputError("profile must contain at least one strategy")
    sat = np.array([satisfies(z, h, mode) for h in profile], dtype=bool)
    k = int(sat.sum())
    if mode == "rational":
        return np.array([Fraction(1, k) if s else Fraction(0) for s in sat], dtype=object)
    return np.where(sat, 1.0 / max(k, 1), 0.0)


def empirical_payoffs(game: EmpiricalGame, profile: Sequence[Hypothesis]) -> np.ndarray:
    """Average of the per-user payoff weights over the game's sample."""
    profile = game.check_profile(profile)
    return game.arith.values(payoff_totals(game.arith, game.profile_matrix(profile)))


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    draws: int


def monte_carlo_payoffs(dist, profile: Sequence[Hypothesis], draws: int, seed: int,
                        chunk: int = 1 << 20) -> MonteCarloEstimate:
    """Estimate population payoffs ``E_z[w_i(z; h)]`` by sampling ``dist``.

    ``dist`` is any object with ``draw_arrays(m, rng) -> (X, y, t)``; the
    distribution specs in :mod:`predgame.scenarios` qualify.
    """
    if draws < 1:
        raise InputError("draws must be >= 1")
    rng = np.random.default_rng(seed)
    N = len(profile)
    s1 = np.zeros(N)
    s2 = np.zeros(N)
    done = 0
    while done < draws:
        k = min(chunk, draws - done)
        X, y, t = dist.draw_arrays(k, rng)
        S = np.array([np.abs(h.predict(X) - y) <= t for h in profile], dtype=bool)
        c = S.sum(axis=0)
        W = np.where(S, 1.0 / np.maximum(c, 1), 0.0)
        s1 += W.sum(axis=1)
        s2 += (W * W).sum(axis=1)
        done += k
    mean = s1 / draws
    if draws > 1:
        var = np.maximum(s2 - draws * mean * mean, 0.0) / (draws - 1)
        stderr = np.sqrt(var / draws)
    else:
        stderr = np.full(N, np.inf)
    return MonteCarloEstimate(mean, stderr, draws)


# ---------------------------------------------------------------------------
# restriction (growth) counting


def restriction_count(cls, sample: Sample, mode: str = "floating", limit: int = 3) -> int:
    """Number of distinct satisfaction patterns the class realizes on ``sample``."""
    if is_finite(cls):
        if sample.m == 0:
            return 1
        rows = {satisfaction_vector(h, sample, mode).tobytes() for h in cls.members}
        return len(rows)
    if isinstance(cls, LinearClass):
        from .linear import ONE, enumerate_regions

        data = sample.augmented() if cls.with_bias else sample
        if sample.m and data.n > limit:
            raise UnsupportedError(f"region enumeration is limited to dimension <= {limit}")
        regions = enumerate_regions(data, limit=limit)
        return len({tuple(e == ONE for e in v) for v in regions})
    raise UnsupportedError(f"restriction count is not supported for {type(cls).__name__}")
