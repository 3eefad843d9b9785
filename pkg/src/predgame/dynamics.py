"""Harmonic potential, epsilon-better-response dynamics and equilibrium checks.

For a profile ``h`` let ``c_j`` be the number of players satisfying user
``j``. The potential ``(1/m) sum_j H(c_j)``, with ``H`` the harmonic numbers,
changes by exactly the deviator's payoff change under any unilateral
deviation, is bounded by ``ln N + 1``, and therefore caps the length of every
epsilon-better-response path at ``ceil((ln N + 1) / epsilon)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, InputError, OracleError, PredGameError, ResourceError, UnsupportedError
from .linear import best_linear_response_weighted, linear_from_coefficients
from .model import EmpiricalGame, Hypothesis, LinearClass, is_finite

DEFAULT_PNE_BUDGET = 10 ** 6


def potential(game: EmpiricalGame, profile: Sequence[Hypothesis]):
    profile = game.check_profile(profile)
    S = game.profile_matrix(profile)
    return game.arith.value(game.arith.harmonic[S.sum(axis=0)].sum())


def potential_bound(N: int) -> float:
    return math.log(N) + 1


def max_iterations(N: int, epsilon) -> int:
    """Upper bound on the number of improvement steps at threshold ``epsilon``."""
    return math.ceil(potential_bound(N) / float(epsilon))


def _threshold(epsilon, mode):
    if mode == "rational":
        return Fraction(str(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    return float(epsilon)


# ---------------------------------------------------------------------------
# oracles


class FiniteEnumeration:
    """Scan every member of a finite class; ties go to the lowest index."""

    exact = True
    name = "finite"

    def compatible(self, cls) -> bool:
        return is_finite(cls)

    def best_response(self, game: EmpiricalGame, profile, i: int, S: np.ndarray) -> Hypothesis:
        w = game.deviation_weights(S, i)
        M = game.member_matrix(i)
        totals = M.astype(w.dtype) @ w
        return game.classes[i].members[int(np.argmax(totals))]


class LinearBLR:
    """Best linear response through region enumeration on the sample."""

    exact = True
    name = "blr"

    def __init__(self, limit: int = 3, budget: int = 10 ** 6):
        self.limit, self.budget = limit, budget

    def compatible(self, cls) -> bool:
        return isinstance(cls, LinearClass)

    def best_response(self, game: EmpiricalGame, profile, i: int, S: np.ndarray) -> Hypothesis:
        cls = game.classes[i]
        w = game.deviation_weights(S, i)
        w = [int(q) for q in w] if game.mode == "rational" else [float(q) for q in w]
        data = game.sample.augmented() if cls.with_bias else game.sample
        h, _, _ = best_linear_response_weighted(data, w, limit=self.limit, budget=self.budget)
        return linear_from_coefficients(h, cls.with_bias)


ORACLES = {"finite": FiniteEnumeration, "blr": LinearBLR}


def default_oracle(cls):
    if is_finite(cls):
        return FiniteEnumeration()
    if isinstance(cls, LinearClass):
        return LinearBLR()
    raise ConfigError(f"no default oracle for {type(cls).__name__}")


def resolve_oracles(game: EmpiricalGame, oracles=None) -> list:
    if oracles is None:
        oracles = [None] * game.N
    oracles = list(oracles)
    if len(oracles) != game.N:
        raise ConfigError(f"{len(oracles)} oracles supplied for {game.N} players")
    out = []
    for i, (o, cls) in enumerate(zip(oracles, game.classes)):
        if o is None:
            o = default_oracle(cls)
        elif isinstance(o, str):
            if o not in ORACLES:
                raise ConfigError(f"unknown oracle {o!r}")
            o = ORACLES[o]()
        compatible = getattr(o, "compatible", None)
        if compatible is not None and not compatible(cls):
            raise ConfigError(f"player {i}: oracle {getattr(o, 'name', o)!r} cannot serve {type(cls).__name__}")
        out.append(o)
    return out


def _deviation_total(game, S, i, h):
    w = game.deviation_weights(S, i)
    return (game.satisfaction(h) * w).sum()


def _query(game, oracle, profile, i, S):
    """Best reply proposed by ``oracle`` and the change in player ``i``'s payoff."""
    try:
        h = oracle.best_response(game, profile, i, S)
    except PredGameError:
        raise
    except Exception as exc:
        raise OracleError(f"oracle for player {i} failed: {exc}") from exc
    if not game.classes[i].contains(h):
        raise OracleError(f"oracle for player {i} returned {h!r}, which is outside the class")
    gain = game.arith.value(_deviation_total(game, S, i, h) - _deviation_total(game, S, i, profile[i]))
    return h, gain


def epsilon_better_response_finite(game: EmpiricalGame, profile, i: int, epsilon) -> Optional[Hypothesis]:
    """Payoff-maximizing member if it gains at least ``epsilon``, else None."""
    if not is_finite(game.classes[i]):
        raise UnsupportedError(f"player {i} does not have a finite class")
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    profile = game.check_profile(profile)
    h, gain = _query(game, FiniteEnumeration(), profile, i, game.profile_matrix(profile))
    return h if gain >= _threshold(epsilon, game.mode) else None


# ---------------------------------------------------------------------------
# dynamics


@dataclass(frozen=True)
class ScheduleSpec:
    kind: str = "round-robin"
    seed: Optional[int] = None
    max_iterations: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("round-robin", "random"):
            raise ConfigError(f"unknown schedule {self.kind!r}")
        if (self.seed is not None) != (self.kind == "random"):
            raise ConfigError("a seed is required for, and only for, the random schedule")


@dataclass(frozen=True)
class DynamicsStep:
    player: int
    old: Hypothesis
    new: Hypothesis
    old_payoff: object
    new_payoff: object
    potential: object


@dataclass(frozen=True)
class DynamicsTrace:
    steps: tuple
    terminated: bool
    epsilon: object
    initial_potential: object
    bound: int = field(default=0)

    @property
    def iterations(self) -> int:
        return len(self.steps)


def run_dynamics(game: EmpiricalGame, initial=None, epsilon=0.05, oracles=None,
                 schedule: Optional[ScheduleSpec] = None):
    """Apply epsilon-better responses until no oracle offers one.

    Returns ``(final_profile, trace)``. The round-robin schedule queries
    players 0, 1, ... and restarts at player 0 after every improvement; the
    random schedule draws a fresh permutation of players instead.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    schedule = schedule or ScheduleSpec()
    oracles = resolve_oracles(game, oracles)
    profile = list(game.check_profile(initial if initial is not None else game.initial_profile()))
    eps = _threshold(epsilon, game.mode)
    arith = game.arith
    bound = max_iterations(game.N, epsilon)
    cap = schedule.max_iterations if schedule.max_iterations is not None else bound
    rng = np.random.default_rng(schedule.seed) if schedule.kind == "random" else None

    S = game.profile_matrix(profile)
    phi0 = potential(game, profile)
    steps = []
    while True:
        order = range(game.N) if rng is None else [int(q) for q in rng.permutation(game.N)]
        mover = None
        for i in order:
            try:
                h, gain = _query(game, oracles[i], profile, i, S)
            except OracleError as exc:
                raise OracleError(f"at step {len(steps)}: {exc}") from exc
            if gain >= eps and gain > arith.slack:
                mover = i
                break
        if mover is None:
            terminated = True
            break
        if len(steps) >= cap:
            terminated = False
            break
        old_total = _deviation_total(game, S, mover, profile[mover])
        new_total = _deviation_total(game, S, mover, h)
        old = profile[mover]
        profile[mover] = h
        S = S.copy()
        S[mover] = game.satisfaction(h)
        steps.append(DynamicsStep(mover, old, h, arith.value(old_total), arith.value(new_total),
                                  arith.value(arith.harmonic[S.sum(axis=0)].sum())))
    return tuple(profile), DynamicsTrace(tuple(steps), terminated, epsilon, phi0, bound)


# ---------------------------------------------------------------------------
# verification and enumeration


@dataclass(frozen=True)
class Verdict:
    holds: bool
    player: Optional[int] = None
    witness: Optional[Hypothesis] = None
    gain: object = None
    advisory: bool = False

    def __bool__(self):
        return self.holds


def verify_epsilon_pne(game: EmpiricalGame, profile, epsilon, oracles=None) -> Verdict:
    """Check that no player can gain ``epsilon`` or more by deviating.

    A deviation counts only if its gain is also strictly positive, so
    ``epsilon = 0`` tests for an exact equilibrium. Floating mode adds a
    ``1e-12`` slack. The verdict is advisory when an oracle is not exact.
    """
    if epsilon < 0:
        raise InputError("epsilon must be nonnegative")
    profile = game.check_profile(profile)
    oracles = resolve_oracles(game, oracles)
    advisory = not all(getattr(o, "exact", False) for o in oracles)
    eps = _threshold(epsilon, game.mode) + game.arith.slack
    S = game.profile_matrix(profile)
    for i, oracle in enumerate(oracles):
        h, gain = _query(game, oracle, profile, i, S)
        if gain >= eps and gain > game.arith.slack:
            return Verdict(False, i, h, gain, advisory)
    return Verdict(True, advisory=advisory)


def profile_indices(game: EmpiricalGame, budget: int = DEFAULT_PNE_BUDGET) -> np.ndarray:
    """All member-index tuples of a finite game, lexicographic, as a ``P x N`` array."""
    for i, cls in enumerate(game.classes):
        if not is_finite(cls):
            raise UnsupportedError(f"player {i} does not have a finite class")
    sizes = [len(cls.members) for cls in game.classes]
    total = math.prod(sizes)
    if total > budget:
        raise ResourceError(f"{total} profiles exceed the enumeration budget of {budget}")
    return np.array(list(itertools.product(*(range(k) for k in sizes))), dtype=np.intp).reshape(total, game.N)


def _profile_counts(game, idx):
    mats = [game.member_matrix(i) for i in range(game.N)]
    counts = np.zeros((idx.shape[0], game.m), dtype=np.int64)
    for i, M in enumerate(mats):
        counts += M[idx[:, i]]
    return mats, counts


def potential_table(game: EmpiricalGame, budget: int = DEFAULT_PNE_BUDGET):
    """``(indices, potentials)`` over every profile of a finite game."""
    idx = profile_indices(game, budget)
    _, counts = _profile_counts(game, idx)
    totals = game.arith.harmonic[counts].sum(axis=1)
    return idx, game.arith.values(totals)


def enumerate_pure_nash(game: EmpiricalGame, budget: int = DEFAULT_PNE_BUDGET) -> list:
    """Every exact pure Nash equilibrium of a finite game, in lexicographic index order."""
    idx = profile_indices(game, budget)
    mats, counts = _profile_counts(game, idx)
    W = game.arith.weights
    tol = 0 if game.mode == "rational" else game.arith.slack * game.m
    stable = np.ones(idx.shape[0], dtype=bool)
    for i, M in enumerate(mats):
        own = M[idx[:, i]]
        w = W[counts - own + 1]
        dev = w @ M.T.astype(w.dtype)
        cur = dev[np.arange(idx.shape[0]), idx[:, i]]
        stable &= np.array(dev.max(axis=1) - cur <= tol, dtype=bool)
    return [tuple(game.classes[i].members[k] for i, k in enumerate(row)) for row in idx[stable]]
