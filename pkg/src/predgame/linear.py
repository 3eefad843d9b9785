"""Best response within the linear class ``x -> h . x`` in fixed low dimension.

Every user splits the coefficient space into three regions: inside its
tolerance slab (``ONE``), above it or below it. ``pvf`` decides whether a
partial assignment of regions is realizable; ``enumerate_regions`` grows all
realizable full assignments one point at a time; ``best_linear_response``
picks the assignment with the largest weighted count of ``ONE`` entries.

Slab membership is closed (``|h.x - y| <= t``) while ``ABOVE``/``BELOW`` are
strict. The default ``method="exact"`` runs Fourier-Motzkin elimination over
Fractions, so the decision and the witness are exact; ``method="lp"``
maximizes a common slack variable with scipy's HiGHS solver and declares
strict feasibility when the slack exceeds ``LP_SLACK``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, ResourceError, UnsupportedError
from .model import Linear, Sample, check_mode, satisfaction_vector, to_fraction

DEFAULT_LIMIT = 3
DEFAULT_BUDGET = 10 ** 6
LP_SLACK = 1e-9


class Region(enum.IntEnum):
    ONE = 0
    ABOVE = 1
    BELOW = 2
    FREE = 3

    def __repr__(self):
        return self.name


ONE, ABOVE, BELOW, FREE = Region.ONE, Region.ABOVE, Region.BELOW, Region.FREE
_SYMBOLS = {ONE: "1", ABOVE: "a", BELOW: "b", FREE: "0"}


def region_string(v) -> str:
    """Compact text form using the symbols 1, a, b, 0."""
    return "".join(_SYMBOLS[Region(e)] for e in v)


def parse_regions(s: str) -> tuple:
    inv = {c: r for r, c in _SYMBOLS.items()}
    try:
        return tuple(inv[c] for c in s)
    except KeyError as exc:
        raise InputError(f"bad region symbol {exc.args[0]!r}") from None


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    h: Optional[tuple] = None
    slack: object = 0

    def __bool__(self):
        return self.feasible


def classify(h, x, y, t) -> Region:
    """Region of one user under coefficients ``h`` (exact when inputs are Fractions)."""
    r = sum((a * b for a, b in zip(h, x)), 0) - y
    if abs(r) <= t:
        return ONE
    return ABOVE if r > t else BELOW


# ---------------------------------------------------------------------------
# exact feasibility: Fourier-Motzkin on integer-scaled constraints
#
# A constraint (a, b, strict) means a . h < b when strict, a . h <= b otherwise.


def _integral(a, b, strict):
    """Scale a constraint by a positive factor so every coefficient is an integer."""
    den = math.lcm(*(q.denominator for q in a), b.denominator)
    ai = [int(q * den) for q in a]
    bi = int(b * den)
    g = math.gcd(*ai, bi)
    if g > 1:
        ai = [q // g for q in ai]
        bi //= g
    return tuple(ai), bi, strict


def _constraints(points, v):
    cons = []
    for (x, y, t), e in zip(points, v):
        neg = tuple(-c for c in x)
        if e == ONE:
            cons.append(_integral(x, y + t, False))
            cons.append(_integral(neg, t - y, False))
        elif e == ABOVE:
            cons.append(_integral(neg, -(y + t), True))
        elif e == BELOW:
            cons.append(_integral(x, y - t, True))
    return cons


def _bounds(cons, k, prefix):
    """Interval for variable ``k`` given fixed values of variables ``0..k-1``."""
    lo = hi = None
    lo_strict = hi_strict = False
    for a, b, strict in cons:
        ak = a[k]
        rest = b - sum((a[q] * prefix[q] for q in range(k)), Fraction(0)) if k else Fraction(b)
        if ak == 0:
            if rest < 0 or (strict and rest == 0):
                return None
            continue
        bound = rest / ak
        if ak > 0:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_strict = bound, strict
        else:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_strict = bound, strict
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and (lo_strict or hi_strict)):
            return None
    return lo, lo_strict, hi, hi_strict


def _pick(lo, lo_strict, hi, hi_strict) -> Fraction:
    def ok(c):
        if lo is not None and (c < lo or (lo_strict and c == lo)):
            return False
        if hi is not None and (c > hi or (hi_strict and c == hi)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is not None and hi is not None:
        return lo if lo == hi else (lo + hi) / 2
    if lo is not None:
        return Fraction(math.floor(lo) + 1)
    return Fraction(math.ceil(hi) - 1)


def _eliminate(cons, k):
    """Project out variable ``k`` (the last active one); integer arithmetic only."""
    pos, neg, out = [], [], []
    for c in cons:
        a = c[0][k]
        (pos if a > 0 else neg if a < 0 else out).append(c)
    zeros = (0,) * (len(cons[0][0]) - k) if cons else ()
    for ap, bp, sp in pos:
        fn = ap[k]
        for an, bn, sn in neg:
            fp = -an[k]
            a = [ap[q] * fp + an[q] * fn for q in range(k)]
            b = bp * fp + bn * fn
            g = math.gcd(*a, b)
            if g > 1:
                a = [q // g for q in a]
                b //= g
            out.append((tuple(a) + zeros, b, sp or sn))
    return out


def _solve_exact(cons, n) -> Optional[tuple]:
    levels = [cons]
    for k in range(n - 1, 0, -1):
        levels.append(_eliminate(levels[-1], k))
    levels.reverse()  # levels[k] constrains variables 0..k
    h = []
    for k in range(n):
        b = _bounds(levels[k], k, h)
        if b is None:
            return None
        h.append(_pick(*b))
    return tuple(h)


def _strict_slack(points, v, h):
    margins = []
    for (x, y, t), e in zip(points, v):
        r = sum((a * b for a, b in zip(h, x)), Fraction(0)) - y
        if e == ABOVE:
            margins.append(r - t)
        elif e == BELOW:
            margins.append(-t - r)
    return min(margins) if margins else Fraction(0)


def _pvf_exact(points, v, n) -> FeasibilityResult:
    h = _solve_exact(_constraints(points, v), n)
    if h is None:
        return FeasibilityResult(False)
    return FeasibilityResult(True, h, _strict_slack(points, v, h))


# ---------------------------------------------------------------------------
# numeric feasibility: slack-maximizing LP


def _pvf_lp(sample: Sample, v) -> FeasibilityResult:
    from scipy.optimize import linprog

    n = sample.n
    rows, rhs = [], []
    strict = False
    for x, y, t, e in zip(sample.X, sample.y, sample.t, v):
        if e == ONE:
            rows += [np.r_[x, 0.0], np.r_[-x, 0.0]]
            rhs += [y + t, t - y]
        elif e == ABOVE:
            rows.append(np.r_[-x, 1.0])
            rhs.append(-(y + t))
            strict = True
        elif e == BELOW:
            rows.append(np.r_[x, 1.0])
            rhs.append(y - t)
            strict = True
    if not rows:
        return FeasibilityResult(True, (0.0,) * n, 0.0)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(None, None)] * n + [(None, 1.0)], method="highs")
    if res.status != 0:
        return FeasibilityResult(False)
    s = float(res.x[-1])
    if strict and s <= LP_SLACK:
        return FeasibilityResult(False)
    return FeasibilityResult(True, tuple(float(q) for q in res.x[:n]), max(s, 0.0) if strict else 0.0)


# ---------------------------------------------------------------------------
# public operations


def _check(sample: Sample, v, limit: int):
    if len(v) != sample.m:
        raise InputError(f"region vector has length {len(v)} but sample has {sample.m} points")
    if sample.m and sample.n > limit:
        raise UnsupportedError(f"linear oracle is limited to dimension <= {limit}, got {sample.n}")


def pvf(sample: Sample, v: Sequence, method: str = "exact", limit: int = DEFAULT_LIMIT) -> FeasibilityResult:
    """Find coefficients realizing the partial region vector ``v``, if any."""
    v = tuple(Region(e) for e in v)
    _check(sample, v, limit)
    if sample.m == 0:
        return FeasibilityResult(True, (), 0)
    if method == "exact":
        return _pvf_exact(sample.exact_points, v, sample.n)
    if method == "lp":
        return _pvf_lp(sample, v)
    raise InputError(f"unknown feasibility method {method!r}")


def enumerate_regions(sample: Sample, limit: int = DEFAULT_LIMIT, budget: int = DEFAULT_BUDGET,
                      method: str = "exact", with_witnesses: bool = False):
    """All realizable full region vectors, in lexicographic order.

    Points are fixed one at a time; each surviving partial vector is extended
    by ONE, ABOVE and BELOW and kept when still feasible. With the exact
    method the parent's witness already certifies one of the three children.
    """
    m = sample.m
    _check(sample, (FREE,) * m, limit)
    if m == 0:
        return [((), ())] if with_witnesses else [()]
    n = sample.n
    points = sample.exact_points
    current = [((FREE,) * m, (Fraction(0),) * n if method == "exact" else (0.0,) * n)]
    for j in range(m):
        nxt = []
        x, y, t = points[j]
        for v, h in current:
            known = classify(h, x, y, t) if method == "exact" else None
            for alpha in (ONE, ABOVE, BELOW):
                child = v[:j] + (alpha,) + v[j + 1:]
                if alpha == known:
                    nxt.append((child, h))
                    continue
                res = pvf(sample, child, method=method, limit=limit)
                if res.feasible:
                    nxt.append((child, res.h))
            if len(nxt) > budget:
                raise ResourceError(f"region enumeration exceeded budget of {budget} vectors")
        current = nxt
    current.sort(key=lambda item: item[0])
    if with_witnesses:
        return current
    return [v for v, _ in current]


@dataclass(frozen=True)
class BestLinearResponse:
    hypothesis: Linear
    payoff: object
    region: tuple


def best_linear_response_weighted(sample: Sample, weights: Sequence, method: str = "exact",
                                  limit: int = DEFAULT_LIMIT, budget: int = DEFAULT_BUDGET):
    """Region maximizing ``sum_j w_j [v_j = ONE]``; ties go to the lexicographically smallest.

    Returns ``(coefficients, region, score)`` with the raw weighted sum.
    """
    weights = list(weights)
    if len(weights) != sample.m:
        raise InputError("one weight per sample point is required")
    best = None
    for v, h in enumerate_regions(sample, limit=limit, budget=budget, method=method, with_witnesses=True):
        score = sum((w for w, e in zip(weights, v) if e == ONE), 0)
        if best is None or score > best[2]:
            best = (h, v, score)
    return best


def best_linear_response(sample: Sample, opponents: Sequence, mode: str = "rational",
                         with_bias: bool = False, method: str = "exact",
                         limit: int = DEFAULT_LIMIT, budget: int = DEFAULT_BUDGET) -> BestLinearResponse:
    """Best linear reply to fixed opponent predictors on the sample.

    Satisfying user ``j`` is worth ``1 / (1 + #opponents satisfying j)``.
    """
    check_mode(mode)
    if sample.m == 0:
        raise InputError("best response needs a non-empty sample")
    others = np.zeros(sample.m, dtype=int)
    for h in opponents:
        others += satisfaction_vector(h, sample, mode)
    if mode == "rational":
        weights = [Fraction(1, int(c) + 1) for c in others]
    else:
        weights = [1.0 / (int(c) + 1) for c in others]
    data = sample.augmented() if with_bias else sample
    h, v, score = best_linear_response_weighted(data, weights, method=method, limit=limit, budget=budget)
    payoff = score / sample.m if mode == "rational" else float(score) / sample.m
    if mode == "rational":
        payoff = to_fraction(payoff)
    return BestLinearResponse(linear_from_coefficients(h, with_bias), payoff, v)


def linear_from_coefficients(h, with_bias: bool) -> Linear:
    h = tuple(h)
    if with_bias:
        return Linear(h[:-1], h[-1])
    return Linear(h)
