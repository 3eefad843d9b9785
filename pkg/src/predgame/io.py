"""Plain-text formats: sample CSV, JSON descriptors and dynamics trace CSV.

Numbers in JSON are either JSON numbers or exact fraction strings like
``"11/60"``. CSV cells are decimal text (or fraction strings); decimals are
read as binary floats in both arithmetic modes so the two modes see the
same data.
"""
from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, InputError
from .model import (Constant, Example41Class1, FiniteList, Hypothesis, IntervalIndicator, Linear,
                    LinearClass, Sample, SampleOverride, UserPoint)
from .scenarios import (GaussianRegression, PointMass, Segment, UniformOverSample, UniformSegments)


# ---------------------------------------------------------------------------
# numbers


def encode_number(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    return float(v)


def decode_number(v):
    if isinstance(v, bool):
        raise InputError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v) if "/" in v else float(v)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a number: {v!r}") from None
    raise InputError(f"expected a number, got {v!r}")


def format_number(v, mode: str = "floating") -> str:
    """17 significant digits for floats, ``p/q`` for exact values."""
    if isinstance(v, Fraction) or (mode == "rational" and isinstance(v, int)):
        return str(Fraction(v))
    return format(float(v), ".17g")


# ---------------------------------------------------------------------------
# samples


def sample_to_csv(sample: Sample) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = sample.n if sample.m else 1
    w.writerow([f"x{k + 1}" for k in range(n)] + ["y", "t"])
    for p in sample:
        w.writerow([_cell(v) for v in (*p.x, p.y, p.t)])
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def parse_sample_csv(text: str) -> Sample:
    rows = [r for r in csv.reader(_io.StringIO(text)) if r and not r[0].startswith("#")]
    if not rows:
        raise InputError("sample CSV is empty")
    header = [h.strip() for h in rows[0]]
    n = len(header) - 2
    if n < 1 or header[-2:] != ["y", "t"] or header[:n] != [f"x{k + 1}" for k in range(n)]:
        raise InputError(f"sample CSV header must be x1,...,xn,y,t; got {','.join(header)}")
    pts = []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != n + 2:
            raise InputError(f"line {lineno}: expected {n + 2} fields, got {len(r)}")
        vals = [decode_number(c.strip()) for c in r]
        pts.append(UserPoint(tuple(vals[:n]), vals[n], vals[n + 1]))
    return Sample(tuple(pts))


def read_sample(path) -> Sample:
    return parse_sample_csv(Path(path).read_text())


# ---------------------------------------------------------------------------
# hypotheses, classes, profiles


def hypothesis_to_dict(h: Hypothesis) -> dict:
    if isinstance(h, Linear):
        d = {"form": "linear", "coefficients": [encode_number(c) for c in h.coefficients]}
        if h.intercept != 0:
            d["intercept"] = encode_number(h.intercept)
        return d
    if isinstance(h, Constant):
        return {"form": "constant", "value": encode_number(h.value)}
    if isinstance(h, IntervalIndicator):
        return {"form": "interval", "lo": encode_number(h.lo), "hi": encode_number(h.hi),
                "include_lo": h.include_lo, "include_hi": h.include_hi}
    if isinstance(h, SampleOverride):
        return {"form": "override", "base": hypothesis_to_dict(h.base),
                "overrides": [{"x": list(k), "value": encode_number(v)} for k, v in h.overrides]}
    raise InputError(f"cannot serialize hypothesis {h!r}")


def hypothesis_from_dict(d: dict) -> Hypothesis:
    try:
        form = d["form"]
        if form == "linear":
            return Linear(tuple(decode_number(c) for c in d["coefficients"]), decode_number(d.get("intercept", 0)))
        if form == "constant":
            return Constant(decode_number(d["value"]))
        if form == "interval":
            return IntervalIndicator(decode_number(d["lo"]), decode_number(d["hi"]),
                                     bool(d.get("include_lo", True)), bool(d.get("include_hi", True)))
        if form == "override":
            base = hypothesis_from_dict(d["base"])
            return SampleOverride(base, tuple((tuple(decode_number(v) for v in o["x"]), decode_number(o["value"]))
                                              for o in d["overrides"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed hypothesis descriptor {d!r}: {exc}") from None
    raise InputError(f"unknown hypothesis form {form!r}")


def class_to_dict(cls) -> dict:
    if isinstance(cls, FiniteList):
        d = {"kind": "finite", "members": [hypothesis_to_dict(h) for h in cls.members]}
    elif isinstance(cls, LinearClass):
        d = {"kind": "linear", "n": cls.n, "with_bias": cls.with_bias}
    elif isinstance(cls, Example41Class1):
        d = {"kind": "example41"}
    else:
        raise InputError(f"cannot serialize class {cls!r}")
    if cls.declared_pdim is not None:
        d["declared_pdim"] = cls.declared_pdim
    return d


def class_from_dict(d: dict, sample: Sample = None):
    kind = d.get("kind")
    pdim = d.get("declared_pdim")
    if kind == "finite":
        return FiniteList(tuple(hypothesis_from_dict(h) for h in d["members"]), pdim)
    if kind == "linear":
        return LinearClass(int(d["n"]), bool(d.get("with_bias", False)), pdim)
    if kind == "example41":
        if sample is None:
            raise ConfigError("the example41 class needs the game's sample as support")
        return Example41Class1(sample, pdim)
    raise ConfigError(f"unknown hypothesis class kind {kind!r}")


def profile_to_dict(profile) -> dict:
    return {"strategies": [hypothesis_to_dict(h) for h in profile]}


def profile_from_dict(d) -> tuple:
    items = d["strategies"] if isinstance(d, dict) else d
    return tuple(hypothesis_from_dict(h) for h in items)


# ---------------------------------------------------------------------------
# distributions


def distribution_to_dict(dist) -> dict:
    if isinstance(dist, UniformSegments):
        return {"kind": dist.kind, "segments": [
            {k: encode_number(getattr(s, k)) for k in ("lo", "hi", "y", "t", "mass")} for s in dist.segments]}
    if isinstance(dist, PointMass):
        p = dist.point
        return {"kind": dist.kind, "point": {"x": [encode_number(v) for v in p.x],
                                             "y": encode_number(p.y), "t": encode_number(p.t)}}
    if isinstance(dist, GaussianRegression):
        return {"kind": dist.kind, **{k: encode_number(getattr(dist, k)) for k in
                                      ("x_lo", "x_hi", "slope", "intercept", "noise_sd", "t")}}
    if isinstance(dist, UniformOverSample):
        return {"kind": dist.kind, "points": [[*map(encode_number, p.x), encode_number(p.y), encode_number(p.t)]
                                              for p in dist.sample]}
    raise ConfigError(f"cannot serialize distribution {dist!r}")


def distribution_from_dict(d: dict):
    kind = d.get("kind")
    try:
        if kind == UniformSegments.kind:
            return UniformSegments(tuple(Segment(*(float(decode_number(s[k])) for k in ("lo", "hi", "y", "t", "mass")))
                                         for s in d["segments"]))
        if kind == PointMass.kind:
            p = d["point"]
            return PointMass(UserPoint(tuple(decode_number(v) for v in p["x"]), decode_number(p["y"]),
                                       decode_number(p["t"])))
        if kind == GaussianRegression.kind:
            return GaussianRegression(*(float(decode_number(d[k])) for k in
                                        ("x_lo", "x_hi", "slope", "intercept", "noise_sd", "t")))
        if kind == UniformOverSample.kind:
            return UniformOverSample(_points(d["points"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed distribution descriptor: {exc}") from None
    except InputError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown distribution kind {kind!r}")


def _points(rows) -> Sample:
    pts = []
    for r in rows:
        vals = [decode_number(v) for v in r]
        if len(vals) < 3:
            raise InputError(f"point row needs x..., y, t: {r!r}")
        pts.append(UserPoint(tuple(vals[:-2]), vals[-2], vals[-1]))
    return Sample(tuple(pts))


# ---------------------------------------------------------------------------
# game files


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def load_game_spec(path) -> dict:
    """Read a game file: sample (CSV path or inline rows), classes, optional distribution/initial."""
    path = Path(path)
    d = load_json(path)
    out = {}
    sample = d.get("sample")
    if isinstance(sample, str):
        out["sample"] = read_sample(path.parent / sample)
    elif sample is not None:
        out["sample"] = _points(sample)
    if "classes" not in d:
        raise ConfigError(f"{path}: a game file needs a 'classes' list")
    out["classes"] = [class_from_dict(c, out.get("sample")) for c in d["classes"]]
    if "distribution" in d:
        out["distribution"] = distribution_from_dict(d["distribution"])
    if "initial" in d:
        out["initial"] = profile_from_dict(d["initial"])
    return out


# ---------------------------------------------------------------------------
# traces and atomic output


TRACE_COLUMNS = ("step", "player", "old_payoff", "new_payoff", "potential")


def trace_to_csv(trace, mode: str = "floating", header_lines=()) -> str:
    buf = _io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for k, s in enumerate(trace.steps, start=1):
        w.writerow([k, s.player, format_number(s.old_payoff, mode), format_number(s.new_payoff, mode),
                    format_number(s.potential, mode)])
    return buf.getvalue()


def read_trace_rows(text: str) -> list:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))


def write_atomic(path, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
