"""Command-line front end.

Every subcommand prints its main result to stdout and, with ``--out DIR``,
writes a ``report.json`` (plus command-specific CSV/JSON files) that embeds
the fully resolved configuration. Exit status: 0 success, 1 verification
found a violation, 2 configuration error, 3 input error, 4 resource error,
5 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .bounds import learn_equilibrium, required_sample_size, sample_size_rhs, uniform_convergence_bound
from .dynamics import (ScheduleSpec, enumerate_pure_nash, max_iterations, potential, run_dynamics,
                       verify_epsilon_pne)
from .errors import ConfigError, InputError, ResourceError
from .linear import best_linear_response, region_string
from .model import EmpiricalGame, empirical_payoffs, monte_carlo_payoffs, restriction_count
from .scenarios import draw_sample, example41_distribution, make_example41, simulate_claim_a6

EXIT_OK, EXIT_VIOLATED, EXIT_CONFIG, EXIT_INPUT, EXIT_RESOURCE, EXIT_INTERNAL = range(6)

# Fallbacks applied after command line and --config are merged.
DEFAULTS = {
    "seed": 0, "mode": "floating", "threads": 1, "epsilon": 0.05, "delta": 0.1, "d": 1, "N": 1,
    "schedule": "round-robin", "budget": 10 ** 6, "m": 15, "trials": 100000, "draws": 10 ** 6,
    "with_bias": False,
}


def _fmt(v, mode):
    return io.format_number(v, mode)


def _vector(values, mode):
    return [_fmt(v, mode) for v in values]


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ConfigError(f"{args.command}: missing required parameter(s): {', '.join('--' + n.replace('_', '-') for n in missing)}")


def _load_game(args):
    _require(args, "game")
    spec = io.load_game_spec(args.game)
    if "sample" not in spec:
        raise ConfigError(f"{args.game}: game file has no sample")
    return EmpiricalGame(spec["sample"], spec["classes"], args.mode), spec


# ---------------------------------------------------------------------------
# commands: each returns (exit status, stdout text, report dict, extra files)


def cmd_sample_size(args):
    _require(args, "epsilon", "delta", "d", "N")
    m = required_sample_size(args.epsilon, args.delta, args.d, args.N)
    rhs = sample_size_rhs(args.epsilon, args.delta, args.d, args.N)
    return EXIT_OK, str(m), {"m": m, "rhs": _fmt(rhs, "floating")}, {}


def cmd_ucb(args):
    _require(args, "epsilon", "d", "N", "m")
    v = uniform_convergence_bound(args.epsilon, args.d, args.N, args.m)
    return EXIT_OK, _fmt(v, "floating"), {"bound": _fmt(v, "floating")}, {}


def cmd_dynamics(args):
    game, spec = _load_game(args)
    schedule = ScheduleSpec(args.schedule, args.seed if args.schedule == "random" else None, args.max_iterations)
    profile, trace = run_dynamics(game, spec.get("initial"), args.epsilon, None, schedule)
    mode = args.mode
    report = {
        "terminated": trace.terminated, "iterations": trace.iterations,
        "bound": max_iterations(game.N, args.epsilon),
        "initial_potential": _fmt(trace.initial_potential, mode),
        "final_potential": _fmt(potential(game, profile), mode),
        "payoffs": _vector(empirical_payoffs(game, profile), mode),
        "profile": io.profile_to_dict(profile),
    }
    files = {"trace.csv": lambda hdr: io.trace_to_csv(trace, mode, hdr),
             "profile.json": lambda hdr: _json(io.profile_to_dict(profile))}
    text = f"iterations={trace.iterations} terminated={str(trace.terminated).lower()}"
    return EXIT_OK, text, report, files


def cmd_pne_enumerate(args):
    game, _ = _load_game(args)
    found = enumerate_pure_nash(game, args.budget)
    idx = [[game.classes[i].members.index(h) for i, h in enumerate(p)] for p in found]
    report = {"count": len(found), "indices": idx, "profiles": [io.profile_to_dict(p) for p in found]}
    text = "\n".join(" ".join(map(str, r)) for r in idx) or "none"
    return EXIT_OK, text, report, {}


def cmd_verify(args):
    game, spec = _load_game(args)
    profile = io.profile_from_dict(io.load_json(args.profile)) if args.profile else spec.get("initial")
    if profile is None:
        raise ConfigError("verify: supply --profile or an 'initial' profile in the game file")
    verdict = verify_epsilon_pne(game, profile, args.epsilon)
    report = {"holds": verdict.holds, "advisory": verdict.advisory}
    if not verdict.holds:
        report.update(player=verdict.player, gain=_fmt(verdict.gain, args.mode),
                      witness=io.hypothesis_to_dict(verdict.witness))
        text = f"violated player={verdict.player} gain={_fmt(verdict.gain, args.mode)}"
        return EXIT_VIOLATED, text, report, {}
    return EXIT_OK, "holds", report, {}


def cmd_blr(args):
    _require(args, "sample")
    sample = io.read_sample(args.sample)
    opponents = io.profile_from_dict(io.load_json(args.opponents)) if args.opponents else ()
    res = best_linear_response(sample, opponents, mode=args.mode, with_bias=args.with_bias)
    report = {"hypothesis": io.hypothesis_to_dict(res.hypothesis), "payoff": _fmt(res.payoff, args.mode),
              "region": region_string(res.region)}
    text = f"{json.dumps(report['hypothesis'], sort_keys=True)} payoff={report['payoff']}"
    return EXIT_OK, text, report, {}


def cmd_learn(args):
    _require(args, "game", "epsilon", "delta")
    spec = io.load_game_spec(args.game)
    if "distribution" not in spec:
        raise ConfigError(f"{args.game}: learn needs a 'distribution'")
    res = learn_equilibrium(spec["distribution"], spec["classes"], args.epsilon, args.delta,
                            seed=args.seed, m_cap=args.m_cap, mode=args.mode)
    mode = args.mode
    report = {
        "m_required": res.m_required, "m_used": res.m_used, "capped": res.capped,
        "population_guarantee": not res.capped,
        "iterations": res.trace.iterations, "terminated": res.trace.terminated,
        "payoffs": _vector(empirical_payoffs(res.game, res.profile), mode),
        "profile": io.profile_to_dict(res.profile),
    }
    files = {"trace.csv": lambda hdr: io.trace_to_csv(res.trace, mode, hdr),
             "profile.json": lambda hdr: _json(io.profile_to_dict(res.profile)),
             "sample.csv": lambda hdr: "".join(f"# {h}\n" for h in hdr) + io.sample_to_csv(res.sample)}
    text = f"m={res.m_used} capped={str(res.capped).lower()} iterations={res.trace.iterations}"
    return EXIT_OK, text, report, files


def cmd_scenario(args):
    if args.name == "claim-a6":
        p = simulate_claim_a6(args.trials, args.m, args.seed)
        return EXIT_OK, _fmt(p, "floating"), {"probability": _fmt(p, "floating")}, {}
    sample = draw_sample(example41_distribution(), args.m, args.seed)
    ex = make_example41(sample, args.mode)
    mode = args.mode
    found = enumerate_pure_nash(ex.game)
    verdict = verify_epsilon_pne(ex.game, ex.profile, 0)
    mc = monte_carlo_payoffs(ex.distribution, ex.profile, args.draws, args.seed)
    report = {
        "m": args.m, "label_mean": _fmt(sum(p.y for p in sample) / args.m, "floating"),
        "empirical_payoffs": _vector(empirical_payoffs(ex.game, ex.profile), mode),
        "profile_is_empirical_pne": verdict.holds,
        "pne_indices": [[ex.game.classes[i].members.index(h) for i, h in enumerate(q)] for q in found],
        "population_payoffs": _vector(mc.mean, "floating"),
        "population_stderr": _vector(mc.stderr, "floating"),
    }
    files = {"sample.csv": lambda hdr: "".join(f"# {h}\n" for h in hdr) + io.sample_to_csv(sample)}
    text = f"empirical_pne={str(verdict.holds).lower()} payoffs={' '.join(report['empirical_payoffs'])}"
    return EXIT_OK, text, report, files


def cmd_restriction_count(args):
    _require(args, "sample")
    sample = io.read_sample(args.sample)
    if args.cls is None:
        raise ConfigError("restriction-count: missing required parameter --class")
    cls = io.class_from_dict(io.load_json(args.cls), sample)
    count = restriction_count(cls, sample, args.mode)
    return EXIT_OK, str(count), {"count": count}, {}


COMMANDS = {
    "sample-size": cmd_sample_size, "ucb": cmd_ucb, "dynamics": cmd_dynamics,
    "pne-enumerate": cmd_pne_enumerate, "verify": cmd_verify, "blr": cmd_blr, "learn": cmd_learn,
    "scenario": cmd_scenario, "restriction-count": cmd_restriction_count,
}


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of parameter values (command line wins)")
    common.add_argument("--seed", type=int)
    common.add_argument("--mode", choices=("rational", "floating"))
    common.add_argument("--out", help="directory for report and artifact files")
    common.add_argument("--threads", type=int, help="accepted for compatibility; results never depend on it")

    p = argparse.ArgumentParser(prog="predgame", description="Competing prediction algorithms toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("sample-size", "minimal sample size for uniform payoff convergence")
    s.add_argument("--epsilon", type=float)
    s.add_argument("--delta", type=float)
    s.add_argument("--d", type=int, help="sum of the players' pseudo-dimensions")
    s.add_argument("--N", type=int, help="number of players")

    s = add("ucb", "uniform convergence probability bound")
    s.add_argument("--epsilon", type=float)
    s.add_argument("--d", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--m", type=int)

    s = add("dynamics", "run epsilon-better-response dynamics on a game file")
    s.add_argument("--game")
    s.add_argument("--epsilon", type=float)
    s.add_argument("--schedule", choices=("round-robin", "random"))
    s.add_argument("--max-iterations", type=int)

    s = add("pne-enumerate", "list every pure Nash equilibrium of a finite game")
    s.add_argument("--game")
    s.add_argument("--budget", type=int)

    s = add("verify", "check a profile for epsilon-equilibrium")
    s.add_argument("--game")
    s.add_argument("--profile")
    s.add_argument("--epsilon", type=float)

    s = add("blr", "best linear response on a sample")
    s.add_argument("--sample")
    s.add_argument("--opponents")
    s.add_argument("--with-bias", action="store_const", const=True)

    s = add("learn", "sample, then run epsilon/2 dynamics (learn-then-play)")
    s.add_argument("--game")
    s.add_argument("--epsilon", type=float)
    s.add_argument("--delta", type=float)
    s.add_argument("--m-cap", type=int)

    s = add("scenario", "packaged scenarios")
    s.add_argument("name", choices=("example41", "claim-a6"))
    s.add_argument("--m", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--draws", type=int)

    s = add("restriction-count", "distinct satisfaction patterns of a class on a sample")
    s.add_argument("--sample")
    s.add_argument("--class", dest="cls")
    return p


def resolve(argv) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if args.config:
        cfg = io.load_json(args.config)
        if not isinstance(cfg, dict):
            raise ConfigError(f"{args.config}: config must be a JSON object")
        for k, v in cfg.items():
            key = k.replace("-", "_")
            key = "cls" if key == "class" else key
            if key in ("command", "config"):
                continue
            if not hasattr(args, key):
                raise ConfigError(f"{args.config}: unknown parameter {k!r} for {args.command}")
            if getattr(args, key) is None:
                setattr(args, key, v)
    for k, v in DEFAULTS.items():
        if hasattr(args, k) and getattr(args, k) is None:
            setattr(args, k, v)
    for k in ("seed", "mode", "threads"):
        if getattr(args, k) is None:
            setattr(args, k, DEFAULTS[k])
    return args


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = resolve(argv)
        status, text, report, files = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource error: {exc}", file=stderr)
        return EXIT_RESOURCE
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}
    print(text, file=stdout)
    if args.out:
        out = Path(args.out)
        header = [f"config: {json.dumps(config, sort_keys=True)}"]
        io.write_atomic(out / "report.json", _json({"command": args.command, "config": config,
                                                     "seed": args.seed, "result": report}))
        for name, render in files.items():
            io.write_atomic(out / name, render(header))
    return status


def main(argv=None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
