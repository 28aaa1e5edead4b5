"""Command-line front end.

Subcommands: run, tables, threshold, curves, ensemble. Exit status is 0 on
success, 1 when the engine reports an invariant failure and 2 for usage
errors.
"""

import argparse
import json
import sys

from .channels import ChannelError
from .codes import CodeError, get_code
from .engine import MAX_LEVELS, REFERENCES, concatenate
from .experiments import CURVES, TABLES, SampleError, curve, ensemble, threshold_report
from .noise import (
    FiveParamNoise,
    InfeasibleSample,
    PauliChannel,
    ad_from_fidelity,
    amplitude_damping,
    bit_flip,
    depolarizing,
    general_noise,
    model_fidelity,
    pauli,
    sample_at_fidelity,
    sample_rng,
)

ENGINE_ERRORS = (ChannelError, CodeError, InfeasibleSample, SampleError, RuntimeError, ArithmeticError)


class UsageError(Exception):
    pass


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for --noise {args.noise}")
    return value


def build_noise(args):
    """Resolve the noise flags into ``(channel, description)``."""
    kind = args.noise
    if kind == "dep":
        F0 = _need(args, "fidelity")
        _check(0.25 <= F0 <= 1.0, f"--fidelity {F0} outside [0.25, 1]")
        return depolarizing(F0), {"kind": kind, "F0": F0}
    if kind == "bitflip":
        F0 = _need(args, "fidelity")
        _check(0.0 <= F0 <= 1.0, f"--fidelity {F0} outside [0, 1]")
        return bit_flip(F0), {"kind": kind, "F0": F0}
    if kind == "ad":
        if args.gamma is not None:
            _check(0.0 <= args.gamma <= 1.0, f"--gamma {args.gamma} outside [0, 1]")
            return amplitude_damping(args.gamma), {"kind": kind, "gamma": args.gamma}
        F0 = _need(args, "fidelity")
        _check(0.25 <= F0 <= 1.0, f"--fidelity {F0} outside [0.25, 1]")
        return ad_from_fidelity(F0), {"kind": kind, "F0": F0}
    if kind == "pauli":
        p = _need(args, "params")
        _check(len(p) == 3, "--noise pauli takes --params PX PY PZ")
        try:
            ch = PauliChannel(1.0 - sum(p), *p)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return pauli(ch), {"kind": kind, "px": p[0], "py": p[1], "pz": p[2]}
    # general five-parameter noise: explicit angles, or one seeded draw at --fidelity
    if args.params is not None:
        _check(len(args.params) == 5, "--noise general takes --params THETA PHI ALPHA BETA GAMMA")
        params = FiveParamNoise(*args.params)
    else:
        F0 = _need(args, "fidelity")
        _check(0.25 < F0 < 1.0, f"--fidelity {F0} outside (0.25, 1)")
        params = sample_at_fidelity(F0, sample_rng(args.seed, 0))
    info = {"kind": kind, **params.to_dict(), "F0": model_fidelity(params)}
    return general_noise(params), info


def _check(ok, message):
    if not ok:
        raise UsageError(message)


def cmd_run(args):
    channel, info = build_noise(args)
    trace = concatenate(
        get_code(args.code),
        channel,
        max_levels=MAX_LEVELS if args.levels is None else args.levels,
        reference=args.reference,
        noise_info=info,
    )
    _emit(trace.to_json(), args.out)


def cmd_tables(args):
    table = TABLES[args.which]()
    _emit(table.to_csv() if args.format == "csv" else table.to_json(), args.out)


def cmd_threshold(args):
    report = threshold_report()
    if args.format == "json":
        text = json.dumps(report)
    else:
        text = "key,value\n" + "".join(f"{k},{v!r}\n" for k, v in report.items())
    _emit(text, args.out)


def cmd_curves(args):
    lo, hi, n = (None, None, 50) if args.grid is None else args.grid
    try:
        table = curve(args.which, lo, hi, int(n))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(table.to_csv() if args.format == "csv" else table.to_json(), args.out)


def cmd_ensemble(args):
    F0 = args.fidelity
    _check(F0 is not None, "--fidelity is required")
    _check(0.25 < F0 < 1.0, f"--fidelity {F0} outside (0.25, 1)")
    _check(args.samples >= 1, "--samples must be at least 1")
    _check(args.workers >= 1, "--workers must be at least 1")
    summary = ensemble(
        F0,
        args.samples,
        args.seed,
        levels=args.levels,
        workers=args.workers,
        keep_samples=args.samples_out is not None,
        reference=args.reference,
        code=args.code,
    )
    _emit(summary.to_csv() if args.format == "csv" else summary.to_json(), args.out)
    if args.samples_out is not None:
        _emit(summary.samples_csv(), args.samples_out)


def _levels(text):
    v = int(text)
    if not 0 <= v <= MAX_LEVELS:
        raise argparse.ArgumentTypeError(f"levels must be in 0..{MAX_LEVELS}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--code", choices=("five", "steane"), default="five")
    common.add_argument("--noise", choices=("dep", "ad", "bitflip", "pauli", "general"), default="dep")
    common.add_argument("--fidelity", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--params", type=float, nargs="+", metavar="X")
    common.add_argument("--levels", type=_levels, help="maximum levels (ensemble default: depolarizing L)")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--reference", choices=REFERENCES, default="twirl")

    parser = argparse.ArgumentParser(prog="cascade", description="Concatenated-code channel experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", parents=[common], help="concatenate one channel and write its trace (JSON)")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("tables", parents=[common], help="fidelity and distance tables")
    p.add_argument("which", type=int, choices=sorted(TABLES))
    p.set_defaults(func=cmd_tables)
    p = sub.add_parser("threshold", parents=[common], help="depolarizing threshold of one round")
    p.set_defaults(func=cmd_threshold)
    p = sub.add_parser("curves", parents=[common], help="closed forms against the engine")
    p.add_argument("which", choices=sorted(CURVES))
    p.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "N"))
    p.set_defaults(func=cmd_curves)
    p = sub.add_parser("ensemble", parents=[common], help="random channels at fixed fidelity")
    p.add_argument("--samples-out", default=None, help="per-sample CSV path")
    p.set_defaults(func=cmd_ensemble)
    return parser


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"cascade: error: {exc}", file=sys.stderr)
        return 2
    except ENGINE_ERRORS as exc:
        print(f"cascade: engine failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"cascade: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
