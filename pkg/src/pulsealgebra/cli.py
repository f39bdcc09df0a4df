"""
Command-line interface.

    pulsealgebra encode signal.csv -o pulses.csv
    pulsealgebra decode pulses.csv --fs 10000 -o signal.csv
    pulsealgebra mul a.csv b.csv --reference-period 0.001 -o out.csv
    pulsealgebra identity --period 1.0 --count 2 -o ref.csv
    pulsealgebra laws --seed 0 --cases 100
    pulsealgebra experiment --id fig4 -o fig4.csv --plot fig4.svg

Failures print one line ``ERROR <stage>: <detail>`` to stderr and exit 1.
"""

from __future__ import annotations

import argparse
import sys

from . import algebra, codec, io
from .experiments import ExperimentConfig, ExperimentError, preset, run_experiment, write_csv, write_svg
from .laws import LAWS, run_laws
from .pulses import ReferenceTrain, expand


class CliError(Exception):
    def __init__(self, stage: str, detail):
        self.stage = stage
        super().__init__(f"ERROR {stage}: {detail}")


def _params(args) -> codec.IfcParams:
    clock = None if args.clock is None or args.clock <= 0 else args.clock
    try:
        return codec.IfcParams(args.threshold, args.leak, args.refractory, clock)
    except ValueError as exc:
        raise CliError("params", exc) from None


def _add_ifc_flags(p):
    p.add_argument("--threshold", type=float, default=0.001)
    p.add_argument("--leak", type=float, default=40.0, help="leak factor in 1/s (0 = ideal)")
    p.add_argument("--clock", type=float, default=1e-6, help="time-stamping period in s; 0 disables")
    p.add_argument("--refractory", type=float, default=0.0)


def _read_pulses(path):
    try:
        return io.read_pulses(path)
    except (OSError, ValueError) as exc:
        raise CliError("read", exc) from None


def _write(fn, obj, path, stage="write"):
    try:
        fn(obj, path)
    except OSError as exc:
        raise CliError(stage, exc) from None


def cmd_encode(args):
    try:
        sig = io.read_signal(args.input, args.fs)
    except (OSError, ValueError) as exc:
        raise CliError("read", exc) from None
    try:
        train = codec.encode(sig, _params(args))
    except ValueError as exc:
        raise CliError("encode", exc) from None
    _write(io.write_pulses, train, args.output)


def cmd_decode(args):
    train = _read_pulses(args.input)
    duration = args.duration if args.duration is not None else train.last_time - train.origin
    try:
        sig = codec.reconstruct(train, _params(args), args.fs, duration)
    except ValueError as exc:
        raise CliError("decode", exc) from None
    if sig.warning:
        print(f"WARNING decode: {sig.warning}", file=sys.stderr)
    _write(io.write_signal, sig, args.output)


def cmd_binary(args):
    a = _read_pulses(args.a)
    b = _read_pulses(args.b)
    try:
        if args.command == "add":
            out = algebra.add(a, b, args.window_end)
        else:
            if args.reference_period is None:
                raise ValueError("--reference-period is required")
            op = algebra.multiply if args.command == "mul" else algebra.divide
            out = op(a, b, args.reference_period, args.window_end)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(args.command, exc) from None
    _write(io.write_pulses, out, args.output)


def cmd_identity(args):
    try:
        train = expand(ReferenceTrain(args.period, args.count))
    except ValueError as exc:
        raise CliError("identity", exc) from None
    _write(io.write_pulses, train, args.output)


def cmd_laws(args):
    results = run_laws(args.seed, args.cases, args.law or None)
    for r in results:
        print(r.line() + (f" ({r.detail})" if r.detail and not r.passed else ""))
    if not all(r.passed for r in results):
        raise CliError("laws", "; ".join(r.name for r in results if not r.passed) + " failed")


def cmd_experiment(args):
    try:
        cfg = ExperimentConfig.from_json(args.config) if args.config else preset(args.id)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CliError("config", exc) from None
    try:
        result = run_experiment(cfg)
    except ExperimentError as exc:
        raise CliError(exc.stage, exc) from None
    _write(write_csv, result, args.output)
    for r in result.records:
        tail = f"  [{r.note}]" if r.note else ""
        x = "" if r.swept_value is None else f"{r.swept_value:.9g} "
        print(f"{cfg.experiment} {x}snr_db={r.snr_db:.9f} pulses={r.pulses_out}{tail}")
    if result.reported_snr_db is not None:
        print(f"{cfg.experiment} reported snr_db={result.reported_snr_db}")
    if args.plot:
        _write(write_svg, result, args.plot, stage="plot")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pulsealgebra", description="Arithmetic on integrate-and-fire pulse trains.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="signal CSV -> pulse CSV")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--fs", type=float, help="sample rate for headerless single-column input")
    _add_ifc_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="pulse CSV -> signal CSV")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--fs", type=float, default=10000.0)
    p.add_argument("--duration", type=float)
    _add_ifc_flags(p)
    p.set_defaults(func=cmd_decode)

    for name, text in (("mul", "product"), ("div", "quotient a / b"), ("add", "sum")):
        p = sub.add_parser(name, help=f"pulse-domain {text}")
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("-o", "--output", required=True)
        if name != "add":
            p.add_argument("--reference-period", type=float, required=True)
        p.add_argument("--window-end", type=float)
        p.set_defaults(func=cmd_binary)

    p = sub.add_parser("identity", help="write the reference (unit) train")
    p.add_argument("--period", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("laws", help="run the seeded algebraic law checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--law", action="append", choices=sorted(LAWS))
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("experiment", help="run a multiplication experiment")
    p.add_argument("--id", choices=["fig4", "fig5", "fig6", "fig7"], default="fig4")
    p.add_argument("--config", help="JSON experiment config (overrides --id)")
    p.add_argument("-o", "--output", default="results.csv")
    p.add_argument("--plot", help="write an SVG plot here")
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
