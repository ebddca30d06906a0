"""Command-line entry point.

Three subcommands: `optimize` solves each configured channel case for its
EE-SE optimum, `tradeoff` tabulates the full EE(C) curve on a grid, and
`sweep` re-optimizes while one input varies. All take a TOML config (the
baseline scenario applies when none is given) plus flag overrides, and
write CSV to --output or stdout.

Exit codes: 0 success, 2 configuration problem, 3 solver failure.
"""
from __future__ import annotations

import argparse
import sys

from .config import (
    SWEEPABLE,
    RunConfig,
    SweepSpec,
    apply_overrides,
    load_config,
)
from .errors import ConfigError, NumericalError, SolverError
from .minpower import ChannelCase
from .runner import run_optimize, run_sweep, run_tradeoff

__all__ = ["main"]


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", metavar="PATH", help="TOML config file (default: baseline scenario)")
    sub.add_argument("--output", metavar="PATH", help="write CSV here instead of stdout")
    sub.add_argument("--cases", metavar="LIST", help="comma-separated channel cases to run")
    sub.add_argument("--kappa", type=float, help="rate-dependent circuit power coefficient, W")
    sub.add_argument("--p-static-w", type=float, help="static circuit power, W")
    sub.add_argument("--noise-figure-db", type=float, help="receiver noise figure, dB")
    sub.add_argument("--distance-m", type=float, help="link distance, m")
    sub.add_argument("--g0-db", type=float, help="reference gain at 1 m, dB")
    sub.add_argument("--path-exp", type=float, help="path loss exponent")
    sub.add_argument("--nakagami-m", type=float, help="Nakagami fading shape")
    sub.add_argument("--delta", type=float, help="bisection bracket tolerance, bits/s/Hz")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eeopt",
        description="Energy-efficiency / spectral-efficiency optimization for a fading link",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    opt = commands.add_parser("optimize", help="solve for the EE optimum of each case")
    _add_common(opt)

    curve = commands.add_parser("tradeoff", help="tabulate EE(C) over an SE grid")
    _add_common(curve)
    curve.add_argument("--c-min", type=float, default=0.0, help="grid start, bits/s/Hz")
    curve.add_argument("--c-max", type=float, default=12.0, help="grid end, bits/s/Hz")
    curve.add_argument("--points", type=int, default=121, help="grid size")

    sweep = commands.add_parser("sweep", help="re-optimize while one input varies")
    _add_common(sweep)
    sweep.add_argument("--param", required=True, choices=SWEEPABLE, help="input to vary")
    sweep.add_argument("--start", type=float, required=True, help="first sweep value")
    sweep.add_argument("--stop", type=float, required=True, help="last sweep value")
    sweep.add_argument("--points", type=int, required=True, help="number of sweep values")
    sweep.add_argument("--log", action="store_true", help="log-spaced sweep values")
    sweep.add_argument("--jobs", type=int, default=1, help="concurrent sweep points")
    return parser


def _parse_cases(text: str | None):
    if text is None:
        return None
    cases = []
    for name in text.split(","):
        name = name.strip()
        try:
            cases.append(ChannelCase(name))
        except ValueError:
            valid = ", ".join(c.value for c in ChannelCase)
            raise ConfigError(f"unknown case {name!r}; valid cases: {valid}") from None
    return tuple(cases)


def _resolve_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig().validate()
    return apply_overrides(
        config,
        cases=_parse_cases(args.cases),
        kappa=args.kappa,
        p_static_w=args.p_static_w,
        noise_figure_db=args.noise_figure_db,
        distance_m=args.distance_m,
        g0_db=args.g0_db,
        path_exp=args.path_exp,
        nakagami_m=args.nakagami_m,
        delta=args.delta,
        output_path=args.output,
    )


def _emit(csv_text: str, output_path: str | None, summary: str | None = None):
    if output_path:
        try:
            with open(output_path, "w", newline="") as handle:
                handle.write(csv_text)
        except OSError as err:
            raise ConfigError(f"cannot write {output_path}: {err}") from err
        if summary:
            sys.stdout.write(summary)
        sys.stdout.write(f"wrote {output_path}\n")
    else:
        sys.stdout.write(csv_text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        if args.command == "optimize":
            csv_text, summary = run_optimize(config)
            _emit(csv_text, config.output_path, summary)
        elif args.command == "tradeoff":
            csv_text = run_tradeoff(config, args.c_min, args.c_max, args.points)
            _emit(csv_text, config.output_path)
        else:
            spec = SweepSpec(
                parameter=args.param,
                start=args.start,
                stop=args.stop,
                points=args.points,
                scale="log" if args.log else "linear",
            )
            csv_text = run_sweep(config, spec, jobs=args.jobs)
            _emit(csv_text, config.output_path)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (SolverError, NumericalError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
