"""Command-line front end.

    slkf run --config cfg.json --seed 42 --out results/ [--plot delta,avg_nis]
    slkf scenario --name drift --emit drift.json
    slkf plot --in results/trace.csv --columns delta --out delta.svg

Exit codes: 0 success, 2 configuration error, 3 runtime or numerical error,
4 I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import parse_config, scenario_to_config
from .errors import ConfigError, DomainError, IoError, SLKFError, UnknownColumn
from .runner import FLOAT_COLUMNS, read_csv, run_command
from .sim import BUILTIN_NAMES, builtin_scenario
from .svg import render_svg

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _columns(text: str) -> list[str]:
    return [c.strip() for c in text.split(",") if c.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="slkf", description="Self-assessing Kalman filter experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a scenario and write trace.csv and summary.json")
    run.add_argument("--config", required=True, help="JSON scenario config")
    run.add_argument("--seed", type=_u64, help="override the config's seed")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--plot", type=_columns, default=None,
                     help="comma-separated columns; writes one SVG per column")

    sc = sub.add_parser("scenario", help="emit a builtin scenario as a config file")
    sc.add_argument("--name", required=True, choices=BUILTIN_NAMES)
    sc.add_argument("--emit", required=True, help="output JSON path ('-' for stdout)")

    plot = sub.add_parser("plot", help="render trace columns to SVG")
    plot.add_argument("--in", dest="inp", required=True, help="trace.csv")
    plot.add_argument("--columns", type=_columns, required=True)
    plot.add_argument("--out", required=True, help="output SVG path")
    return p


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def cmd_run(args) -> int:
    s = parse_config(_read_text(args.config))
    if args.seed is not None:
        s = dataclasses.replace(s, seed=args.seed)
    if args.plot:
        bad = [c for c in args.plot if c not in FLOAT_COLUMNS]
        if bad:
            raise UnknownColumn(f"unknown column {bad[0]!r}")
    out = run_command(s, args.out)
    for col in args.plot or ():
        render_svg([col], out, Path(args.out) / f"{col}.svg")
    return EXIT_OK


def cmd_scenario(args) -> int:
    text = scenario_to_config(builtin_scenario(args.name))
    if args.emit == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.emit).write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {args.emit}: {exc}") from exc
    return EXIT_OK


def cmd_plot(args) -> int:
    render_svg(args.columns, read_csv(args.inp), args.out)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "scenario": cmd_scenario, "plot": cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UnknownColumn) as exc:
        print(f"slkf: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IoError, OSError) as exc:
        print(f"slkf: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SLKFError, DomainError, ArithmeticError) as exc:
        print(f"slkf: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
