"""Command-line front end.

Subcommands::

    subsetbeam sweep-angle       throughput vs eavesdropper angle -> CSV
    subsetbeam sweep-m           throughput vs subset size -> CSV
    subsetbeam variance-profile  beam variance vs angle -> CSV
    subsetbeam point             single eavesdropper position -> CSV
    subsetbeam validate          run the acceptance suite, print pass/fail

Exit status: 0 on success, 1 on runtime/validation failure, 2 on a bad
configuration.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, acceptance, runner
from .config import ConfigError, build_run_config, load_raw
from .simulator import SCHEMES

_KIND_BY_COMMAND = {
    "sweep-angle": "angle",
    "sweep-m": "subset-size",
    "variance-profile": "variance-profile",
    "point": "single-point",
}


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON configuration file")
    parser.add_argument("--seed", type=int, help="64-bit master seed")
    parser.add_argument("--symbols", type=int, help="symbols per sweep point")
    parser.add_argument("--out", metavar="PATH", help="output CSV path")
    parser.add_argument("--scheme", choices=SCHEMES, help="transmission scheme")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subsetbeam",
        description="Secrecy-throughput simulator for random-antenna-subset transmission",
    )
    parser.add_argument("--version", action="version", version=f"subsetbeam {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("sweep-angle", "sweep the eavesdropper angle"),
        ("sweep-m", "sweep the transmit subset size"),
        ("variance-profile", "beam variance per angle"),
        ("point", "single eavesdropper position"),
    ):
        _add_run_flags(commands.add_parser(name, help=help_text))
    commands.add_parser("validate", help="run the acceptance suite")
    return parser


def _resolve(args: argparse.Namespace):
    raw = load_raw(args.config)
    if not isinstance(raw, dict):
        return build_run_config(raw)  # raises with a clear message
    kind = _KIND_BY_COMMAND[args.command]
    sweep = raw.get("sweep")
    sweep = dict(sweep) if isinstance(sweep, dict) else {}
    if sweep.get("kind") not in (None, kind):
        sweep.pop("grid", None)  # a grid for a different sweep kind does not carry over
    sweep["kind"] = kind
    raw["sweep"] = sweep
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.symbols is not None:
        raw["k_symbols"] = args.symbols
    if args.scheme is not None:
        raw["scheme"] = args.scheme
    if args.out is not None:
        raw["output_path"] = args.out
    return build_run_config(raw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        results = acceptance.run_all()
        acceptance.print_report(results)
        return 0 if all(r.passed for r in results) else 1
    try:
        config = _resolve(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        path = runner.run(config)
    except OSError as exc:
        print(f"error writing output: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
