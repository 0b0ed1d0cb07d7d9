"""Command-line entry point: ``epr-memory <command> [options]``."""

import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import List, Optional

import pandas as pd
from rich.console import Console

from ..errors import ConfigError, NumericalError
from . import COMMAND_CLASS_MAPPINGS, COMMAND_DISPLAY_NAME_MAPPINGS
from .config import SETTINGS, RunConfig, load_config
from .utils import configure_logging, write_csv

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][cli]"

EXIT_CODES = SETTINGS["exit_codes"]


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epr-memory",
        description="Map EPR-entangled light onto two atomic ensembles, store it and read it out.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, display_name in COMMAND_DISPLAY_NAME_MAPPINGS.items():
        sub = commands.add_parser(name, help=display_name, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sub.add_argument("--config", metavar="PATH", default=None,
                         help="Run configuration file; defaults reproduce the reference operating point.")
        sub.add_argument("--out", metavar="DIR", default=None, help="Output directory (overrides [output] directory).")
        sub.add_argument("--full", action="store_true", help="Also evaluate the three-level model.")
        sub.add_argument("--seed", type=int, default=None, help="Root seed (overrides [mc] seed).")
        sub.add_argument("--threads", type=_positive_int, default=1, help="Worker threads for sweeps.")
        sub.add_argument("--log-level", default="WARNING",
                         choices=("DEBUG", "INFO", "WARNING", "ERROR"), help="Logging level.")
    return parser


def apply_overrides(config: RunConfig, seed: Optional[int], out: Optional[str]) -> RunConfig:
    if seed is not None:
        config = replace(config, mc=replace(config.mc, seed=seed))
    if out is not None:
        config = replace(config, output=replace(config.output, directory=out))
    return config


def run(args: argparse.Namespace, console: Console) -> int:
    config = apply_overrides(load_config(args.config), args.seed, args.out)
    command = COMMAND_CLASS_MAPPINGS[args.command]()
    logger.info("%s Running %s with %s", _LOG_PREFIX, args.command, config.source)
    result = command.execute(config, full=args.full, threads=args.threads)

    if isinstance(result, pd.DataFrame):
        path = write_csv(result, config.output.directory, command.OUTPUT_FILE, config.output.precision)
        console.print(f"[green]Wrote[/] {len(result)} rows to {path}")
        return EXIT_CODES["ok"]

    os.makedirs(config.output.directory, exist_ok=True)
    path = os.path.join(config.output.directory, command.OUTPUT_FILE)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(result.to_text())
    console.print(result.to_table())
    console.print(f"Report written to {path}")
    return EXIT_CODES["ok"] if result.passed else EXIT_CODES["validation"]


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    console = Console()
    configure_logging(args.log_level)
    try:
        return run(args, console)
    except ConfigError as exc:
        logger.error("%s Configuration error: %s", _LOG_PREFIX, exc)
        return EXIT_CODES["config"]
    except NumericalError as exc:
        logger.error("%s Numerical failure: %s", _LOG_PREFIX, exc)
        return EXIT_CODES["numerical"]
    except ValueError as exc:
        logger.error("%s Invalid input: %s", _LOG_PREFIX, exc)
        return EXIT_CODES["config"]


if __name__ == "__main__":
    sys.exit(main())
