"""Helpers shared by the CLI commands: parallel sweeps, CSV output and logging setup."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import pandas as pd
from rich.console import Console
from rich.logging import RichHandler

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][cli]"

_PACKAGE_LOGGER = "epr_memory"

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """
    Apply func to every item, optionally on a thread pool.

    Results are collected in input order, so output does not depend on the
    thread count.
    """
    items = list(items)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads!r}.")
    if threads == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))


def write_csv(frame: pd.DataFrame, directory: str, filename: str, precision: int) -> str:
    """
    Write a result table as comma-separated UTF-8 with a header row.

    Args:
        frame: Table with columns already in output order.
        directory: Output directory, created if missing.
        filename: File name inside the directory.
        precision: Significant digits for floats.

    Returns:
        Path of the written file.
    """
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, filename)
    frame.to_csv(
        path,
        index=False,
        float_format=f"%.{precision}g",
        na_rep="nan",
        encoding="utf-8",
        lineterminator="\n",
    )
    logger.info("%s Wrote %d rows to %s", _LOG_PREFIX, len(frame), path)
    return path


def configure_logging(level: str = "WARNING", console: Optional[Console] = None) -> None:
    """Attach a single RichHandler to the package logger."""
    package_logger = logging.getLogger(_PACKAGE_LOGGER)
    for handler in list(package_logger.handlers):
        if isinstance(handler, RichHandler):
            package_logger.removeHandler(handler)
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=False,
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    package_logger.addHandler(handler)
    package_logger.setLevel(level.upper())
