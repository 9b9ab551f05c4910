"""Utility functions for the fractional DG benchmark."""

from __future__ import annotations

import logging
import math
import tempfile
from datetime import datetime
from pathlib import Path
from typing import TYPE_CHECKING, Any

from fracdg.exceptions import FracDGError

if TYPE_CHECKING:
    from fracdg.config import Config


def setup_logging(config: Config, verbose: bool = False) -> logging.Logger:
    """Setup logging to console and file."""

    config.log_dir.mkdir(parents=True, exist_ok=True)

    log_file = config.log_dir / f"bench_{datetime.now():%Y%m%d_%H%M%S}.log"

    logger = logging.getLogger("fracdg")
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)

    # Clear existing handlers
    logger.handlers.clear()

    # Console handler
    console = logging.StreamHandler()
    console.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(console)

    # File handler
    file_handler = logging.FileHandler(log_file, encoding="utf-8")
    file_handler.setFormatter(logging.Formatter("%(asctime)s %(message)s", "%H:%M:%S"))
    logger.addHandler(file_handler)

    return logger


def atomic_write_text(text: str, path: Path) -> None:
    """
    Atomically write text to file.

    Uses temp file + rename to prevent corruption on interruption.
    """

    tmp_path: Path | None = None

    try:
        path.parent.mkdir(parents=True, exist_ok=True)

        with tempfile.NamedTemporaryFile(
            mode="w",
            suffix=".tmp",
            dir=path.parent,
            delete=False,
            encoding="utf-8",
            newline="",
        ) as tmp:
            tmp.write(text)
            tmp_path = Path(tmp.name)

        tmp_path.replace(path)

    except OSError as e:
        if tmp_path and tmp_path.exists():
            tmp_path.unlink()

        raise FracDGError(f"Cannot write {path}: {e}") from e


def round_sig(value: Any, digits: int = 6) -> Any:
    """Round floats to significant digits; other values pass through."""

    if isinstance(value, float):
        if not math.isfinite(value):
            return None

        return float(f"{value:.{digits}g}")

    if isinstance(value, dict):
        return {key: round_sig(item, digits) for key, item in value.items()}

    if isinstance(value, list):
        return [round_sig(item, digits) for item in value]

    return value
