"""
Runtime Settings

This module loads environment configuration for the simulator and sets up
logging. Values come from environment variables (optionally via a project-root
.env file) and act as defaults; JSON config files and CLI flags override them.
"""

import os
import sys
from pathlib import Path
from typing import Optional, Tuple

from loguru import logger

# Load environment variables from .env file FIRST
try:
    from dotenv import load_dotenv
    env_path = Path(__file__).resolve().parent.parent / '.env'
    load_dotenv(env_path)
except ImportError:
    pass  # python-dotenv not installed

LOG_LEVEL = os.getenv("FETS_LOG_LEVEL", "INFO")

# Wire accounting defaults for the federation ledger
DEFAULT_WIRE_WIDTH = int(os.getenv("FETS_WIRE_WIDTH", "4"))
DEFAULT_METADATA_BYTES = int(os.getenv("FETS_METADATA_BYTES", "16"))

DEFAULT_JOBS = int(os.getenv("FETS_DEFAULT_JOBS", "1"))


def _optional_float(name: str) -> Optional[float]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    return float(raw)


# Unset means "use the diagonal of the volume's physical extent"
HD95_EMPTY_PENALTY = _optional_float("FETS_HD95_EMPTY_PENALTY")


def tc_labels() -> Tuple[int, ...]:
    """
    Label set of the tumor core region.

    Returns:
        tuple: Labels parsed from FETS_TC_LABELS (default "2,4")
    """
    raw = os.getenv("FETS_TC_LABELS", "2,4")
    return tuple(int(part) for part in raw.split(",") if part.strip())


LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
)


def configure_logging(level: Optional[str] = None) -> None:
    """
    Route loguru output to a single stderr sink.

    stdout stays reserved for command summaries so that command output is
    reproducible byte for byte.

    Args:
        level: Log level name; falls back to FETS_LOG_LEVEL
    """
    logger.remove()
    logger.add(sys.stderr, level=(level or LOG_LEVEL).upper(), format=LOG_FORMAT)
    logger.debug(f"Logging configured at level {(level or LOG_LEVEL).upper()}")
