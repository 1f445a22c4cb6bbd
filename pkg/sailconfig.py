#!/usr/bin/env python3
"""
SAILCONFIG - SHARED CONFIGURATION, LOGGING AND TIMESTAMPS
=========================================================

PURPOSE:
--------
Single place where sailkit reads its environment knobs, builds loggers and
formats report timestamps. Every other module imports the constants from here.

ENVIRONMENT VARIABLES (.env supported through python-dotenv):
-------------------------------------------------------------
- SAILKIT_PRECISION_BITS      initial interval precision in bits (default 128)
- SAILKIT_MAX_PRECISION_BITS  refinement ceiling (default 65536)
- SAILKIT_BOX_CAP             candidate cap for box enumeration (default 10**8)
- SAILKIT_TIMEZONE            report timestamp zone (default America/New_York)
- SAILKIT_LOG_DIR             where rotating log files go (default: this directory)
- SAILKIT_LOG_LEVEL           root level for library loggers (default INFO)
- SAILKIT_JOBS                default worker count for scans (default 4)

NOTES:
------
Values are read once at import time. Tests monkey-patch the module constants
(BASE_DIR, LOG_DIR, BOX_CAP, ...) directly instead of touching the environment.
"""

import logging
import logging.handlers
import os
from datetime import datetime
from pathlib import Path

import pytz
from dotenv import load_dotenv

load_dotenv()


# ---------------------------------------------------------------------------
# Constants and Path Configurations
# ---------------------------------------------------------------------------
BASE_DIR = Path(__file__).resolve().parent


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


PRECISION_BITS = _env_int("SAILKIT_PRECISION_BITS", 128)
MAX_PRECISION_BITS = _env_int("SAILKIT_MAX_PRECISION_BITS", 1 << 16)
BOX_CAP = _env_int("SAILKIT_BOX_CAP", 10**8)
JOBS = _env_int("SAILKIT_JOBS", 4)
INDECOMPOSABLE_CACHE_SIZE = _env_int("SAILKIT_INDECOMPOSABLE_CACHE", 1 << 16)
TIMEZONE_NAME = os.getenv("SAILKIT_TIMEZONE", "America/New_York")
LOG_DIR = Path(os.getenv("SAILKIT_LOG_DIR", str(BASE_DIR)))
LOG_LEVEL = os.getenv("SAILKIT_LOG_LEVEL", "INFO").upper()

try:
    TZ = pytz.timezone(TIMEZONE_NAME)
except pytz.UnknownTimeZoneError:
    TZ = pytz.timezone("America/New_York")

SEPARATOR = "=" * 80


# ---------------------------------------------------------------------------
# Utility Functions
# ---------------------------------------------------------------------------
def get_report_time_str(format_str: str = "%m/%d/%Y %I:%M:%S %p %Z") -> str:
    """Current time in the configured report timezone."""
    return datetime.now(TZ).strftime(format_str)


def get_report_time_iso() -> str:
    return datetime.now(TZ).isoformat()


def completion_summary(status: str, elapsed_seconds: float, **extra) -> dict:
    """Footer block appended to every JSON report."""
    summary = {
        "completion_status": status,
        "generated_at": get_report_time_str(),
        "elapsed_seconds": round(elapsed_seconds, 3),
    }
    summary.update(extra)
    summary["footer"] = SEPARATOR
    return summary


# ---------------------------------------------------------------------------
# Logging Setup
# ---------------------------------------------------------------------------
def setup_logger(name: str, log_file: str, console: bool = False) -> logging.Logger:
    """Plain-message logger writing to LOG_DIR/log_file (optionally echoing to stderr)."""
    LOG_DIR.mkdir(parents=True, exist_ok=True)
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
    logger.handlers.clear()
    logger.propagate = False
    formatter = logging.Formatter("%(message)s")
    file_handler = logging.FileHandler(LOG_DIR / log_file, mode="a", encoding="utf-8")
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)
    if console:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)
    return logger


def configure_cli_logging(log_file: str = "sailkit.log", quiet: bool = False) -> logging.Logger:
    """Root logging for the command line: midnight-rotated file plus console."""
    LOG_DIR.mkdir(parents=True, exist_ok=True)
    file_handler = logging.handlers.TimedRotatingFileHandler(
        LOG_DIR / log_file, when="midnight", backupCount=7
    )
    handlers = [file_handler]
    if not quiet:
        handlers.append(logging.StreamHandler())
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(message)s",
        handlers=handlers,
        force=True,
    )
    return logging.getLogger("sailkit")
