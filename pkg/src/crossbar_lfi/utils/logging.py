"""
Logging setup for the crossbar laser-fault simulator.

Engine modules log through ``logging.getLogger(__name__)``; this module only
configures where the records go. Everything is written to stderr so the
summary printed by the CLI on stdout can be piped or diffed.
"""

import logging
import os
import sys
from typing import Any, Mapping, Optional, TextIO

DEFAULT_LOG_LEVEL = "INFO"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# numexpr announces its thread pool at INFO when pandas imports it
QUIET_LOGGERS = ("numexpr",)

logger = logging.getLogger(__name__)


def setup_logging(level: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    """
    Configure the root logger with a single stream handler.

    Args:
        level: Log level name. If None, uses the LOG_LEVEL environment
               variable (a .env file is loaded by the CLI) or DEFAULT_LOG_LEVEL.
        stream: Output stream, sys.stderr by default.
    """
    if level is None:
        level = os.getenv("LOG_LEVEL", DEFAULT_LOG_LEVEL)
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    # Remove existing handlers to avoid duplicates
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setLevel(numeric_level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
    root_logger.addHandler(handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    logger.debug(f"Logging configured with level: {level}")


def log_run_context(command: str, settings: Mapping[str, Any]) -> None:
    """Record the subcommand, its resolved settings and the numeric stack."""
    import numpy
    import pandas
    import scipy

    summary = ", ".join(f"{key}={value}" for key, value in settings.items())
    logger.info(f"Running {command}: {summary}")
    logger.debug(
        f"Python {sys.version.split()[0]}, numpy {numpy.__version__}, "
        f"scipy {scipy.__version__}, pandas {pandas.__version__}"
    )
