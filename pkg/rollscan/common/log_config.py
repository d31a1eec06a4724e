"""Logging setup shared by the CLI and scripts."""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

from rollscan.constants import (
    DEFAULT_LOG_LEVEL,
    ENV_LOG_LEVEL,
    LOG_FORMAT,
    LOG_LEVELS,
)

logger = logging.getLogger(__name__)


def configure_logging(level: Optional[str] = None) -> int:
    """
    Configure root logging.

    The level comes from ``level`` if given, else from ROLLSCAN_LOG (a
    ``.env`` file in the working directory is honoured), else the default.

    Args:
        level: Explicit level name

    Returns:
        The numeric level that was applied
    """
    load_dotenv()
    name = (level or os.getenv(ENV_LOG_LEVEL) or DEFAULT_LOG_LEVEL).upper()
    unknown = name not in LOG_LEVELS
    if unknown:
        bad_name, name = name, DEFAULT_LOG_LEVEL

    numeric = getattr(logging, name)
    logging.basicConfig(level=numeric, format=LOG_FORMAT, force=True)

    if unknown:
        logger.warning(f"Unknown log level '{bad_name}', using {DEFAULT_LOG_LEVEL}")
    return numeric
