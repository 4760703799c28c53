"""Logging configuration.

Modules log through ``logging.getLogger(__name__)``; entry points call
``configure_logging`` once.
"""

import logging
from typing import Optional

from .config import get_settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Install a single stream handler on the package logger."""
    level = (level or get_settings().log_level).upper()
    root = logging.getLogger("mpr_sampling")
    root.setLevel(level)
    if not any(getattr(h, "_mpr_handler", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._mpr_handler = True  # type: ignore[attr-defined]
        root.addHandler(handler)
