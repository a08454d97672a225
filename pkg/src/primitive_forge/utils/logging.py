"""
Logging configuration for Primitive Forge.

Log records always go to stderr (or a file) so that stdout carries only
exported data. numpy floating-point warnings raised while sampling f are
routed through the same handlers.
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "primitive_forge"

_DETAILED = logging.Formatter(
    fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)


def _stderr_handler(use_rich: bool) -> logging.Handler:
    if not use_rich:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(_DETAILED)
        return handler
    handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter(fmt="%(message)s"))
    return handler


def setup_logging(
    level: str = "WARNING",
    log_file: Optional[Path] = None,
    use_rich: bool = True,
) -> List[logging.Handler]:
    """
    Configure the root logger for a CLI run.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional file path; records go there in the detailed format
        use_rich: Whether to use Rich for colored stderr output

    Returns:
        The installed handlers, stderr handler first
    """
    numeric_level = getattr(logging, level.upper(), logging.WARNING)

    handlers = [_stderr_handler(use_rich)]
    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(_DETAILED)
        handlers.append(file_handler)

    root_logger = logging.getLogger()
    for old in root_logger.handlers[:]:
        root_logger.removeHandler(old)
        if isinstance(old, logging.FileHandler):
            old.close()
    root_logger.setLevel(numeric_level)
    for handler in handlers:
        handler.setLevel(numeric_level)
        root_logger.addHandler(handler)

    logging.getLogger(PACKAGE_LOGGER).setLevel(numeric_level)
    logging.captureWarnings(True)

    logger = logging.getLogger(__name__)
    logger.debug(f"Logging configured at {level} level")
    if log_file:
        logger.debug(f"Log file: {log_file}")
    return handlers
