"""
Logging configuration for multiref-dialogue-eval
"""

import logging
import sys
from pathlib import Path

from pythonjsonlogger import jsonlogger

from src.config import DEBUG, LOG_FILE, LOG_FORMAT, LOG_LEVEL

FORMAT = "[%(asctime)s] %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def _build_formatter() -> logging.Formatter:
    if LOG_FORMAT == "json":
        return jsonlogger.JsonFormatter(
            "%(asctime)s %(name)s %(levelname)s %(message)s", datefmt=DATE_FORMAT
        )
    return logging.Formatter(FORMAT, datefmt=DATE_FORMAT)


# Configure logger
logger = logging.getLogger("multiref-eval")
logger.setLevel(logging.DEBUG if DEBUG else getattr(logging, LOG_LEVEL, logging.INFO))
logger.propagate = False

if not logger.handlers:
    formatter = _build_formatter()

    # Console handler (stderr: stdout belongs to command output)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler
    if LOG_FILE:
        log_path = Path(LOG_FILE)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)


if __name__ == "__main__":
    logger.debug("Debug message")
    logger.info("Info message")
    logger.warning("Warning message")
    logger.error("Error message")
