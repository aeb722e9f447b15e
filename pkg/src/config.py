"""
Configuration management for multiref-dialogue-eval

Environment variables (and an optional .env file) only control logging.
Every value that can change a report is a CLI flag; the defaults for those
flags live here as constants.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

from src.errors import ConfigurationError

# Project root (FIRST, so we can use it for .env path)
PROJECT_ROOT = Path(__file__).parent.parent

ENV_FILE = PROJECT_ROOT / ".env"
load_dotenv(dotenv_path=ENV_FILE, override=False)

# ============================================================================
# LOGGING
# ============================================================================

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_FORMAT = os.getenv("LOG_FORMAT", "text").lower()
LOG_FILE = os.getenv("LOG_FILE") or None
DEBUG = os.getenv("DEBUG", "false").lower() == "true"

VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
VALID_LOG_FORMATS = ("text", "json")

# ============================================================================
# TOOL METADATA
# ============================================================================

TOOL_NAME = "multiref-eval"

# ============================================================================
# METRIC DEFAULTS
# ============================================================================

DEFAULT_BLEU_EPSILON = 0.1
DEFAULT_BLEU_MAX_N = 4

DEFAULT_METEOR_ALPHA = 0.9
DEFAULT_METEOR_BETA = 3.0
DEFAULT_METEOR_GAMMA = 0.5

# Node expansions per alignment stage before the best alignment found so far is kept
METEOR_SEARCH_BUDGET = 20_000

DEFAULT_ROUGE_BETA = 1.2

# ============================================================================
# STATISTICS DEFAULTS
# ============================================================================

DEFAULT_KAPPA_THRESHOLD = 0.2
DEFAULT_ABLATION_RESAMPLES = 10
DEFAULT_SEED = 7

# Permutation p-values enumerate n! orderings
EXACT_SPEARMAN_MAX_N = 10

# ============================================================================
# REPORTING
# ============================================================================

FLOAT_SIGNIFICANT_DIGITS = 6


def validate_config() -> bool:
    """Validate logging settings read from the environment."""

    if LOG_LEVEL not in VALID_LOG_LEVELS:
        raise ConfigurationError(
            f"LOG_LEVEL must be one of {', '.join(VALID_LOG_LEVELS)}, got {LOG_LEVEL!r}"
        )

    if LOG_FORMAT not in VALID_LOG_FORMATS:
        raise ConfigurationError(
            f"LOG_FORMAT must be one of {', '.join(VALID_LOG_FORMATS)}, got {LOG_FORMAT!r}"
        )

    return True


if __name__ == "__main__":
    print(f"Project Root: {PROJECT_ROOT}")
    print(f"Log Level: {LOG_LEVEL} ({LOG_FORMAT})")
    print(f"Log File: {LOG_FILE}")
