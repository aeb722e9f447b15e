"""
Exception hierarchy for multiref-dialogue-eval
"""

from pathlib import Path
from typing import Optional, Union


class EvaluationError(Exception):
    """Base class for every error raised by this package."""


class InputValidationError(EvaluationError, ValueError):
    """An input file is malformed or violates a record invariant."""

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
    ):
        self.message = message
        self.path = str(path) if path is not None else None
        self.line = line
        super().__init__(self.__str__())

    def __str__(self) -> str:
        location = ""
        if self.path is not None:
            location = self.path
            if self.line is not None:
                location += f":{self.line}"
            location += ": "
        return f"{location}{self.message}"


class ConfigurationError(EvaluationError, ValueError):
    """Invalid parameter value, unknown metric, or missing metric resource."""


class MetricError(EvaluationError, ValueError):
    """A metric is undefined for the given pair of sentences."""


class StatisticsError(EvaluationError, ValueError):
    """A statistic is undefined for the given sample."""
