"""
Correlation Coefficients

Pearson and Spearman correlation with two-sided p-values from the
Student-t distribution, and fractional ranking for ties.
"""

import itertools
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import betainc
from scipy.stats import rankdata

from src.config import EXACT_SPEARMAN_MAX_N
from src.errors import StatisticsError

_PERMUTATION_CHUNK = 50_000
_TIE_TOLERANCE = 1e-12


class CorrelationResult(BaseModel):
    """Coefficient, two-sided p-value and sample size."""

    model_config = ConfigDict(frozen=True)

    coefficient: float = Field(..., ge=-1.0, le=1.0)
    p_value: float = Field(..., ge=0.0, le=1.0)
    n: int = Field(..., ge=3)


class MetricCorrelation(BaseModel):
    """Spearman and Pearson correlation of one metric with human judgments."""

    model_config = ConfigDict(frozen=True)

    metric: str
    spearman: CorrelationResult
    pearson: CorrelationResult


def fractional_ranks(values: Sequence[float]) -> np.ndarray:
    """Ranks 1..n; tied values share the mean of the ranks they cover."""
    array = np.asarray(values, dtype=np.float64)
    if array.size == 0:
        raise StatisticsError("cannot rank an empty sequence")
    return rankdata(array, method="average")


def student_t_cdf(t: float, dof: float) -> float:
    """Cumulative Student-t distribution through the regularized incomplete beta function."""
    if dof <= 0:
        raise StatisticsError(f"degrees of freedom must be positive, got {dof}")
    if np.isinf(t):
        return 1.0 if t > 0 else 0.0

    tail = 0.5 * float(betainc(dof / 2.0, 0.5, dof / (dof + t * t)))
    return 1.0 - tail if t > 0 else tail


def two_sided_p_value(r: float, n: int) -> float:
    """P(|T| >= |t|) for t = r * sqrt((n - 2) / (1 - r^2)) with n - 2 degrees of freedom."""
    if abs(r) >= 1.0:
        return 0.0
    dof = n - 2
    t_sq = r * r * dof / (1.0 - r * r)
    return float(np.clip(betainc(dof / 2.0, 0.5, dof / (dof + t_sq)), 0.0, 1.0))


def _validate(x: Sequence[float], y: Sequence[float]) -> tuple:
    x_arr = np.asarray(x, dtype=np.float64)
    y_arr = np.asarray(y, dtype=np.float64)
    if x_arr.shape != y_arr.shape or x_arr.ndim != 1:
        raise StatisticsError(f"length mismatch: {x_arr.size} vs {y_arr.size}")
    if x_arr.size < 3:
        raise StatisticsError(f"correlation requires at least 3 samples, got {x_arr.size}")
    if np.ptp(x_arr) == 0 or np.ptp(y_arr) == 0:
        raise StatisticsError("correlation is undefined for a constant sequence")
    return x_arr, y_arr


def _coefficient(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(np.dot(dx, dy) / np.sqrt(np.dot(dx, dx) * np.dot(dy, dy)))
    return float(np.clip(r, -1.0, 1.0))


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """
    Sample Pearson correlation with a two-sided t-test p-value.

    Raises:
        StatisticsError: length mismatch, fewer than 3 samples, or a constant sequence
    """
    x_arr, y_arr = _validate(x, y)
    r = _coefficient(x_arr, y_arr)
    return CorrelationResult(coefficient=r, p_value=two_sided_p_value(r, x_arr.size), n=x_arr.size)


def _permutation_p_value(x_ranks: np.ndarray, y_ranks: np.ndarray) -> float:
    # Pearson on fixed-variance ranks is proportional to the centred dot product
    dx = x_ranks - x_ranks.mean()
    dy = y_ranks - y_ranks.mean()
    observed = abs(float(np.dot(dx, dy)))

    extreme = 0
    total = 0
    permutations = itertools.permutations(dy)
    while True:
        chunk = list(itertools.islice(permutations, _PERMUTATION_CHUNK))
        if not chunk:
            break
        statistics = np.abs(np.asarray(chunk) @ dx)
        extreme += int(np.count_nonzero(statistics >= observed - _TIE_TOLERANCE))
        total += len(chunk)
    return extreme / total


def spearman(x: Sequence[float], y: Sequence[float], exact: bool = False) -> CorrelationResult:
    """
    Spearman rank correlation: Pearson on fractional ranks.

    Args:
        x: First sample
        y: Second sample
        exact: Compute the p-value by enumerating every permutation of the
            y ranks instead of the t approximation (n <= 10 only)

    Raises:
        StatisticsError: as ``pearson``, or ``exact`` with more than 10 samples
    """
    x_arr, y_arr = _validate(x, y)
    if exact and x_arr.size > EXACT_SPEARMAN_MAX_N:
        raise StatisticsError(
            f"exact Spearman p-values are limited to n <= {EXACT_SPEARMAN_MAX_N}, got {x_arr.size}"
        )

    x_ranks = fractional_ranks(x_arr)
    y_ranks = fractional_ranks(y_arr)
    rho = _coefficient(x_ranks, y_ranks)
    p_value = (
        _permutation_p_value(x_ranks, y_ranks) if exact else two_sided_p_value(rho, x_arr.size)
    )
    return CorrelationResult(coefficient=rho, p_value=p_value, n=x_arr.size)
