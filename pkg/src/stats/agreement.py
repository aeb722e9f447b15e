"""
Inter-Rater Agreement

Weighted Cohen's kappa and kappa-based rater filtering.
"""

import itertools
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.config import DEFAULT_KAPPA_THRESHOLD
from src.corpus.models import APPROPRIATENESS_MAX, RatingKind, RatingRecord
from src.errors import StatisticsError
from src.utils.logger import logger

Item = Tuple[str, str]


class KappaWeights(str, Enum):
    """Disagreement weight exponent: |i - j| for linear, (i - j)^2 for quadratic."""
    LINEAR = "linear"
    QUADRATIC = "quadratic"


_EXPONENTS = {KappaWeights.LINEAR: 1, KappaWeights.QUADRATIC: 2}


def weighted_kappa(
    a: Sequence[int],
    b: Sequence[int],
    k: int,
    weights: KappaWeights = KappaWeights.QUADRATIC,
) -> float:
    """
    Weighted Cohen's kappa for two raters over categories 1..k.

    kappa = 1 - sum(w * O) / sum(w * E), w_ij = (|i - j| / (k - 1)) ** q,
    O the observed proportion table and E the outer product of its marginals.

    Raises:
        StatisticsError: length mismatch, empty input, category outside
            [1, k], or zero expected disagreement
    """
    if len(a) != len(b):
        raise StatisticsError(f"length mismatch: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise StatisticsError("kappa requires at least one rated item")
    if k < 2:
        raise StatisticsError(f"kappa requires at least 2 categories, got {k}")

    rows = np.asarray(a, dtype=np.int64)
    cols = np.asarray(b, dtype=np.int64)
    if rows.min() < 1 or cols.min() < 1 or rows.max() > k or cols.max() > k:
        raise StatisticsError(f"categories must lie in [1, {k}]")

    observed = np.zeros((k, k), dtype=np.float64)
    np.add.at(observed, (rows - 1, cols - 1), 1.0)
    observed /= rows.size
    expected = np.outer(observed.sum(axis=1), observed.sum(axis=0))

    index = np.arange(k)
    weight = (np.abs(index[:, None] - index[None, :]) / (k - 1)) ** _EXPONENTS[KappaWeights(weights)]

    expected_disagreement = float((weight * expected).sum())
    if expected_disagreement == 0.0:
        raise StatisticsError("kappa is undefined: zero expected disagreement")
    return 1.0 - float((weight * observed).sum()) / expected_disagreement


class KappaResult(BaseModel):
    """Per-rater mean pairwise kappa and the raters kept by the threshold."""

    model_config = ConfigDict(frozen=True)

    kind: RatingKind
    weights: KappaWeights
    threshold: float
    per_rater: Dict[str, float]
    retained: List[str]
    excluded: List[str]
    mean_retained_kappa: Optional[float]


def _categories(kind: RatingKind, ratings: Sequence[RatingRecord]) -> Tuple[int, int]:
    """(offset added to values, category count)."""
    if kind == RatingKind.APPROPRIATENESS:
        return 0, APPROPRIATENESS_MAX
    highest = max(rating.value for rating in ratings)
    return 1, max(highest + 1, 2)


def filter_raters(
    ratings: Sequence[RatingRecord],
    threshold: float = DEFAULT_KAPPA_THRESHOLD,
    weights: KappaWeights = KappaWeights.QUADRATIC,
    kind: RatingKind = RatingKind.APPROPRIATENESS,
) -> KappaResult:
    """
    Drop raters whose mean pairwise weighted kappa is below a threshold.

    Each pair of raters is compared over the (context, model) items both
    rated; pairs with fewer than two common items, or whose kappa is
    undefined, are left out. Raters with no usable pair are excluded.

    Raises:
        StatisticsError: fewer than two raters, or no usable rater pair
    """
    kind = RatingKind(kind)
    weights = KappaWeights(weights)
    selected = [rating for rating in ratings if rating.kind == kind]

    by_rater: Dict[str, Dict[Item, int]] = {}
    for rating in selected:
        by_rater.setdefault(rating.rater_id, {})[rating.item] = rating.value

    if len(by_rater) < 2:
        raise StatisticsError(f"rater filtering requires at least two {kind.value} raters")

    offset, k = _categories(kind, selected)
    pairwise: Dict[str, List[float]] = {rater: [] for rater in by_rater}

    for first, second in itertools.combinations(sorted(by_rater), 2):
        common = sorted(by_rater[first].keys() & by_rater[second].keys())
        if len(common) < 2:
            continue
        try:
            kappa = weighted_kappa(
                [by_rater[first][item] + offset for item in common],
                [by_rater[second][item] + offset for item in common],
                k,
                weights,
            )
        except StatisticsError as e:
            logger.debug(f"Skipping rater pair ({first}, {second}): {e}")
            continue
        pairwise[first].append(kappa)
        pairwise[second].append(kappa)

    per_rater = {rater: float(np.mean(values)) for rater, values in pairwise.items() if values}
    if not per_rater:
        raise StatisticsError("no rater pair shares at least two items with a defined kappa")

    excluded = sorted(rater for rater, values in pairwise.items() if not values)
    if excluded:
        logger.warning(f"Raters without a usable co-rater: {', '.join(excluded)}")

    retained = sorted(rater for rater, kappa in per_rater.items() if kappa >= threshold)
    removed = sorted(set(per_rater) - set(retained))
    if removed:
        logger.info(f"Removed {len(removed)} raters below kappa {threshold}: {', '.join(removed)}")

    return KappaResult(
        kind=kind,
        weights=weights,
        threshold=threshold,
        per_rater=dict(sorted(per_rater.items())),
        retained=retained,
        excluded=excluded,
        mean_retained_kappa=(
            float(np.mean([per_rater[rater] for rater in retained])) if retained else None
        ),
    )


def retain_ratings(
    ratings: Sequence[RatingRecord], result: KappaResult
) -> List[RatingRecord]:
    """Keep ratings of retained raters; ratings of other kinds pass through."""
    retained = set(result.retained)
    return [
        rating
        for rating in ratings
        if rating.kind != result.kind or rating.rater_id in retained
    ]
