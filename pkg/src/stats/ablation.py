"""
Reference-Count Ablation

Re-runs the multi-reference utterance correlation with only k references
per context, for increasing k, to show how correlation grows with the size
of the reference set.
"""

from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.config import DEFAULT_ABLATION_RESAMPLES, DEFAULT_SEED
from src.corpus.loaders import index_by_context
from src.corpus.models import HypothesisRecord, MultiRefRecord, RatingRecord, Utterance
from src.errors import ConfigurationError, InputValidationError
from src.evaluation.quality import ScoringMode, corpus_quality
from src.evaluation.registry import MetricId
from src.stats.analysis import utterance_correlation
from src.stats.correlation import CorrelationResult, MetricCorrelation
from src.utils.logger import logger


class AblationPolicy(str, Enum):
    """How k references are picked from a record's reference set."""
    ORIGINAL_FIRST = "original_first"
    RANDOM = "random"


class AblationPoint(BaseModel):
    """Correlations at one reference count."""

    model_config = ConfigDict(frozen=True)

    k: int
    correlations: Dict[str, MetricCorrelation]


class AblationCurve(BaseModel):
    """Correlation against reference count for every metric."""

    model_config = ConfigDict(frozen=True)

    policy: AblationPolicy
    resamples: int
    seed: int
    points: List[AblationPoint]

    def to_frame(self) -> pd.DataFrame:
        """One row per (k, metric), ready for plotting."""
        rows = [
            {
                "k": point.k,
                "metric": metric,
                "spearman": result.spearman.coefficient,
                "spearman_p": result.spearman.p_value,
                "pearson": result.pearson.coefficient,
                "pearson_p": result.pearson.p_value,
                "n": result.pearson.n,
            }
            for point in self.points
            for metric, result in point.correlations.items()
        ]
        return pd.DataFrame(
            rows, columns=["k", "metric", "spearman", "spearman_p", "pearson", "pearson_p", "n"]
        )


def select_references(
    record: MultiRefRecord,
    k: int,
    policy: AblationPolicy = AblationPolicy.ORIGINAL_FIRST,
    rng: Optional[np.random.Generator] = None,
) -> Sequence[Utterance]:
    """
    Pick k references of a record.

    original_first: the original reference, then collected ones in stored
    order. random: a uniform k-subset drawn from ``rng``, kept in stored order.
    """
    refs = record.all_refs
    if not 1 <= k <= len(refs):
        raise ConfigurationError(
            f"k={k} is outside [1, {len(refs)}] for context {record.context_id!r}"
        )

    if AblationPolicy(policy) == AblationPolicy.ORIGINAL_FIRST:
        return refs[:k]

    if rng is None:
        raise ConfigurationError("random reference selection requires a random generator")
    chosen = np.sort(rng.choice(len(refs), size=k, replace=False))
    return tuple(refs[i] for i in chosen)


def _average(results: Sequence[CorrelationResult]) -> CorrelationResult:
    if len(results) == 1:
        return results[0]
    return CorrelationResult(
        coefficient=float(np.mean([result.coefficient for result in results])),
        p_value=float(np.mean([result.p_value for result in results])),
        n=results[0].n,
    )


def reference_ablation(
    dataset: Sequence[MultiRefRecord],
    hyps: Sequence[HypothesisRecord],
    ratings: Sequence[RatingRecord],
    metrics: Sequence[MetricId],
    k_values: Optional[Sequence[int]] = None,
    policy: AblationPolicy = AblationPolicy.ORIGINAL_FIRST,
    resamples: int = DEFAULT_ABLATION_RESAMPLES,
    seed: int = DEFAULT_SEED,
) -> AblationCurve:
    """
    Utterance-level correlation as a function of the reference count.

    Args:
        dataset: Multi-reference records
        hyps: Hypothesis records
        ratings: Rater-filtered appropriateness ratings
        metrics: Metrics to correlate
        k_values: Reference counts (default 1..smallest reference set size)
        policy: Reference selection policy
        resamples: Random draws per k, averaged (random policy only)
        seed: Seed of the random policy

    Raises:
        ConfigurationError: empty or non-positive k values, k above the
            smallest reference set, or resamples < 1
    """
    policy = AblationPolicy(policy)
    if resamples < 1:
        raise ConfigurationError(f"resamples must be >= 1, got {resamples}")

    by_context = index_by_context(dataset)
    scored = [by_context[record.context_id] for record in hyps if record.context_id in by_context]
    if not scored:
        raise InputValidationError("no hypothesis context is present in the dataset")
    smallest = min(len(record.all_refs) for record in scored)

    if k_values is None:
        k_values = range(1, smallest + 1)
    ks = sorted(set(k_values))
    if not ks:
        raise ConfigurationError("at least one k value is required")
    if ks[0] < 1:
        raise ConfigurationError(f"k values must be >= 1, got {ks[0]}")
    if ks[-1] > smallest:
        raise ConfigurationError(
            f"k={ks[-1]} exceeds the smallest reference set ({smallest} references)"
        )

    draws = resamples if policy == AblationPolicy.RANDOM else 1
    points: List[AblationPoint] = []
    for k in ks:
        runs: List[Dict[str, MetricCorrelation]] = []
        for draw in range(draws):
            rng = np.random.default_rng([seed, k, draw]) if policy == AblationPolicy.RANDOM else None
            # every model sees the same subset of a context within one draw
            subsets: Dict[str, Sequence[Utterance]] = {}

            def references(record: MultiRefRecord) -> Sequence[Utterance]:
                if record.context_id not in subsets:
                    subsets[record.context_id] = select_references(record, k, policy, rng)
                return subsets[record.context_id]

            report = corpus_quality(dataset, hyps, metrics, ScoringMode.MULTI, references=references)
            runs.append(utterance_correlation(report, ratings))

        correlations = {
            metric: MetricCorrelation(
                metric=metric,
                spearman=_average([run[metric].spearman for run in runs]),
                pearson=_average([run[metric].pearson for run in runs]),
            )
            for metric in runs[0]
        }
        points.append(AblationPoint(k=k, correlations=correlations))
        logger.info(f"Ablation k={k}: {draws} run(s) over {len(scored)} hypotheses")

    return AblationCurve(policy=policy, resamples=draws, seed=seed, points=points)
