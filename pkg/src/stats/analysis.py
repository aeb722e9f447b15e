"""
Metric/Human Correlation Pipelines

Joins metric reports with human ratings and correlates them at the
utterance level (one row per (context, model)) and at the system level
(one row per model).
"""

from enum import Enum
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.corpus.models import HypothesisRecord, MultiRefRecord, RatingKind, RatingRecord
from src.errors import InputValidationError, StatisticsError
from src.evaluation.diversity import DiversityReport
from src.evaluation.quality import QualityReport, ScoringMode, corpus_quality
from src.evaluation.registry import MetricId
from src.stats.correlation import MetricCorrelation, pearson, spearman
from src.utils.logger import logger

Item = Tuple[str, str]


class CorrelationLevel(str, Enum):
    """Granularity of a correlation analysis."""
    UTTERANCE = "utterance"
    SYSTEM = "system"


# ============================================================================
# HUMAN JUDGMENTS
# ============================================================================

def human_means(ratings: Sequence[RatingRecord], kind: RatingKind) -> Dict[Item, float]:
    """Mean rating value per (context_id, model_id) item."""
    selected = [(r.context_id, r.model_id, r.value) for r in ratings if r.kind == RatingKind(kind)]
    if not selected:
        return {}

    frame = pd.DataFrame(selected, columns=["context_id", "model_id", "value"])
    means = frame.groupby(["context_id", "model_id"])["value"].mean()
    return {item: float(value) for item, value in means.items()}


def _correlate(metric: str, scores: Mapping[Item, float], human: Mapping[Item, float]) -> MetricCorrelation:
    joined = sorted(scores.keys() & human.keys())
    if len(joined) < 3:
        raise StatisticsError(
            f"{metric}: correlation requires at least 3 rows with both a score and a rating, "
            f"got {len(joined)}"
        )

    x = [scores[item] for item in joined]
    y = [human[item] for item in joined]
    try:
        return MetricCorrelation(metric=metric, spearman=spearman(x, y), pearson=pearson(x, y))
    except StatisticsError as e:
        raise StatisticsError(f"{metric}: {e}") from e


# ============================================================================
# QUALITY
# ============================================================================

def utterance_correlation(
    report: QualityReport, ratings: Sequence[RatingRecord]
) -> Dict[str, MetricCorrelation]:
    """
    Correlate headline scores with mean appropriateness per (context, model).

    Ratings are expected to be rater-filtered already.
    """
    human = human_means(ratings, RatingKind.APPROPRIATENESS)
    return {metric: _correlate(metric, report.scores(metric), human) for metric in report.metrics}


class ScatterPoint(BaseModel):
    """One model's mean human rating against its mean metric score."""

    model_config = ConfigDict(frozen=True)

    model_id: str
    metric: str
    human_mean: float
    metric_mean: float


class SystemCorrelation(BaseModel):
    """System-level correlations and the scatter rows behind them."""

    model_config = ConfigDict(frozen=True)

    correlations: Dict[str, MetricCorrelation]
    scatter: List[ScatterPoint]


def system_correlation(
    report: QualityReport, ratings: Sequence[RatingRecord]
) -> SystemCorrelation:
    """
    Correlate per-model mean scores with per-model mean appropriateness.

    A model's human mean averages its per-item means, so every rated
    context weighs the same.

    Raises:
        InputValidationError: a rated model has no scores
        StatisticsError: fewer than 3 models, or constant means
    """
    items = human_means(ratings, RatingKind.APPROPRIATENESS)
    per_model: Dict[str, List[float]] = {}
    for (_, model_id), value in sorted(items.items()):
        per_model.setdefault(model_id, []).append(value)
    human = {model_id: float(np.mean(values)) for model_id, values in per_model.items()}

    scored_models = {row.model_id for row in report.per_utterance}
    for model_id in sorted(human):
        if model_id not in scored_models:
            raise InputValidationError(f"model {model_id!r} is rated but has no scores")

    correlations: Dict[str, MetricCorrelation] = {}
    scatter: List[ScatterPoint] = []
    for metric in report.metrics:
        means = report.model_means(metric)
        joined = sorted(means.keys() & human.keys())
        if len(joined) < 3:
            raise StatisticsError(
                f"{metric}: system-level correlation requires at least 3 models, got {len(joined)}"
            )

        x = [means[model_id] for model_id in joined]
        y = [human[model_id] for model_id in joined]
        try:
            correlations[metric] = MetricCorrelation(
                metric=metric, spearman=spearman(x, y), pearson=pearson(x, y)
            )
        except StatisticsError as e:
            raise StatisticsError(f"{metric}: {e}") from e

        scatter.extend(
            ScatterPoint(
                model_id=model_id,
                metric=metric,
                human_mean=human[model_id],
                metric_mean=means[model_id],
            )
            for model_id in joined
        )

    return SystemCorrelation(correlations=correlations, scatter=scatter)


# ============================================================================
# DIVERSITY
# ============================================================================

class DiversityCorrelation(BaseModel):
    """Diversity-measure correlations; measures that could not be correlated are listed with the reason."""

    model_config = ConfigDict(frozen=True)

    correlations: Dict[str, MetricCorrelation]
    skipped: Dict[str, str]


def _diversity_measures(report: DiversityReport) -> Dict[str, Dict[Item, float]]:
    measures: Dict[str, Dict[Item, float]] = {}

    def put(name: str, item: Item, value) -> None:
        column = measures.setdefault(name, {})
        if value is not None:
            column[item] = value

    for row in report.per_context:
        item = (row.context_id, row.model_id)
        for metric, value in row.recall.items():
            put(f"recall_{metric}", item, value)
        for n, value in row.distinct.items():
            put(f"distinct_{n}", item, value)
        for n, value in row.self_bleu.items():
            # Self-BLEU falls as diversity rises
            put(f"inverse_self_bleu_{n}", item, None if value is None else 1.0 - value)
    return measures


def diversity_correlation(
    report: DiversityReport, ratings: Sequence[RatingRecord]
) -> DiversityCorrelation:
    """
    Correlate referenced (recall) and unreferenced (Distinct-n, 1 - Self-BLEU)
    diversity with mean human diversity ratings per (context, model).

    Raises:
        StatisticsError: no measure could be correlated
    """
    human = human_means(ratings, RatingKind.DIVERSITY)
    correlations: Dict[str, MetricCorrelation] = {}
    skipped: Dict[str, str] = {}

    for name, scores in _diversity_measures(report).items():
        try:
            correlations[name] = _correlate(name, scores, human)
        except StatisticsError as e:
            logger.warning(f"Skipping diversity measure {name}: {e}")
            skipped[name] = str(e)

    if not correlations:
        raise StatisticsError("no diversity measure has at least 3 rated, non-constant rows")
    return DiversityCorrelation(correlations=correlations, skipped=skipped)


# ============================================================================
# SINGLE VERSUS MULTI
# ============================================================================

class ModeComparisonEntry(BaseModel):
    """Single- and multi-reference correlation of one metric."""

    model_config = ConfigDict(frozen=True)

    metric: str
    single: MetricCorrelation
    multi: MetricCorrelation
    multi_ge_single: bool


def _correlations(
    report: QualityReport, ratings: Sequence[RatingRecord], level: CorrelationLevel
) -> Dict[str, MetricCorrelation]:
    if level == CorrelationLevel.SYSTEM:
        return system_correlation(report, ratings).correlations
    return utterance_correlation(report, ratings)


def mode_comparison(
    dataset: Sequence[MultiRefRecord],
    hyps: Sequence[HypothesisRecord],
    ratings: Sequence[RatingRecord],
    metrics: Sequence[MetricId],
    level: CorrelationLevel = CorrelationLevel.UTTERANCE,
) -> Dict[str, ModeComparisonEntry]:
    """
    Correlate single- and multi-reference scores with the same ratings and
    flag, per metric, whether multi-reference Spearman and Pearson both
    reach at least the single-reference values.
    """
    level = CorrelationLevel(level)
    multi_report = corpus_quality(dataset, hyps, metrics, ScoringMode.MULTI)
    single_report = multi_report.with_mode(ScoringMode.SINGLE)

    single = _correlations(single_report, ratings, level)
    multi = _correlations(multi_report, ratings, level)

    comparison: Dict[str, ModeComparisonEntry] = {}
    for metric in multi_report.metrics:
        holds = (
            multi[metric].spearman.coefficient >= single[metric].spearman.coefficient
            and multi[metric].pearson.coefficient >= single[metric].pearson.coefficient
        )
        if not holds:
            logger.warning(f"{metric}: multi-reference correlation is below single-reference")
        comparison[metric] = ModeComparisonEntry(
            metric=metric, single=single[metric], multi=multi[metric], multi_ge_single=holds
        )
    return comparison
