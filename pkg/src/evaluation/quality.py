"""
Reference-Based Quality Scoring

Single-reference scoring d(y, r) against the original reference and
multi-reference scoring max_{r in R} d(y, r), assembled into per-utterance
rows and per-model means.
"""

from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.corpus.loaders import index_by_context
from src.corpus.models import HypothesisRecord, MultiRefRecord, Utterance
from src.errors import InputValidationError, MetricError
from src.evaluation.registry import MetricId, metric_names, pair_score
from src.utils.logger import logger

ReferenceSelector = Callable[[MultiRefRecord], Sequence[Utterance]]


class ScoringMode(str, Enum):
    """Which reference set a row's headline score uses."""
    SINGLE = "single"
    MULTI = "multi"


# ============================================================================
# REPORT MODELS
# ============================================================================

class QualityRow(BaseModel):
    """Scores of one hypothesis under one metric."""

    model_config = ConfigDict(frozen=True)

    context_id: str
    model_id: str
    hypothesis_index: int
    metric: str
    single: Optional[float]
    multi: Optional[float]
    score: Optional[float]

    @property
    def item(self) -> Tuple[str, str]:
        return (self.context_id, self.model_id)


class QualityAggregate(BaseModel):
    """Mean headline score of one model under one metric."""

    model_config = ConfigDict(frozen=True)

    model_id: str
    metric: str
    mean: Optional[float]
    contexts: int


class QualityReport(BaseModel):
    """Per-utterance scores and per-model means for a scoring run."""

    model_config = ConfigDict(frozen=True)

    mode: ScoringMode
    metrics: List[str]
    per_utterance: List[QualityRow]
    aggregates: List[QualityAggregate]

    def with_mode(self, mode: ScoringMode) -> "QualityReport":
        """The same rows with the headline score switched to the other reference set."""
        mode = ScoringMode(mode)
        rows = [
            row.model_copy(update={"score": row.single if mode == ScoringMode.SINGLE else row.multi})
            for row in self.per_utterance
        ]
        return QualityReport(
            mode=mode, metrics=list(self.metrics), per_utterance=rows, aggregates=_aggregate(rows)
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [row.model_dump() for row in self.per_utterance],
            columns=list(QualityRow.model_fields),
        )

    def scores(self, metric: str) -> Dict[Tuple[str, str], float]:
        """Headline scores of one metric keyed by (context_id, model_id); missing values dropped."""
        return {
            row.item: row.score
            for row in self.per_utterance
            if row.metric == metric and row.score is not None
        }

    def model_means(self, metric: str) -> Dict[str, float]:
        return {
            aggregate.model_id: aggregate.mean
            for aggregate in self.aggregates
            if aggregate.metric == metric and aggregate.mean is not None
        }


# ============================================================================
# SCORING
# ============================================================================

def multi_ref_score(metric: MetricId, hyp: Utterance, refs: Sequence[Utterance]) -> float:
    """
    Score a hypothesis by its closest reference.

    References the metric cannot score (e.g. all tokens out of vocabulary)
    are skipped.

    Raises:
        MetricError: empty reference set, or no reference could be scored
    """
    if not refs:
        raise MetricError("multi-reference scoring requires at least one reference")

    best: Optional[float] = None
    failures: List[str] = []
    for ref in refs:
        try:
            score = pair_score(metric, hyp, ref)
        except MetricError as e:
            failures.append(str(e))
            continue
        if best is None or score > best:
            best = score

    if best is None:
        raise MetricError(f"{metric.name}: no usable reference ({failures[0]})")
    return best


def _try_score(scorer: Callable[[], float], metric: MetricId, context_id: str) -> Optional[float]:
    try:
        return scorer()
    except MetricError as e:
        logger.debug(f"{metric.name} undefined for context {context_id!r}: {e}")
        return None


def _aggregate(rows: Sequence[QualityRow]) -> List[QualityAggregate]:
    if not rows:
        return []

    frame = pd.DataFrame(
        [(row.model_id, row.metric, row.score) for row in rows],
        columns=["model_id", "metric", "score"],
    )
    frame["score"] = frame["score"].astype(float)
    grouped = frame.groupby(["model_id", "metric"], sort=False)["score"].agg(["mean", "count"])

    return [
        QualityAggregate(
            model_id=model_id,
            metric=metric,
            mean=None if pd.isna(values["mean"]) else float(values["mean"]),
            contexts=int(values["count"]),
        )
        for (model_id, metric), values in grouped.iterrows()
    ]


def corpus_quality(
    dataset: Sequence[MultiRefRecord],
    hyps: Sequence[HypothesisRecord],
    metrics: Sequence[MetricId],
    mode: ScoringMode = ScoringMode.MULTI,
    references: Optional[ReferenceSelector] = None,
) -> QualityReport:
    """
    Score every model's first hypothesis per context.

    Args:
        dataset: Multi-reference records
        hyps: Hypothesis records; only contexts present in ``dataset`` are scored
        metrics: Metrics to compute
        mode: Selects ``single`` or ``multi`` as the headline score
        references: Optional reference-set selector for the multi score
            (defaults to every reference of the record)

    Returns:
        QualityReport with rows in hypothesis-file order, metrics in the
        given order within each row group

    Raises:
        InputValidationError: no hypothesis context is present in the dataset
    """
    mode = ScoringMode(mode)
    by_context = index_by_context(dataset)
    scored = [record for record in hyps if record.context_id in by_context]
    if not scored:
        raise InputValidationError("no hypothesis context is present in the dataset")

    select = references or (lambda record: record.all_refs)

    rows: List[QualityRow] = []
    for record in scored:
        reference_record = by_context[record.context_id]
        hyp = record.hypotheses[0]
        refs = select(reference_record)
        for metric in metrics:
            single = _try_score(
                lambda: pair_score(metric, hyp, reference_record.original_ref),
                metric,
                record.context_id,
            )
            multi = _try_score(lambda: multi_ref_score(metric, hyp, refs), metric, record.context_id)
            rows.append(
                QualityRow(
                    context_id=record.context_id,
                    model_id=record.model_id,
                    hypothesis_index=0,
                    metric=metric.name,
                    single=single,
                    multi=multi,
                    score=single if mode == ScoringMode.SINGLE else multi,
                )
            )

    missing = sum(1 for row in rows if row.score is None)
    logger.info(
        f"Scored {len(scored)} hypotheses with {len(metrics)} metrics ({mode.value} mode, "
        f"{missing} missing)"
    )
    return QualityReport(
        mode=mode,
        metrics=metric_names(metrics),
        per_utterance=rows,
        aggregates=_aggregate(rows),
    )
