"""
Diversity Measures

Referenced diversity (recall of the reference set by a model's hypotheses)
and unreferenced diversity (Distinct-n, Self-BLEU), plus the Gt-BLEU and
diversity summaries of the collected reference sets themselves.
"""

from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.corpus.loaders import index_by_context
from src.corpus.models import HypothesisRecord, MultiRefRecord, Utterance
from src.corpus.text import ngrams
from src.errors import InputValidationError, MetricError
from src.evaluation.registry import MetricId, metric_names, normalized_pair_score
from src.metrics.overlap import sentence_bleu
from src.metrics.params import BleuParams
from src.utils.logger import logger

Tokens = Sequence[str]

DISTINCT_ORDERS = (1, 2, 3)


class DistinctDenominator(str, Enum):
    """What Distinct-n divides the distinct n-gram count by."""
    NGRAMS = "ngrams"
    TOKENS = "tokens"


# ============================================================================
# PRIMITIVES
# ============================================================================

def recall_diversity(
    metric: MetricId, hypotheses: Sequence[Utterance], references: Sequence[Utterance]
) -> float:
    """
    Mean over references of the best normalized score any hypothesis
    achieves against that reference.

    References no hypothesis can be scored against are left out of the mean.

    Raises:
        MetricError: empty hypotheses or references, or nothing could be scored
    """
    if not hypotheses:
        raise MetricError("recall requires at least one hypothesis")
    if not references:
        raise MetricError("recall requires at least one reference")

    best_per_reference: List[float] = []
    for ref in references:
        best: Optional[float] = None
        for hyp in hypotheses:
            try:
                score = normalized_pair_score(metric, hyp, ref)
            except MetricError:
                continue
            if best is None or score > best:
                best = score
        if best is not None:
            best_per_reference.append(best)

    if not best_per_reference:
        raise MetricError(f"{metric.name}: no (hypothesis, reference) pair could be scored")
    return float(np.mean(best_per_reference))


def distinct_n(
    responses: Sequence[Tokens],
    n: int,
    denominator: DistinctDenominator = DistinctDenominator.NGRAMS,
) -> float:
    """
    Distinct n-grams across all responses over the total n-gram (or token) count.

    Raises:
        MetricError: no responses, or nothing to divide by
    """
    if not responses:
        raise MetricError("distinct-n requires at least one response")

    distinct = set()
    occurrences = 0
    tokens = 0
    for response in responses:
        counts = ngrams(response, n)
        distinct.update(counts)
        occurrences += sum(counts.values())
        tokens += len(response)

    total = occurrences if DistinctDenominator(denominator) == DistinctDenominator.NGRAMS else tokens
    if total == 0:
        raise MetricError(f"distinct-{n} is undefined: no response has {n} or more tokens")
    return len(distinct) / total


def self_bleu(responses: Sequence[Tokens], params: BleuParams = BleuParams()) -> float:
    """
    Mean BLEU of each response against the remaining responses as references.

    Raises:
        MetricError: fewer than two responses, or an empty response
    """
    if len(responses) < 2:
        raise MetricError("self-BLEU requires at least two responses")

    scores = [
        sentence_bleu(response, list(responses[:i]) + list(responses[i + 1:]), params)
        for i, response in enumerate(responses)
    ]
    return float(np.mean(scores))


def gt_bleu(dataset: Sequence[MultiRefRecord], params: BleuParams = BleuParams()) -> Dict[int, float]:
    """
    BLEU-1..max_n of every collected reference against its original reference,
    averaged over all such pairs.

    Raises:
        InputValidationError: a record has no collected references
    """
    if not dataset:
        raise InputValidationError("Gt-BLEU requires at least one record")

    for record in dataset:
        if not record.collected_refs:
            raise InputValidationError(
                f"Gt-BLEU requires collected references; context {record.context_id!r} has none"
            )

    result: Dict[int, float] = {}
    for n in range(1, params.max_n + 1):
        order = BleuParams(max_n=n, epsilon=params.epsilon)
        scores = [
            sentence_bleu(ref.tokens, [record.original_ref.tokens], order)
            for record in dataset
            for ref in record.collected_refs
        ]
        result[n] = float(np.mean(scores))
    return result


def _mean_or_none(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [value for value in values if value is not None]
    return float(np.mean(present)) if present else None


def _try(scorer, *args, **kwargs) -> Optional[float]:
    try:
        return scorer(*args, **kwargs)
    except MetricError:
        return None


# ============================================================================
# CORPUS DIVERSITY
# ============================================================================

class DiversityRow(BaseModel):
    """Diversity of one model's hypothesis set for one context."""

    model_config = ConfigDict(frozen=True)

    context_id: str
    model_id: str
    references: int
    hypotheses: int
    recall: Dict[str, Optional[float]]
    distinct: Dict[int, Optional[float]]
    self_bleu: Dict[int, Optional[float]]


class ModelDiversity(BaseModel):
    """System-level diversity of one model."""

    model_config = ConfigDict(frozen=True)

    model_id: str
    contexts: int
    recall: Dict[str, Optional[float]]
    distinct: Dict[int, Optional[float]]
    self_bleu: Dict[int, Optional[float]]


class DiversityReport(BaseModel):
    """Per (context, model) rows and per-model summaries."""

    model_config = ConfigDict(frozen=True)

    metrics: List[str]
    denominator: DistinctDenominator
    per_context: List[DiversityRow]
    models: List[ModelDiversity]


def corpus_diversity(
    dataset: Sequence[MultiRefRecord],
    hyps: Sequence[HypothesisRecord],
    metrics: Sequence[MetricId],
    self_bleu_params: BleuParams = BleuParams(),
    denominator: DistinctDenominator = DistinctDenominator.NGRAMS,
    distinct_orders: Sequence[int] = DISTINCT_ORDERS,
) -> DiversityReport:
    """
    Referenced and unreferenced diversity of every model.

    Every hypothesis of a record is used. Distinct-n per model is computed
    once over all of that model's responses; Self-BLEU per model is the mean
    over contexts with at least two hypotheses.

    Raises:
        InputValidationError: no hypothesis context is present in the dataset
    """
    by_context = index_by_context(dataset)
    scored = [record for record in hyps if record.context_id in by_context]
    if not scored:
        raise InputValidationError("no hypothesis context is present in the dataset")

    self_bleu_orders = [
        BleuParams(max_n=n, epsilon=self_bleu_params.epsilon)
        for n in range(1, self_bleu_params.max_n + 1)
    ]

    rows: List[DiversityRow] = []
    responses_by_model: Dict[str, List[Tokens]] = {}
    for record in scored:
        refs = by_context[record.context_id].all_refs
        tokens = [hyp.tokens for hyp in record.hypotheses]
        responses_by_model.setdefault(record.model_id, []).extend(tokens)

        rows.append(
            DiversityRow(
                context_id=record.context_id,
                model_id=record.model_id,
                references=len(refs),
                hypotheses=len(tokens),
                recall={
                    metric.name: _try(recall_diversity, metric, record.hypotheses, refs)
                    for metric in metrics
                },
                distinct={n: _try(distinct_n, tokens, n, denominator) for n in distinct_orders},
                self_bleu={
                    params.max_n: _try(self_bleu, tokens, params) for params in self_bleu_orders
                },
            )
        )

    models: List[ModelDiversity] = []
    for model_id, responses in responses_by_model.items():
        model_rows = [row for row in rows if row.model_id == model_id]
        models.append(
            ModelDiversity(
                model_id=model_id,
                contexts=len(model_rows),
                recall={
                    metric.name: _mean_or_none([row.recall[metric.name] for row in model_rows])
                    for metric in metrics
                },
                distinct={
                    n: _try(distinct_n, responses, n, denominator) for n in distinct_orders
                },
                self_bleu={
                    params.max_n: _mean_or_none([row.self_bleu[params.max_n] for row in model_rows])
                    for params in self_bleu_orders
                },
            )
        )

    logger.info(f"Computed diversity for {len(rows)} (context, model) pairs, {len(models)} models")
    return DiversityReport(
        metrics=metric_names(metrics),
        denominator=DistinctDenominator(denominator),
        per_context=rows,
        models=models,
    )


# ============================================================================
# REFERENCE SETS
# ============================================================================

class ReferenceSetDiversity(BaseModel):
    """Lexical diversity of the collected references and their overlap with the original."""

    model_config = ConfigDict(frozen=True)

    contexts: int
    self_bleu: Dict[int, Optional[float]]
    distinct: Dict[int, Optional[float]]
    gt_bleu: Dict[int, float]


def reference_set_diversity(
    dataset: Sequence[MultiRefRecord],
    params: BleuParams = BleuParams(),
    distinct_orders: Sequence[int] = DISTINCT_ORDERS,
) -> ReferenceSetDiversity:
    """
    Per-context Self-BLEU and Distinct-n of the collected references,
    averaged over contexts, plus Gt-BLEU over records that have collected
    references.
    """
    collected = [record for record in dataset if record.collected_refs]
    sets = [[ref.tokens for ref in record.collected_refs] for record in collected]

    self_bleu_means = {
        n: _mean_or_none(
            [_try(self_bleu, refs, BleuParams(max_n=n, epsilon=params.epsilon)) for refs in sets]
        )
        for n in range(1, params.max_n + 1)
    }
    distinct_means = {
        n: _mean_or_none([_try(distinct_n, refs, n) for refs in sets]) for n in distinct_orders
    }

    return ReferenceSetDiversity(
        contexts=len(collected),
        self_bleu=self_bleu_means,
        distinct=distinct_means,
        gt_bleu=gt_bleu(collected, params) if collected else {},
    )
