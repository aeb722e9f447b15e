"""
Evaluation Module

Metric registry, single/multi-reference quality scoring and diversity
measures over a loaded corpus.
"""

from src.evaluation.diversity import (
    DistinctDenominator,
    DiversityReport,
    DiversityRow,
    ModelDiversity,
    ReferenceSetDiversity,
    corpus_diversity,
    distinct_n,
    gt_bleu,
    recall_diversity,
    reference_set_diversity,
    self_bleu,
)
from src.evaluation.quality import (
    QualityAggregate,
    QualityReport,
    QualityRow,
    ScoringMode,
    corpus_quality,
    multi_ref_score,
)
from src.evaluation.registry import (
    MetricFamily,
    MetricId,
    MetricResources,
    normalized_pair_score,
    pair_score,
    parse_metrics,
)

__all__ = [
    "DistinctDenominator",
    "DiversityReport",
    "DiversityRow",
    "MetricFamily",
    "MetricId",
    "MetricResources",
    "ModelDiversity",
    "QualityAggregate",
    "QualityReport",
    "QualityRow",
    "ReferenceSetDiversity",
    "ScoringMode",
    "corpus_diversity",
    "corpus_quality",
    "distinct_n",
    "gt_bleu",
    "multi_ref_score",
    "normalized_pair_score",
    "pair_score",
    "parse_metrics",
    "recall_diversity",
    "reference_set_diversity",
    "self_bleu",
]
