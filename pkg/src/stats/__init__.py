"""
Statistics Module

Correlation, inter-rater agreement, metric/human correlation pipelines and
the reference-count ablation.
"""

from src.stats.ablation import (
    AblationCurve,
    AblationPoint,
    AblationPolicy,
    reference_ablation,
    select_references,
)
from src.stats.agreement import (
    KappaResult,
    KappaWeights,
    filter_raters,
    retain_ratings,
    weighted_kappa,
)
from src.stats.analysis import (
    CorrelationLevel,
    DiversityCorrelation,
    ModeComparisonEntry,
    ScatterPoint,
    SystemCorrelation,
    diversity_correlation,
    human_means,
    mode_comparison,
    system_correlation,
    utterance_correlation,
)
from src.stats.correlation import (
    CorrelationResult,
    MetricCorrelation,
    fractional_ranks,
    pearson,
    spearman,
    student_t_cdf,
    two_sided_p_value,
)

__all__ = [
    "AblationCurve",
    "AblationPoint",
    "AblationPolicy",
    "CorrelationLevel",
    "CorrelationResult",
    "DiversityCorrelation",
    "KappaResult",
    "KappaWeights",
    "MetricCorrelation",
    "ModeComparisonEntry",
    "ScatterPoint",
    "SystemCorrelation",
    "diversity_correlation",
    "filter_raters",
    "fractional_ranks",
    "human_means",
    "mode_comparison",
    "pearson",
    "reference_ablation",
    "retain_ratings",
    "select_references",
    "spearman",
    "student_t_cdf",
    "system_correlation",
    "two_sided_p_value",
    "utterance_correlation",
    "weighted_kappa",
]
