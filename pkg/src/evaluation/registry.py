"""
Metric Registry

Maps metric names to the pairwise scoring functions of ``src.metrics`` and
checks that every metric has the resources (embedding tables, sentence
vectors) it needs before any scoring starts.
"""

from enum import Enum
from typing import Iterable, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict

from src.corpus.models import Utterance
from src.errors import ConfigurationError
from src.metrics.embedding import (
    EmbeddingTable,
    SentenceEmbeddingProvider,
    SentenceVectorKind,
    embedding_metric,
    greedy_matching,
    sentence_embedding_cosine,
)
from src.metrics.overlap import meteor, rouge_l, sentence_bleu
from src.metrics.params import BleuParams, MeteorParams, RougeParams


class MetricFamily(str, Enum):
    """Supported pairwise metrics d(hyp, ref)."""
    BLEU1 = "bleu1"
    BLEU2 = "bleu2"
    BLEU3 = "bleu3"
    BLEU4 = "bleu4"
    METEOR = "meteor"
    ROUGE_L = "rouge_l"
    EMB_AVERAGE = "emb_average"
    VECTOR_EXTREMA = "vector_extrema"
    GREEDY_MATCHING = "greedy_matching"
    SENT_EMBEDDING = "sent_embedding"


BLEU_ORDERS = {
    MetricFamily.BLEU1: 1,
    MetricFamily.BLEU2: 2,
    MetricFamily.BLEU3: 3,
    MetricFamily.BLEU4: 4,
}

WORD_EMBEDDING_FAMILIES = frozenset(
    {MetricFamily.EMB_AVERAGE, MetricFamily.VECTOR_EXTREMA, MetricFamily.GREEDY_MATCHING}
)

# Scores in [-1, 1]; clamped at 0 wherever a [0, 1] score is required
COSINE_FAMILIES = WORD_EMBEDDING_FAMILIES | {MetricFamily.SENT_EMBEDDING}


class MetricResources(BaseModel):
    """Loaded tables and metric parameters shared by every metric of a run."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    embeddings: Optional[EmbeddingTable] = None
    sentence_embeddings: Optional[SentenceEmbeddingProvider] = None
    bleu: BleuParams = BleuParams()
    meteor: MeteorParams = MeteorParams()
    rouge: RougeParams = RougeParams()


class MetricId(BaseModel):
    """A metric family bound to the resources it scores with."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: MetricFamily
    resources: MetricResources = MetricResources()

    @property
    def name(self) -> str:
        return self.family.value

    @property
    def is_cosine(self) -> bool:
        return self.family in COSINE_FAMILIES

    @classmethod
    def build(
        cls, family: Union[MetricFamily, str], resources: MetricResources = MetricResources()
    ) -> "MetricId":
        """
        Resolve a metric name and check its resources.

        Raises:
            ConfigurationError: unknown name, or an embedding metric without
                the table/provider it needs
        """
        try:
            family = MetricFamily(family)
        except ValueError:
            known = ", ".join(member.value for member in MetricFamily)
            raise ConfigurationError(f"unknown metric {family!r} (expected one of: {known})")

        if family in WORD_EMBEDDING_FAMILIES and resources.embeddings is None:
            raise ConfigurationError(f"metric {family.value!r} requires a word embedding table")
        if family == MetricFamily.SENT_EMBEDDING and resources.sentence_embeddings is None:
            raise ConfigurationError(f"metric {family.value!r} requires sentence embeddings")

        return cls(family=family, resources=resources)

    def __str__(self) -> str:
        return self.name


def parse_metrics(
    names: Union[str, Iterable[str]], resources: MetricResources = MetricResources()
) -> List[MetricId]:
    """Parse a comma-separated list (or iterable) of metric names, keeping order, dropping repeats."""
    if isinstance(names, str):
        names = names.split(",")

    metrics: List[MetricId] = []
    seen = set()
    for raw in names:
        name = raw.strip()
        if not name:
            continue
        metric = MetricId.build(name, resources)
        if metric.family not in seen:
            seen.add(metric.family)
            metrics.append(metric)

    if not metrics:
        raise ConfigurationError("at least one metric is required")
    return metrics


def pair_score(metric: MetricId, hyp: Utterance, ref: Utterance) -> float:
    """
    Score one hypothesis against one reference.

    Raises:
        MetricError: the metric is undefined for this pair
    """
    family = metric.family
    resources = metric.resources

    if family in BLEU_ORDERS:
        params = BleuParams(max_n=BLEU_ORDERS[family], epsilon=resources.bleu.epsilon)
        return sentence_bleu(hyp.tokens, [ref.tokens], params)
    if family == MetricFamily.METEOR:
        return meteor(hyp.tokens, ref.tokens, resources.meteor)
    if family == MetricFamily.ROUGE_L:
        return rouge_l(hyp.tokens, ref.tokens, resources.rouge)
    if family == MetricFamily.EMB_AVERAGE:
        return embedding_metric(hyp.tokens, ref.tokens, resources.embeddings, SentenceVectorKind.AVERAGE)
    if family == MetricFamily.VECTOR_EXTREMA:
        return embedding_metric(hyp.tokens, ref.tokens, resources.embeddings, SentenceVectorKind.EXTREMA)
    if family == MetricFamily.GREEDY_MATCHING:
        return greedy_matching(hyp.tokens, ref.tokens, resources.embeddings)
    return sentence_embedding_cosine(hyp.raw, ref.raw, resources.sentence_embeddings)


def normalized_pair_score(metric: MetricId, hyp: Utterance, ref: Utterance) -> float:
    """Pair score mapped into [0, 1]; cosine metrics are clamped at 0."""
    score = pair_score(metric, hyp, ref)
    return max(score, 0.0) if metric.is_cosine else score


def metric_names(metrics: Sequence[MetricId]) -> List[str]:
    return [metric.name for metric in metrics]
