"""
Metrics Module

Pairwise similarity metrics d(hyp, ref): word overlap (BLEU, METEOR,
ROUGE-L) and embedding similarity (average, extrema, greedy, sentence
vectors).
"""

from src.metrics.embedding import (
    EmbeddingTable,
    SentenceEmbeddingProvider,
    SentenceVectorKind,
    cosine,
    embedding_metric,
    greedy_matching,
    load_embeddings,
    load_sentence_embeddings,
    sentence_embedding_cosine,
    sentence_vector,
)
from src.metrics.overlap import (
    count_chunks,
    lcs_length,
    meteor,
    meteor_alignment,
    modified_precision,
    rouge_l,
    sentence_bleu,
)
from src.metrics.params import BleuParams, MeteorParams, MeteorStage, RougeParams
from src.metrics.stemming import porter_stem

__all__ = [
    "BleuParams",
    "EmbeddingTable",
    "MeteorParams",
    "MeteorStage",
    "RougeParams",
    "SentenceEmbeddingProvider",
    "SentenceVectorKind",
    "cosine",
    "count_chunks",
    "embedding_metric",
    "greedy_matching",
    "lcs_length",
    "load_embeddings",
    "load_sentence_embeddings",
    "meteor",
    "meteor_alignment",
    "modified_precision",
    "porter_stem",
    "rouge_l",
    "sentence_bleu",
    "sentence_embedding_cosine",
    "sentence_vector",
]
