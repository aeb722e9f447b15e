"""
Corpus Module

Data model, JSONL ingestion, tokenization and dataset statistics
"""

from src.corpus.loaders import (
    dump_dataset,
    index_by_context,
    load_dataset,
    load_hypotheses,
    load_ratings,
)
from src.corpus.models import (
    Context,
    HypothesisRecord,
    MultiRefRecord,
    NgramOrderStats,
    NgramStats,
    RatingKind,
    RatingRecord,
    TokenizerMode,
    Utterance,
)
from src.corpus.statistics import dataset_stats
from src.corpus.text import ngrams, tokenize

__all__ = [
    "Context",
    "HypothesisRecord",
    "MultiRefRecord",
    "NgramOrderStats",
    "NgramStats",
    "RatingKind",
    "RatingRecord",
    "TokenizerMode",
    "Utterance",
    "dataset_stats",
    "dump_dataset",
    "index_by_context",
    "load_dataset",
    "load_hypotheses",
    "load_ratings",
    "ngrams",
    "tokenize",
]
