"""
Dataset statistics: unique n-grams of original versus multi-reference sets
"""

from typing import Iterable, Sequence, Set

import numpy as np

from src.corpus.models import MultiRefRecord, NgramOrderStats, NgramStats, Utterance
from src.corpus.text import Ngram, ngrams
from src.errors import InputValidationError

NGRAM_ORDERS = (1, 2, 3)


def unique_ngrams(utterances: Iterable[Utterance], n: int) -> Set[Ngram]:
    unique: Set[Ngram] = set()
    for utterance in utterances:
        unique.update(ngrams(utterance.tokens, n))
    return unique


def dataset_stats(
    records: Sequence[MultiRefRecord], orders: Sequence[int] = NGRAM_ORDERS
) -> NgramStats:
    """
    Mean number of unique n-grams per reference set.

    For every record the unique n-grams of the original reference alone and
    of the full reference set are counted; both counts are averaged over
    records.
    """
    if not records:
        raise InputValidationError("dataset_stats requires at least one record")

    per_order = {}
    for n in orders:
        original = [len(unique_ngrams([record.original_ref], n)) for record in records]
        multi = [len(unique_ngrams(record.all_refs, n)) for record in records]
        per_order[n] = NgramOrderStats(
            original=float(np.mean(original)), multi=float(np.mean(multi))
        )

    return NgramStats(
        records=len(records),
        mean_references=float(np.mean([len(record.all_refs) for record in records])),
        orders=per_order,
    )
