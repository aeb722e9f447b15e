"""
Tokenization and n-gram extraction
"""

import string
from collections import Counter
from typing import List, Sequence, Tuple

from nltk.util import ngrams as _nltk_ngrams

from src.corpus.models import TokenizerMode
from src.errors import ConfigurationError

Ngram = Tuple[str, ...]

_PUNCTUATION = frozenset(string.punctuation)


def _split_punctuation(chunk: str) -> List[str]:
    start, end = 0, len(chunk)
    while start < end and chunk[start] in _PUNCTUATION:
        start += 1
    while end > start and chunk[end - 1] in _PUNCTUATION:
        end -= 1

    tokens = list(chunk[:start])
    if start < end:
        tokens.append(chunk[start:end])
    tokens.extend(chunk[end:])
    return tokens


def tokenize(text: str, mode: TokenizerMode = TokenizerMode.PRETOKENIZED) -> List[str]:
    """
    Lowercase and split text into tokens.

    Args:
        text: Raw utterance text
        mode: ``pretokenized`` splits on whitespace only; ``rule_based`` also
            peels leading/trailing ASCII punctuation into single-character tokens

    Returns:
        List of lowercase tokens (empty for empty or all-whitespace input)
    """
    chunks = text.lower().split()
    if TokenizerMode(mode) == TokenizerMode.PRETOKENIZED:
        return chunks

    tokens: List[str] = []
    for chunk in chunks:
        tokens.extend(_split_punctuation(chunk))
    return tokens


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    """
    Count the n-grams of a token sequence.

    Returns:
        Counter mapping n-gram tuples to occurrence counts; holds exactly
        max(0, len(tokens) - n + 1) occurrences in total
    """
    if n < 1:
        raise ConfigurationError(f"n-gram order must be >= 1, got {n}")
    return Counter(_nltk_ngrams(tokens, n))
