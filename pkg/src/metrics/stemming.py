"""
Porter stemming for the METEOR stem stage
"""

from functools import lru_cache

from nltk.stem.porter import PorterStemmer

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


@lru_cache(maxsize=65536)
def porter_stem(token: str) -> str:
    """
    Stem a lowercase token with the original Porter (1980) rules.

    Tokens that are not purely alphabetic (punctuation, numbers, contractions
    such as "'ll") are returned unchanged.
    """
    if not token.isascii() or not token.isalpha():
        return token
    return _stemmer.stem(token)
