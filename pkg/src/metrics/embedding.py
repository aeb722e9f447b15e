"""
Embedding-Based Similarity Metrics

Word-vector metrics (Embedding Average, Vector Extrema, Greedy Matching) on
top of a gensim KeyedVectors table, and cosine scoring of externally
precomputed sentence embeddings (Skip-Thought, GenSen, ...).
"""

import re
from enum import Enum
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.corpus.loaders import read_lines
from src.errors import InputValidationError, MetricError
from src.utils.logger import logger

PathLike = Union[str, Path]
Tokens = Sequence[str]

_GENSIM_LINE = re.compile(r"line (\d+)")


class SentenceVectorKind(str, Enum):
    """How token vectors are pooled into a sentence vector."""
    AVERAGE = "average"
    EXTREMA = "extrema"


# ============================================================================
# TABLES
# ============================================================================

class EmbeddingTable:
    """Read-only token -> vector table with a fixed dimension."""

    def __init__(self, vectors):
        """
        Args:
            vectors: gensim ``KeyedVectors`` holding the table
        """
        self._vectors = vectors

    @classmethod
    def from_mapping(cls, entries: Mapping[str, Sequence[float]]) -> "EmbeddingTable":
        """Build a table from an in-memory token -> vector mapping."""
        from gensim.models import KeyedVectors

        if not entries:
            raise InputValidationError("embedding table must contain at least one vector")

        keys = list(entries)
        weights = np.asarray([entries[key] for key in keys], dtype=np.float64)
        if weights.ndim != 2:
            raise InputValidationError("every embedding vector must have the same dimension")

        vectors = KeyedVectors(vector_size=weights.shape[1], dtype=np.float64)
        vectors.add_vectors(keys, weights)
        return cls(vectors)

    @property
    def dimension(self) -> int:
        return int(self._vectors.vector_size)

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, token: str) -> bool:
        return token in self._vectors.key_to_index

    def vector(self, token: str) -> np.ndarray:
        vector = np.array(self._vectors.get_vector(token), dtype=np.float64)
        vector.setflags(write=False)
        return vector

    def lookup(self, tokens: Tokens) -> np.ndarray:
        """Stack the vectors of in-vocabulary tokens; raise when none are known."""
        known = [token for token in tokens if token in self]
        if not known:
            raise MetricError(
                f"all tokens are out of vocabulary: {' '.join(tokens) or '<empty>'}"
            )
        return np.vstack([self._vectors.get_vector(token) for token in known]).astype(np.float64)


def _first_vector_line(path: Path) -> Optional[List[str]]:
    for _, line in read_lines(path):
        if line.strip():
            return line.split()
    return None


def load_embeddings(path: PathLike) -> EmbeddingTable:
    """
    Load word vectors in word2vec text format.

    An optional ``count dim`` header line is detected; otherwise the
    dimension is inferred from the first vector line. Duplicate tokens keep
    their first vector.
    """
    from gensim.models import KeyedVectors

    path = Path(path)
    first = _first_vector_line(path)
    if first is None:
        raise InputValidationError("embedding file is empty", path=path)

    has_header = len(first) == 2 and all(part.isdigit() for part in first)
    offset = 2 if has_header else 1

    try:
        vectors = KeyedVectors.load_word2vec_format(
            str(path), binary=False, no_header=not has_header, datatype=np.float64
        )
    except UnicodeDecodeError as e:
        raise InputValidationError(f"invalid UTF-8 at byte {e.start}", path=path) from e
    except ValueError as e:
        match = _GENSIM_LINE.search(str(e))
        if match:
            line = int(match.group(1)) + offset
            raise InputValidationError(
                "vector has a different dimension than the table", path=path, line=line
            ) from e
        raise InputValidationError(f"non-numeric vector component ({e})", path=path) from e
    except EOFError as e:
        raise InputValidationError(f"truncated embedding file ({e})", path=path) from e

    if len(vectors) == 0:
        raise InputValidationError("embedding file holds no vectors", path=path)

    logger.info(f"Loaded {len(vectors)} embeddings of dimension {vectors.vector_size} from {path}")
    return EmbeddingTable(vectors)


class _SentenceVectorLine(BaseModel):
    model_config = ConfigDict(extra="forbid")

    text: str
    vector: List[float] = Field(..., min_length=1)


class SentenceEmbeddingProvider:
    """Exact raw-text -> precomputed sentence vector lookup."""

    def __init__(self, entries: Mapping[str, Sequence[float]]):
        if not entries:
            raise InputValidationError("sentence embedding table must not be empty")
        dimensions = {len(vector) for vector in entries.values()}
        if len(dimensions) != 1:
            raise InputValidationError(
                f"sentence vectors have mixed dimensions: {sorted(dimensions)}"
            )
        self._dimension = dimensions.pop()
        self._entries: Dict[str, np.ndarray] = {}
        for text, vector in entries.items():
            array = np.asarray(vector, dtype=np.float64)
            array.setflags(write=False)
            self._entries[text] = array

    @property
    def dimension(self) -> int:
        return self._dimension

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, text: str) -> bool:
        return text in self._entries

    def vector(self, text: str) -> np.ndarray:
        try:
            return self._entries[text]
        except KeyError:
            raise MetricError(f"no sentence embedding for text {text!r}") from None


def load_sentence_embeddings(path: PathLike) -> SentenceEmbeddingProvider:
    """Load ``{"text", "vector"}`` JSONL sentence embeddings (first occurrence wins)."""
    path = Path(path)
    entries: Dict[str, List[float]] = {}
    dimension: Optional[int] = None

    for line_no, raw in read_lines(path):
        if not raw.strip():
            continue
        try:
            line = _SentenceVectorLine.model_validate_json(raw)
        except ValidationError as e:
            raise InputValidationError(
                f"invalid sentence embedding line: {e.errors()[0]['msg']}",
                path=path,
                line=line_no,
            )
        if dimension is None:
            dimension = len(line.vector)
        elif len(line.vector) != dimension:
            raise InputValidationError(
                f"vector has {len(line.vector)} components, expected {dimension}",
                path=path,
                line=line_no,
            )
        entries.setdefault(line.text, line.vector)

    if not entries:
        raise InputValidationError("sentence embedding file is empty", path=path)

    logger.info(f"Loaded {len(entries)} sentence embeddings from {path}")
    return SentenceEmbeddingProvider(entries)


# ============================================================================
# SCORING
# ============================================================================

def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; 0 when either vector has zero norm."""
    norm = float(np.linalg.norm(u) * np.linalg.norm(v))
    if norm == 0.0:
        return 0.0
    return float(np.clip(np.dot(u, v) / norm, -1.0, 1.0))


def sentence_vector(
    tokens: Tokens, table: EmbeddingTable, kind: SentenceVectorKind = SentenceVectorKind.AVERAGE
) -> np.ndarray:
    """
    Pool in-vocabulary token vectors into a sentence vector.

    average: componentwise mean. extrema: per dimension the value with the
    largest magnitude, the positive one on a +v / -v tie.
    """
    matrix = table.lookup(tokens)
    if SentenceVectorKind(kind) == SentenceVectorKind.AVERAGE:
        return matrix.mean(axis=0)

    highest = matrix.max(axis=0)
    lowest = matrix.min(axis=0)
    return np.where(np.abs(lowest) > np.abs(highest), lowest, highest)


def embedding_metric(
    hyp: Tokens, ref: Tokens, table: EmbeddingTable, kind: SentenceVectorKind
) -> float:
    """Cosine of the pooled hypothesis and reference vectors."""
    return cosine(sentence_vector(hyp, table, kind), sentence_vector(ref, table, kind))


def _directed_greedy(source: np.ndarray, target: np.ndarray) -> float:
    def normalize(matrix: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)

    similarities = np.clip(normalize(source) @ normalize(target).T, -1.0, 1.0)
    return float(similarities.max(axis=1).mean())


def greedy_matching(hyp: Tokens, ref: Tokens, table: EmbeddingTable) -> float:
    """
    Greedy Matching: each token is matched to its most similar token of the
    other sentence; the two directed means are averaged.
    """
    hyp_vectors = table.lookup(hyp)
    ref_vectors = table.lookup(ref)
    return (_directed_greedy(hyp_vectors, ref_vectors) + _directed_greedy(ref_vectors, hyp_vectors)) / 2


def sentence_embedding_cosine(
    hyp_text: str, ref_text: str, provider: SentenceEmbeddingProvider
) -> float:
    """Cosine of two precomputed sentence embeddings, looked up by exact text."""
    return cosine(provider.vector(hyp_text), provider.vector(ref_text))
