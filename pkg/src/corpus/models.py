"""
Pydantic Models for the Multi-Reference Corpus

Defines the immutable record types shared by every module: utterances,
dialogue contexts, multi-reference records, model hypotheses, and human
ratings.
"""

from enum import Enum
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


# ============================================================================
# ENUMS
# ============================================================================

class TokenizerMode(str, Enum):
    """How raw text becomes tokens."""
    PRETOKENIZED = "pretokenized"
    RULE_BASED = "rule_based"


class RatingKind(str, Enum):
    """Human judgment types."""
    APPROPRIATENESS = "appropriateness"
    DIVERSITY = "diversity"


APPROPRIATENESS_MIN = 1
APPROPRIATENESS_MAX = 5


# ============================================================================
# TEXT
# ============================================================================

class Utterance(BaseModel):
    """A single turn or response: raw text plus its lowercase tokens."""

    model_config = ConfigDict(frozen=True)

    raw: str
    tokens: Tuple[str, ...]

    @model_validator(mode="after")
    def _check_tokens(self) -> "Utterance":
        if not self.tokens and self.raw.strip():
            raise ValueError(f"utterance {self.raw!r} produced no tokens")
        if any(token != token.lower() or not token or token.split() != [token]
               for token in self.tokens):
            raise ValueError(f"tokens of {self.raw!r} must be lowercase and whitespace-free")
        return self

    @classmethod
    def from_text(cls, raw: str, mode: TokenizerMode = TokenizerMode.PRETOKENIZED) -> "Utterance":
        from src.corpus.text import tokenize

        return cls(raw=raw, tokens=tuple(tokenize(raw, mode)))

    def __len__(self) -> int:
        return len(self.tokens)


class Context(BaseModel):
    """Dialogue history a response must follow."""

    model_config = ConfigDict(frozen=True)

    context_id: str = Field(..., min_length=1)
    turns: Tuple[Utterance, ...] = Field(..., min_length=1)


# ============================================================================
# RECORDS
# ============================================================================

class MultiRefRecord(BaseModel):
    """A context with its original reference and the collected references."""

    model_config = ConfigDict(frozen=True)

    context: Context
    original_ref: Utterance
    collected_refs: Tuple[Utterance, ...] = ()

    @model_validator(mode="after")
    def _check_references(self) -> "MultiRefRecord":
        for position, ref in enumerate(self.all_refs):
            if not ref.tokens:
                label = "original reference" if position == 0 else f"reference #{position}"
                raise ValueError(f"{label} of context {self.context_id!r} is empty")
        return self

    @property
    def context_id(self) -> str:
        return self.context.context_id

    @property
    def all_refs(self) -> Tuple[Utterance, ...]:
        return (self.original_ref,) + tuple(self.collected_refs)


class HypothesisRecord(BaseModel):
    """Model-attributed candidate responses for one context."""

    model_config = ConfigDict(frozen=True)

    context_id: str = Field(..., min_length=1)
    model_id: str = Field(..., min_length=1)
    hypotheses: Tuple[Utterance, ...] = Field(..., min_length=1)


class RatingRecord(BaseModel):
    """One rater's judgment of one (context, model) pair."""

    model_config = ConfigDict(frozen=True)

    context_id: str = Field(..., min_length=1)
    model_id: str = Field(..., min_length=1)
    rater_id: str = Field(..., min_length=1)
    kind: RatingKind
    value: int
    appropriate_flags: Optional[Tuple[bool, ...]] = None

    @model_validator(mode="after")
    def _check_value(self) -> "RatingRecord":
        if self.kind == RatingKind.APPROPRIATENESS:
            if not APPROPRIATENESS_MIN <= self.value <= APPROPRIATENESS_MAX:
                raise ValueError(
                    f"appropriateness must be in [{APPROPRIATENESS_MIN},{APPROPRIATENESS_MAX}], "
                    f"got {self.value}"
                )
            if self.appropriate_flags is not None:
                raise ValueError("appropriate_flags are only allowed on diversity ratings")
            return self

        if self.value < 0:
            raise ValueError(f"diversity must be non-negative, got {self.value}")
        if self.appropriate_flags is not None:
            flagged = sum(self.appropriate_flags)
            if self.value > flagged:
                raise ValueError(
                    f"diversity {self.value} exceeds the {flagged} responses flagged appropriate"
                )
        return self

    @property
    def item(self) -> Tuple[str, str]:
        return (self.context_id, self.model_id)


# ============================================================================
# STATISTICS
# ============================================================================

class NgramOrderStats(BaseModel):
    """Mean unique n-grams per reference set for one order n."""

    model_config = ConfigDict(frozen=True)

    original: float
    multi: float


class NgramStats(BaseModel):
    """Unique n-gram counts of original versus multi-reference sets."""

    model_config = ConfigDict(frozen=True)

    records: int
    mean_references: float
    orders: Dict[int, NgramOrderStats]
