"""
Metric parameter models
"""

from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import (
    DEFAULT_BLEU_EPSILON,
    DEFAULT_BLEU_MAX_N,
    DEFAULT_METEOR_ALPHA,
    DEFAULT_METEOR_BETA,
    DEFAULT_METEOR_GAMMA,
    DEFAULT_ROUGE_BETA,
)


class MeteorStage(str, Enum):
    """Alignment stages, applied in order."""
    EXACT = "exact"
    STEM = "stem"


class BleuParams(BaseModel):
    """Sentence BLEU: maximum n-gram order and zero-count smoothing constant."""

    model_config = ConfigDict(frozen=True)

    max_n: int = Field(default=DEFAULT_BLEU_MAX_N, ge=1, le=4)
    epsilon: float = Field(default=DEFAULT_BLEU_EPSILON, gt=0)


class MeteorParams(BaseModel):
    """METEOR F-mean weight, fragmentation penalty shape, and alignment stages."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(default=DEFAULT_METEOR_ALPHA, gt=0, lt=1)
    beta: float = Field(default=DEFAULT_METEOR_BETA, gt=0)
    gamma: float = Field(default=DEFAULT_METEOR_GAMMA, ge=0, le=1)
    stages: Tuple[MeteorStage, ...] = (MeteorStage.EXACT, MeteorStage.STEM)

    @field_validator("stages")
    @classmethod
    def _check_stages(cls, stages: Tuple[MeteorStage, ...]) -> Tuple[MeteorStage, ...]:
        if not stages:
            raise ValueError("at least one METEOR stage is required")
        if len(set(stages)) != len(stages):
            raise ValueError("METEOR stages must not repeat")
        return stages


class RougeParams(BaseModel):
    """ROUGE-L F-measure recall weight."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(default=DEFAULT_ROUGE_BETA, gt=0)
