"""
JSONL Ingestion and Validation

Reads the three input files (multi-reference dataset, model hypotheses,
human ratings). Validation is fail-fast: the first invalid line raises an
InputValidationError naming the file and line, and nothing is returned.
"""

import json
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, StrictBool, StrictInt, ValidationError

from src.corpus.models import (
    Context,
    HypothesisRecord,
    MultiRefRecord,
    RatingKind,
    RatingRecord,
    TokenizerMode,
    Utterance,
)
from src.errors import InputValidationError
from src.utils.logger import logger

PathLike = Union[str, Path]
LineModel = TypeVar("LineModel", bound=BaseModel)


# ============================================================================
# LINE SCHEMAS
# ============================================================================

class DatasetLine(BaseModel):
    """One line of the multi-reference dataset file."""

    model_config = ConfigDict(extra="forbid")

    context_id: str = Field(..., min_length=1)
    context: List[str] = Field(..., min_length=1)
    reference: str
    multi_references: List[str] = Field(default_factory=list)


class HypothesisLine(BaseModel):
    """One line of a model hypotheses file."""

    model_config = ConfigDict(extra="forbid")

    context_id: str = Field(..., min_length=1)
    model_id: str = Field(..., min_length=1)
    hypotheses: List[str] = Field(..., min_length=1)


class RatingLine(BaseModel):
    """One line of a human ratings file."""

    model_config = ConfigDict(extra="forbid")

    context_id: str = Field(..., min_length=1)
    model_id: str = Field(..., min_length=1)
    rater_id: str = Field(..., min_length=1)
    kind: RatingKind
    value: StrictInt
    appropriate_flags: Optional[List[StrictBool]] = None


# ============================================================================
# HELPERS
# ============================================================================

def _describe(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    message = error.get("msg", "invalid value")
    if message.startswith("Value error, "):
        message = message[len("Value error, "):]
    return f"{location}: {message}" if location else message


def read_lines(path: PathLike) -> Iterator[Tuple[int, str]]:
    """Yield ``(line_no, text)`` for every line of a UTF-8 file, numbered from 1."""
    path = Path(path)
    try:
        handle = path.open("rb")
    except OSError as e:
        raise InputValidationError(f"cannot read file: {e.strerror or e}", path=path) from e

    with handle:
        for line_no, raw in enumerate(handle, start=1):
            try:
                text = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise InputValidationError(
                    f"invalid UTF-8 at byte {e.start}", path=path, line=line_no
                ) from e
            yield line_no, text


def _read_lines(path: PathLike, schema: Type[LineModel]) -> Iterator[Tuple[int, LineModel]]:
    path = Path(path)
    for line_no, line in read_lines(path):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as e:
            raise InputValidationError(f"malformed JSON: {e.msg}", path=path, line=line_no)
        if not isinstance(payload, dict):
            raise InputValidationError("expected a JSON object", path=path, line=line_no)
        try:
            yield line_no, schema.model_validate(payload)
        except ValidationError as e:
            raise InputValidationError(_describe(e), path=path, line=line_no)


def _build(path: Path, line_no: int, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValidationError as e:
        raise InputValidationError(_describe(e), path=path, line=line_no)


# ============================================================================
# DATASET
# ============================================================================

def load_dataset(
    path: PathLike, mode: TokenizerMode = TokenizerMode.PRETOKENIZED
) -> List[MultiRefRecord]:
    """
    Load a multi-reference dataset.

    Args:
        path: JSONL file, one ``{"context_id", "context", "reference",
            "multi_references"}`` object per line
        mode: Tokenizer mode applied to every utterance

    Returns:
        Records in file order
    """
    path = Path(path)
    records: List[MultiRefRecord] = []
    seen: Dict[str, int] = {}

    for line_no, line in _read_lines(path, DatasetLine):
        if line.context_id in seen:
            raise InputValidationError(
                f"duplicate context_id {line.context_id!r} (first seen on line "
                f"{seen[line.context_id]})",
                path=path,
                line=line_no,
            )
        seen[line.context_id] = line_no

        record = _build(
            path,
            line_no,
            MultiRefRecord,
            context=_build(
                path,
                line_no,
                Context,
                context_id=line.context_id,
                turns=tuple(Utterance.from_text(turn, mode) for turn in line.context),
            ),
            original_ref=Utterance.from_text(line.reference, mode),
            collected_refs=tuple(Utterance.from_text(ref, mode) for ref in line.multi_references),
        )
        records.append(record)

    if not records:
        raise InputValidationError("dataset is empty", path=path)

    logger.info(f"Loaded {len(records)} dataset records from {path}")
    return records


def dump_dataset(records: Sequence[MultiRefRecord], path: PathLike) -> None:
    """Write records back to the dataset JSONL schema."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            line = DatasetLine(
                context_id=record.context_id,
                context=[turn.raw for turn in record.context.turns],
                reference=record.original_ref.raw,
                multi_references=[ref.raw for ref in record.collected_refs],
            )
            handle.write(json.dumps(line.model_dump(), ensure_ascii=False) + "\n")


def index_by_context(records: Sequence[MultiRefRecord]) -> Dict[str, MultiRefRecord]:
    return {record.context_id: record for record in records}


# ============================================================================
# HYPOTHESES
# ============================================================================

def load_hypotheses(
    path: PathLike,
    dataset: Sequence[MultiRefRecord],
    mode: TokenizerMode = TokenizerMode.PRETOKENIZED,
) -> List[HypothesisRecord]:
    """
    Load model hypotheses and resolve them against a loaded dataset.

    Raises:
        InputValidationError: unknown context_id, empty hypotheses list, or a
            repeated (context_id, model_id) pair
    """
    path = Path(path)
    known: Set[str] = {record.context_id for record in dataset}
    seen: Dict[Tuple[str, str], int] = {}
    records: List[HypothesisRecord] = []

    for line_no, line in _read_lines(path, HypothesisLine):
        if line.context_id not in known:
            raise InputValidationError(
                f"unknown context_id {line.context_id!r}", path=path, line=line_no
            )
        key = (line.context_id, line.model_id)
        if key in seen:
            raise InputValidationError(
                f"duplicate hypotheses for context {line.context_id!r} and model "
                f"{line.model_id!r} (first seen on line {seen[key]})",
                path=path,
                line=line_no,
            )
        seen[key] = line_no

        records.append(
            _build(
                path,
                line_no,
                HypothesisRecord,
                context_id=line.context_id,
                model_id=line.model_id,
                hypotheses=tuple(Utterance.from_text(text, mode) for text in line.hypotheses),
            )
        )

    logger.info(f"Loaded {len(records)} hypothesis records from {path}")
    return records


# ============================================================================
# RATINGS
# ============================================================================

def load_ratings(
    path: PathLike, hypotheses: Optional[Sequence[HypothesisRecord]] = None
) -> List[RatingRecord]:
    """
    Load human ratings.

    Args:
        path: JSONL ratings file
        hypotheses: When given, diversity values and flag counts are also
            checked against the number of hypotheses of the rated pair

    Raises:
        InputValidationError: out-of-range value, diversity above the number
            of flagged responses, or a repeated (context, model, rater, kind)
    """
    path = Path(path)
    sizes = (
        {(record.context_id, record.model_id): len(record.hypotheses) for record in hypotheses}
        if hypotheses is not None
        else None
    )
    seen: Dict[Tuple[str, str, str, str], int] = {}
    records: List[RatingRecord] = []

    for line_no, line in _read_lines(path, RatingLine):
        key = (line.context_id, line.model_id, line.rater_id, line.kind.value)
        if key in seen:
            raise InputValidationError(
                f"duplicate {line.kind.value} rating by {line.rater_id!r} for "
                f"({line.context_id!r}, {line.model_id!r}) (first seen on line {seen[key]})",
                path=path,
                line=line_no,
            )
        seen[key] = line_no

        rating = _build(
            path,
            line_no,
            RatingRecord,
            context_id=line.context_id,
            model_id=line.model_id,
            rater_id=line.rater_id,
            kind=line.kind,
            value=line.value,
            appropriate_flags=(
                tuple(line.appropriate_flags) if line.appropriate_flags is not None else None
            ),
        )

        if sizes is not None and rating.kind == RatingKind.DIVERSITY:
            size = sizes.get(rating.item)
            if size is not None:
                if rating.value > size:
                    raise InputValidationError(
                        f"diversity {rating.value} exceeds the {size} hypotheses of "
                        f"({rating.context_id!r}, {rating.model_id!r})",
                        path=path,
                        line=line_no,
                    )
                flags = rating.appropriate_flags
                if flags is not None and len(flags) != size:
                    raise InputValidationError(
                        f"expected {size} appropriate_flags, got {len(flags)}",
                        path=path,
                        line=line_no,
                    )

        records.append(rating)

    logger.info(f"Loaded {len(records)} ratings from {path}")
    return records
