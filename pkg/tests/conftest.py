"""
Pytest configuration and shared fixtures
"""

import json
import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.corpus.models import Context, MultiRefRecord, Utterance  # noqa: E402
from src.metrics.embedding import EmbeddingTable  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

CHECK_PLEASE_CONTEXT = "excuse me . check please ."
CHECK_PLEASE_REFERENCE = "ok , how was everything ?"
CHECK_PLEASE_COLLECTED = [
    "i 'll get it right away .",
    "here is the check .",
    "no problem , let me get your server .",
    "i 'll be right back with it .",
]
CHECK_PLEASE_HYPOTHESIS = "sure , i 'll grab it and be right with you ."


def utterance(text: str) -> Utterance:
    return Utterance.from_text(text)


def make_record(context_id: str, reference: str, collected=(), context=("hello ?",)) -> MultiRefRecord:
    return MultiRefRecord(
        context=Context(context_id=context_id, turns=tuple(utterance(turn) for turn in context)),
        original_ref=utterance(reference),
        collected_refs=tuple(utterance(ref) for ref in collected),
    )


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding the static JSONL fixtures"""
    return FIXTURES


@pytest.fixture
def check_please_record() -> MultiRefRecord:
    """The restaurant-check example with its original and four collected references"""
    return make_record(
        "check-please",
        CHECK_PLEASE_REFERENCE,
        CHECK_PLEASE_COLLECTED,
        context=(CHECK_PLEASE_CONTEXT,),
    )


@pytest.fixture
def check_please_hypothesis() -> Utterance:
    """Generated response of the restaurant-check example"""
    return utterance(CHECK_PLEASE_HYPOTHESIS)


@pytest.fixture
def unit_table() -> EmbeddingTable:
    """Two orthogonal unit vectors, their negation and a 3-4-5 vector"""
    return EmbeddingTable.from_mapping(
        {
            "a": [1.0, 0.0],
            "b": [0.0, 1.0],
            "c": [-1.0, 0.0],
            "d": [0.6, 0.8],
        }
    )


@pytest.fixture
def write_jsonl(tmp_path):
    """Write a list of objects (or raw strings) as a JSONL file under tmp_path"""

    def _write(name: str, rows) -> Path:
        path = tmp_path / name
        with path.open("w", encoding="utf-8") as handle:
            for row in rows:
                handle.write((row if isinstance(row, str) else json.dumps(row)) + "\n")
        return path

    return _write
