"""
Tests for the corpus data model

Covers tokenization, n-gram counting, record invariants and dataset
statistics.
"""

import random

import pytest
from pydantic import ValidationError

from src.corpus import (
    Context,
    MultiRefRecord,
    RatingKind,
    RatingRecord,
    TokenizerMode,
    Utterance,
    dataset_stats,
    ngrams,
    tokenize,
)
from src.errors import ConfigurationError, InputValidationError
from tests.conftest import make_record


class TestTokenize:
    """Test whitespace and rule-based tokenization"""

    def test_pretokenized_splits_on_whitespace(self):
        """Test that pretokenized mode keeps punctuation tokens as given"""
        assert tokenize("i 'll be right back with it .") == [
            "i", "'ll", "be", "right", "back", "with", "it", ".",
        ]

    def test_rule_based_peels_punctuation(self):
        """Test that rule-based mode splits trailing punctuation"""
        assert tokenize("Check please.", TokenizerMode.RULE_BASED) == ["check", "please", "."]

    def test_rule_based_keeps_inner_punctuation(self):
        """Test that inner apostrophes survive rule-based splitting"""
        assert tokenize("(don't!)", TokenizerMode.RULE_BASED) == ["(", "don't", "!", ")"]

    def test_empty_input(self):
        """Test that empty and blank text produce no tokens"""
        assert tokenize("") == []
        assert tokenize("   \t ") == []

    def test_lowercases(self):
        """Test that tokens are lowercased"""
        assert tokenize("Hello World") == ["hello", "world"]

    def test_pretokenized_is_idempotent(self):
        """Test that re-tokenizing joined tokens is a no-op"""
        rng = random.Random(3)
        for _ in range(100):
            words = ["".join(rng.choice("ab.,'") for _ in range(rng.randint(1, 4)))
                     for _ in range(rng.randint(0, 8))]
            tokens = tokenize(" ".join(words))
            assert tokenize(" ".join(tokens)) == tokens


class TestNgrams:
    """Test n-gram counting"""

    def test_bigrams(self):
        """Test bigram counts of a short sequence"""
        assert ngrams(["a", "b", "a"], 2) == {("a", "b"): 1, ("b", "a"): 1}

    def test_unigrams(self):
        """Test unigram counts with repeats"""
        assert ngrams(["a", "b", "a"], 1) == {("a",): 2, ("b",): 1}

    def test_too_short(self):
        """Test that a sequence shorter than n has no n-grams"""
        assert ngrams(["a"], 2) == {}

    def test_zero_order_rejected(self):
        """Test that n = 0 is rejected"""
        with pytest.raises(ConfigurationError):
            ngrams(["a"], 0)

    def test_total_count_property(self):
        """Test that total occurrences equal max(0, len - n + 1)"""
        rng = random.Random(11)
        for _ in range(300):
            tokens = [rng.choice("abcd") for _ in range(rng.randint(0, 12))]
            n = rng.randint(1, 5)
            assert sum(ngrams(tokens, n).values()) == max(0, len(tokens) - n + 1)


class TestRecords:
    """Test record invariants"""

    def test_utterance_from_text(self):
        """Test that utterances keep raw text and derived tokens"""
        utterance = Utterance.from_text("Check please.", TokenizerMode.RULE_BASED)
        assert utterance.raw == "Check please."
        assert utterance.tokens == ("check", "please", ".")
        assert len(utterance) == 3

    def test_utterance_rejects_uppercase_tokens(self):
        """Test that tokens must be lowercase"""
        with pytest.raises(ValidationError):
            Utterance(raw="Hi", tokens=("Hi",))

    def test_utterance_rejects_missing_tokens(self):
        """Test that non-blank text must produce tokens"""
        with pytest.raises(ValidationError):
            Utterance(raw="hello", tokens=())

    def test_all_refs_starts_with_original(self):
        """Test that all_refs is the original followed by collected references"""
        record = make_record("c1", "a b", ["c d", "e f"])
        assert [ref.raw for ref in record.all_refs] == ["a b", "c d", "e f"]
        assert record.context_id == "c1"

    def test_empty_reference_rejected(self):
        """Test that an empty collected reference is rejected"""
        with pytest.raises(ValidationError, match="reference #1"):
            make_record("c1", "a b", [""])

    def test_context_requires_turns(self):
        """Test that a context needs at least one turn"""
        with pytest.raises(ValidationError):
            Context(context_id="c1", turns=())

    def test_records_are_immutable(self):
        """Test that records cannot be modified after construction"""
        record = make_record("c1", "a b")
        with pytest.raises(ValidationError):
            record.original_ref = Utterance.from_text("x")

    def test_appropriateness_range(self):
        """Test that appropriateness must lie in [1, 5]"""
        RatingRecord(context_id="c", model_id="m", rater_id="r",
                     kind=RatingKind.APPROPRIATENESS, value=5)
        with pytest.raises(ValidationError, match="appropriateness"):
            RatingRecord(context_id="c", model_id="m", rater_id="r",
                         kind=RatingKind.APPROPRIATENESS, value=6)

    def test_diversity_bounded_by_flags(self):
        """Test that diversity cannot exceed the responses flagged appropriate"""
        with pytest.raises(ValidationError, match="exceeds"):
            RatingRecord(context_id="c", model_id="m", rater_id="r", kind=RatingKind.DIVERSITY,
                         value=3, appropriate_flags=(True, True, False))

    def test_flags_only_on_diversity(self):
        """Test that appropriateness ratings cannot carry flags"""
        with pytest.raises(ValidationError):
            RatingRecord(context_id="c", model_id="m", rater_id="r",
                         kind=RatingKind.APPROPRIATENESS, value=3, appropriate_flags=(True,))


class TestDatasetStats:
    """Test unique n-gram statistics"""

    def test_mean_unique_unigrams(self):
        """Test the per-record unique unigram mean"""
        stats = dataset_stats([make_record("c1", "a b"), make_record("c2", "a c")])
        assert stats.orders[1].original == 2.0
        assert stats.orders[1].multi == 2.0
        assert stats.records == 2

    def test_duplicate_collected_refs_collapse(self):
        """Test that a collected copy of the original adds no n-grams"""
        stats = dataset_stats([make_record("c1", "a b c", ["a b c"])])
        for n in (1, 2, 3):
            assert stats.orders[n].original == stats.orders[n].multi

    def test_multi_dominates_original(self, check_please_record):
        """Test that the full reference set has at least as many n-grams"""
        stats = dataset_stats([check_please_record, make_record("c2", "x y", ["y z w"])])
        for n in (1, 2, 3):
            assert stats.orders[n].multi >= stats.orders[n].original
        assert stats.mean_references == 3.5

    def test_empty_dataset(self):
        """Test that statistics of an empty dataset are an error"""
        with pytest.raises(InputValidationError):
            dataset_stats([])

    def test_record_type(self, check_please_record):
        """Test the fixture is a multi-reference record"""
        assert isinstance(check_please_record, MultiRefRecord)
        assert len(check_please_record.all_refs) == 5
