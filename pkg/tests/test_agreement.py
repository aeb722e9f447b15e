"""
Tests for inter-rater agreement

Tests weighted Cohen's kappa against scikit-learn and a direct evaluation
of the observed/expected formula, and kappa-based rater filtering.
"""

import random

import pytest
from sklearn.metrics import cohen_kappa_score

from src.corpus import RatingKind, RatingRecord, load_ratings
from src.errors import StatisticsError
from src.stats import KappaWeights, filter_raters, retain_ratings, weighted_kappa


def rating(context_id, rater_id, value, kind=RatingKind.APPROPRIATENESS, model_id="m"):
    return RatingRecord(context_id=context_id, model_id=model_id, rater_id=rater_id,
                        kind=kind, value=value)


def direct_kappa(a, b, k, exponent):
    n = len(a)
    observed = [[0.0] * k for _ in range(k)]
    for x, y in zip(a, b):
        observed[x - 1][y - 1] += 1.0 / n
    rows = [sum(observed[i]) for i in range(k)]
    cols = [sum(observed[i][j] for i in range(k)) for j in range(k)]
    num = den = 0.0
    for i in range(k):
        for j in range(k):
            w = (abs(i - j) / (k - 1)) ** exponent
            num += w * observed[i][j]
            den += w * rows[i] * cols[j]
    return 1.0 - num / den


class TestWeightedKappa:
    """Test weighted Cohen's kappa"""

    def test_perfect_disagreement(self):
        """Test a = (1, 2), b = (2, 1) with two categories gives -1"""
        assert weighted_kappa([1, 2], [2, 1], 2) == pytest.approx(-1.0)

    def test_perfect_agreement(self):
        """Test that identical ratings give 1"""
        assert weighted_kappa([1, 3, 5, 2], [1, 3, 5, 2], 5) == pytest.approx(1.0)

    @pytest.mark.parametrize("weights,name", [(KappaWeights.LINEAR, "linear"),
                                              (KappaWeights.QUADRATIC, "quadratic")])
    def test_matches_sklearn(self, weights, name):
        """Test agreement with scikit-learn on random rating vectors"""
        rng = random.Random(11)
        for _ in range(100):
            n = rng.randint(2, 30)
            a = [rng.randint(1, 5) for _ in range(n)]
            b = [rng.randint(1, 5) for _ in range(n)]
            if len(set(a)) == 1 and len(set(b)) == 1:
                continue
            expected = cohen_kappa_score(a, b, labels=[1, 2, 3, 4, 5], weights=name)
            assert weighted_kappa(a, b, 5, weights) == pytest.approx(expected, abs=1e-9)

    def test_matches_direct_formula(self):
        """Test agreement with a loop evaluation of the formula on 100 random tables"""
        rng = random.Random(23)
        checked = 0
        while checked < 100:
            n = rng.randint(2, 25)
            a = [rng.randint(1, 5) for _ in range(n)]
            b = [rng.randint(1, 5) for _ in range(n)]
            if len(set(a)) == 1 and len(set(b)) == 1 and a[0] == b[0]:
                continue
            for weights, exponent in ((KappaWeights.LINEAR, 1), (KappaWeights.QUADRATIC, 2)):
                assert weighted_kappa(a, b, 5, weights) == pytest.approx(
                    direct_kappa(a, b, 5, exponent), abs=1e-12
                )
            checked += 1

    def test_independent_raters_near_zero(self):
        """Test that independent random raters over 10^4 items give |kappa| < 0.1"""
        rng = random.Random(31)
        a = [rng.randint(1, 5) for _ in range(10_000)]
        b = [rng.randint(1, 5) for _ in range(10_000)]
        assert abs(weighted_kappa(a, b, 5)) < 0.1

    def test_symmetric(self):
        """Test that swapping the raters leaves kappa unchanged"""
        rng = random.Random(37)
        for _ in range(50):
            a = [rng.randint(1, 5) for _ in range(12)]
            b = [rng.randint(1, 5) for _ in range(12)]
            assert weighted_kappa(a, b, 5) == pytest.approx(weighted_kappa(b, a, 5))

    def test_zero_expected_disagreement(self):
        """Test that both raters using one shared category is undefined"""
        with pytest.raises(StatisticsError, match="undefined"):
            weighted_kappa([3, 3, 3], [3, 3, 3], 5)

    def test_invalid_inputs(self):
        """Test length mismatch, empty input and out-of-range categories"""
        with pytest.raises(StatisticsError, match="mismatch"):
            weighted_kappa([1, 2], [1], 5)
        with pytest.raises(StatisticsError):
            weighted_kappa([], [], 5)
        with pytest.raises(StatisticsError, match=r"\[1, 5\]"):
            weighted_kappa([1, 6], [1, 2], 5)


class TestFilterRaters:
    """Test kappa-based rater filtering"""

    @pytest.fixture
    def ratings(self):
        values = [1, 2, 3, 4, 5, 1]
        records = []
        for index, value in enumerate(values):
            context_id = f"c{index}"
            for rater in ("r1", "r2", "r3"):
                records.append(rating(context_id, rater, value))
            records.append(rating(context_id, "r4", 6 - value))
        return records

    def test_inverted_rater_removed(self, ratings):
        """Test that a rater who inverts the scale falls below the threshold"""
        result = filter_raters(ratings, threshold=0.2)
        assert result.retained == ["r1", "r2", "r3"]
        assert result.per_rater["r4"] < 0
        assert result.per_rater["r1"] > 0.2
        assert result.excluded == []
        assert result.mean_retained_kappa == pytest.approx(result.per_rater["r1"])

    def test_retain_ratings(self, ratings):
        """Test that only retained raters' ratings of the filtered kind are kept"""
        extra = rating("c0", "r4", 1, kind=RatingKind.DIVERSITY)
        result = filter_raters(ratings)
        kept = retain_ratings(list(ratings) + [extra], result)
        assert {r.rater_id for r in kept if r.kind == RatingKind.APPROPRIATENESS} == {"r1", "r2", "r3"}
        assert extra in kept

    def test_rater_without_overlap_excluded(self, ratings):
        """Test that a rater sharing fewer than two items with everyone is excluded"""
        result = filter_raters(list(ratings) + [rating("c0", "r5", 2)])
        assert result.excluded == ["r5"]
        assert "r5" not in result.retained

    def test_disjoint_raters(self):
        """Test that raters with no common items are an error"""
        ratings = [rating("a", "r1", 1), rating("b", "r1", 2),
                   rating("c", "r2", 3), rating("d", "r2", 4)]
        with pytest.raises(StatisticsError, match="no rater pair"):
            filter_raters(ratings)

    def test_single_rater(self):
        """Test that one rater cannot be filtered"""
        with pytest.raises(StatisticsError, match="two"):
            filter_raters([rating("a", "r1", 1), rating("b", "r1", 2)])

    def test_diversity_kind(self):
        """Test that diversity counts starting at 0 are compared"""
        ratings = []
        for index, value in enumerate([0, 1, 2, 3, 0]):
            ratings.append(rating(f"c{index}", "r1", value, kind=RatingKind.DIVERSITY))
            ratings.append(rating(f"c{index}", "r2", value, kind=RatingKind.DIVERSITY))
        result = filter_raters(ratings, kind=RatingKind.DIVERSITY)
        assert result.per_rater == {"r1": pytest.approx(1.0), "r2": pytest.approx(1.0)}

    def test_fixture_raters_agree(self, fixtures_dir):
        """Test that the fixture raters are both retained"""
        result = filter_raters(load_ratings(fixtures_dir / "small_ratings.jsonl"))
        assert result.retained == ["r1", "r2"]
