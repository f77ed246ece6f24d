from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from critiquiz.metrics import classification_metrics, rouge_scores, tagging_metrics

EPS = 1e-9


class TestRouge:
    def test_identity(self):
        scores = rouge_scores("the heading needs contrast", "the heading needs contrast")
        for key in ("rouge1", "rouge2", "rougeL"):
            assert scores[key].f1 == pytest.approx(1.0, abs=EPS)

    def test_hand_computed_cat_case(self):
        scores = rouge_scores("the cat", "the cat sat")
        assert scores["rouge1"].precision == pytest.approx(1.0, abs=EPS)
        assert scores["rouge1"].recall == pytest.approx(2 / 3, abs=EPS)
        assert scores["rouge1"].f1 == pytest.approx(0.8, abs=EPS)
        # bigrams: candidate {the cat}, reference {the cat, cat sat}
        assert scores["rouge2"].precision == pytest.approx(1.0, abs=EPS)
        assert scores["rouge2"].recall == pytest.approx(0.5, abs=EPS)
        # LCS = 2
        assert scores["rougeL"].f1 == pytest.approx(0.8, abs=EPS)

    def test_disjoint_vocabulary(self):
        scores = rouge_scores("alpha beta", "gamma delta")
        for key in ("rouge1", "rouge2", "rougeL"):
            assert scores[key].f1 == 0.0

    def test_empty_conventions(self):
        both = rouge_scores("", "")
        one = rouge_scores("words here", "")
        other = rouge_scores("", "words here")
        for key in ("rouge1", "rouge2", "rougeL"):
            assert both[key].f1 == 1.0
            assert one[key].f1 == 0.0
            assert other[key].f1 == 0.0

    def test_clipped_counts(self):
        # candidate repeats "the"; reference has it once
        scores = rouge_scores("the the the", "the end")
        assert scores["rouge1"].precision == pytest.approx(1 / 3, abs=EPS)
        assert scores["rouge1"].recall == pytest.approx(1 / 2, abs=EPS)

    @given(
        st.lists(st.sampled_from("abcde"), max_size=12),
        st.lists(st.sampled_from("abcde"), max_size=12),
    )
    def test_bounds_and_lcs_dominance(self, cand, ref):
        scores = rouge_scores(" ".join(cand), " ".join(ref))
        for key in ("rouge1", "rouge2", "rougeL"):
            for value in (scores[key].precision, scores[key].recall, scores[key].f1):
                assert 0.0 <= value <= 1.0
        assert scores["rougeL"].f1 <= scores["rouge1"].f1 + EPS


def expand_confusion(matrix, labels):
    pred, gold = [], []
    for g, row in enumerate(matrix):
        for p, count in enumerate(row):
            pred.extend([labels[p]] * count)
            gold.extend([labels[g]] * count)
    return pred, gold


class TestClassificationMetrics:
    def test_perfect_prediction(self):
        report = classification_metrics(["a", "b", "a"], ["a", "b", "a"])
        assert report["accuracy"] == pytest.approx(1.0, abs=EPS)
        for cls in ("a", "b"):
            assert report["per_class"][cls]["f1"] == pytest.approx(1.0, abs=EPS)

    def test_hand_computed_confusion_matrix(self):
        # rows = gold, columns = pred
        matrix = [[2, 1, 0], [0, 2, 0], [1, 0, 1]]
        pred, gold = expand_confusion(matrix, ["a", "b", "c"])
        report = classification_metrics(pred, gold)

        assert report["accuracy"] == pytest.approx(Fraction(5, 7), abs=EPS)
        # hand-computed per class:
        assert report["per_class"]["a"]["precision"] == pytest.approx(Fraction(2, 3), abs=EPS)
        assert report["per_class"]["a"]["recall"] == pytest.approx(Fraction(2, 3), abs=EPS)
        assert report["per_class"]["a"]["f1"] == pytest.approx(Fraction(2, 3), abs=EPS)
        assert report["per_class"]["b"]["precision"] == pytest.approx(Fraction(2, 3), abs=EPS)
        assert report["per_class"]["b"]["recall"] == pytest.approx(1.0, abs=EPS)
        assert report["per_class"]["b"]["f1"] == pytest.approx(0.8, abs=EPS)
        assert report["per_class"]["c"]["precision"] == pytest.approx(1.0, abs=EPS)
        assert report["per_class"]["c"]["recall"] == pytest.approx(0.5, abs=EPS)
        assert report["per_class"]["c"]["f1"] == pytest.approx(Fraction(2, 3), abs=EPS)
        assert report["macro"]["precision"] == pytest.approx(Fraction(7, 9), abs=EPS)
        assert report["macro"]["recall"] == pytest.approx(Fraction(13, 18), abs=EPS)
        assert report["macro"]["f1"] == pytest.approx(Fraction(32, 45), abs=EPS)
        # weighted by supports 3, 2, 2
        assert report["weighted"]["precision"] == pytest.approx(Fraction(16, 21), abs=EPS)
        assert report["weighted"]["recall"] == pytest.approx(Fraction(5, 7), abs=EPS)
        assert report["weighted"]["f1"] == pytest.approx(
            (3 * Fraction(2, 3) + 2 * Fraction(4, 5) + 2 * Fraction(2, 3)) / 7, abs=EPS
        )

    def test_all_one_class_on_balanced_gold(self):
        report = classification_metrics(["a"] * 6, ["a", "a", "b", "b", "c", "c"])
        assert report["accuracy"] == pytest.approx(Fraction(1, 3), abs=EPS)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            classification_metrics(["a"], ["a", "b"])

    def test_zero_division_convention(self):
        report = classification_metrics(["a", "a"], ["b", "b"])
        assert report["per_class"]["a"]["recall"] == 0.0
        assert report["per_class"]["b"]["precision"] == 0.0
        assert report["per_class"]["b"]["f1"] == 0.0


class TestTaggingMetrics:
    def test_perfect(self):
        tags = [["B-ui", "I-ui", "O"], ["B-visual", "O"]]
        report = tagging_metrics(tags, tags)
        assert report["accuracy"] == pytest.approx(1.0, abs=EPS)
        assert report["per_kind"]["ui"]["f1"] == pytest.approx(1.0, abs=EPS)
        assert report["per_kind"]["visual"]["f1"] == pytest.approx(1.0, abs=EPS)

    def test_hand_computed_miss(self):
        gold = [["B-visual", "I-visual", "B-visual", "I-visual", "O"]]
        pred = [["B-visual", "I-visual", "B-visual", "O", "O"]]
        report = tagging_metrics(pred, gold)
        assert report["per_kind"]["visual"]["recall"] == pytest.approx(0.75, abs=EPS)
        assert report["per_kind"]["visual"]["precision"] == pytest.approx(1.0, abs=EPS)
        assert report["accuracy"] == pytest.approx(0.8, abs=EPS)

    def test_b_and_i_merge_per_kind(self):
        # positional disagreement inside the same kind still counts as a hit
        gold = [["B-ui", "I-ui"]]
        pred = [["I-ui", "B-ui"]]
        report = tagging_metrics(pred, gold)
        assert report["per_kind"]["ui"]["f1"] == pytest.approx(1.0, abs=EPS)

    def test_empty_prediction_convention(self):
        gold = [["B-ui", "O"]]
        pred = [["O", "O"]]
        report = tagging_metrics(pred, gold)
        assert report["per_kind"]["ui"]["recall"] == 0.0
        assert report["per_kind"]["ui"]["precision"] == 0.0

    def test_tokenization_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            tagging_metrics([["O", "O"]], [["O"]])
        with pytest.raises(ValueError, match="mismatch"):
            tagging_metrics([["O"]], [["O"], ["O"]])

    def test_unknown_tag_rejected(self):
        with pytest.raises(ValueError, match="unknown BIO tag"):
            tagging_metrics([["B-thing"]], [["O"]])
