"""Subset accuracies, the weighted-average identity, and report comparison."""

import random

import pytest

from conftest import make_corpus
from lenbias.analysis import SplitPoint, compute_profile, optimal_split
from lenbias.baselines import Prediction, length_threshold_predict
from lenbias.errors import CoverageError
from lenbias.evaluation import EvaluationReport, compare, evaluate
from lenbias.partition import make_partitions


def perfect_predictions(corpus):
    return [Prediction(doc_id=d.id, predicted_label=d.label, score=1.0) for d in corpus]


def partitions_for(corpus, threshold=None):
    profile = compute_profile(corpus)
    split = (
        optimal_split(corpus, profile)
        if threshold is None
        else SplitPoint(threshold=threshold, f1=0.5, positive_class=profile.short_label)
    )
    return make_partitions(corpus, split, profile), split


class TestEvaluate:
    def test_perfect_classifier(self):
        corpus = make_corpus({1: [3, 5, 9], 0: [4, 8, 12]})
        parts, _ = partitions_for(corpus)
        report = evaluate(perfect_predictions(corpus), corpus, parts)
        assert report.accuracy_original == 1.0
        assert report.accuracy_gap == 1.0
        assert report.accuracy_reverse == 1.0
        assert report.delta_gap_reverse == 0.0

    def test_length_threshold_classifier_is_the_extreme_case(self):
        corpus = make_corpus({1: [3, 5, 9, 14], 0: [4, 8, 12, 20]})
        parts, split = partitions_for(corpus)
        report = evaluate(length_threshold_predict(split, corpus), corpus, parts)
        assert report.accuracy_gap == 1.0
        assert report.accuracy_reverse == 0.0
        assert report.delta_gap_reverse == 1.0

    def test_ten_doc_hand_count(self):
        # short class 1: lens 2,3,6,7,9 / long class 0: lens 4,5,8,10,11; t=5
        corpus = make_corpus({1: [2, 3, 6, 7, 9], 0: [4, 5, 8, 10, 11]})
        parts, _ = partitions_for(corpus, threshold=5)
        # gap: short 2,3 + long 8,10,11; reverse: short 6,7,9 + long 4,5
        assert len(parts.gap_ids) == 5 and len(parts.reverse_ids) == 5
        # predictions: correct on short 2,6 and long 4,8,10; wrong elsewhere
        correct_ids = {"d1-0", "d1-2", "d0-0", "d0-2", "d0-3"}
        preds = [
            Prediction(
                doc_id=d.id,
                predicted_label=d.label if d.id in correct_ids else 1 - d.label,
                score=0.0,
            )
            for d in corpus
        ]
        report = evaluate(preds, corpus, parts)
        # hand count: gap hits = short{2}:1 + long{8,10}:2 = 3/5; reverse hits = short{6}:1 + long{4}:1 = 2/5
        assert report.accuracy_original == pytest.approx(0.5)
        assert report.accuracy_gap == pytest.approx(3 / 5)
        assert report.accuracy_reverse == pytest.approx(2 / 5)
        assert report.delta_gap_reverse == pytest.approx(1 / 5)

    def test_weighted_average_identity(self):
        rng = random.Random(7)
        corpus = make_corpus(
            {
                1: [rng.randrange(1, 30) for _ in range(37)],
                0: [rng.randrange(5, 40) for _ in range(23)],
            }
        )
        parts, _ = partitions_for(corpus)
        preds = [
            Prediction(
                doc_id=d.id,
                predicted_label=d.label if rng.random() < 0.7 else 1 - d.label,
                score=0.0,
            )
            for d in corpus
        ]
        report = evaluate(preds, corpus, parts)
        n = report.n_per_subset
        weighted = (
            report.accuracy_gap * n["gap"] + report.accuracy_reverse * n["reverse"]
        ) / n["original"]
        assert report.accuracy_original == pytest.approx(weighted, abs=1e-9)

    def test_reorder_invariance(self):
        corpus = make_corpus({1: [3, 5, 9], 0: [4, 8, 12]})
        parts, split = partitions_for(corpus)
        preds = length_threshold_predict(split, corpus)
        assert evaluate(preds, corpus, parts) == evaluate(list(reversed(preds)), corpus, parts)

    def test_missing_prediction_is_coverage_error(self):
        corpus = make_corpus({1: [3, 5], 0: [4, 8]})
        parts, _ = partitions_for(corpus)
        preds = perfect_predictions(corpus)[:-1]
        with pytest.raises(CoverageError, match="d1-1"):
            evaluate(preds, corpus, parts)

    def test_duplicate_prediction_is_coverage_error(self):
        corpus = make_corpus({1: [3, 5], 0: [4, 8]})
        parts, _ = partitions_for(corpus)
        preds = perfect_predictions(corpus)
        preds.append(preds[0])
        with pytest.raises(CoverageError, match="d0-0"):
            evaluate(preds, corpus, parts)


def report_with_delta(delta, overlap=None, gap=0.9):
    return EvaluationReport(
        accuracy_original=gap - delta / 2,
        accuracy_gap=gap,
        accuracy_reverse=gap - delta,
        delta_gap_reverse=delta,
        n_per_subset={"original": 100, "gap": 50, "reverse": 50},
        metadata={} if overlap is None else {"overlap": overlap},
    )


class TestCompare:
    def test_halved_delta_is_flagged_with_percentage(self):
        comparison = compare(
            [("initial", report_with_delta(0.806)), ("augmented", report_with_delta(0.402))]
        )
        assert comparison.rows[1].flag == "reduced by 50.1%"
        assert comparison.rows[1].reduction_pct == pytest.approx(50.124, abs=1e-2)

    def test_identical_reports_not_flagged(self):
        rep = report_with_delta(0.3)
        comparison = compare([("a", rep), ("b", rep)])
        assert comparison.rows[1].flag == ""
        assert comparison.rows[1].delta_vs_first == 0.0

    def test_three_reports_delta_vs_first(self):
        comparison = compare(
            [
                ("a", report_with_delta(0.5)),
                ("b", report_with_delta(0.3)),
                ("c", report_with_delta(0.7)),
            ]
        )
        assert [r.delta_vs_first for r in comparison.rows] == pytest.approx([0.0, -0.2, 0.2])
        assert comparison.rows[1].flag.startswith("reduced")
        assert comparison.rows[2].flag == ""

    def test_requires_two_reports(self):
        with pytest.raises(ValueError):
            compare([("only", report_with_delta(0.1))])

    def test_markdown_and_csv_render(self):
        comparison = compare(
            [
                ("initial", report_with_delta(0.8, overlap=50.0)),
                ("augmented", report_with_delta(0.4, overlap=65.0)),
            ]
        )
        md = comparison.to_markdown()
        assert "| initial | 50.0%" in md
        assert "reduced by 50.0%" in md
        csv_text = comparison.to_csv()
        assert csv_text.splitlines()[0].startswith("run,overlap,")
        assert len(csv_text.splitlines()) == 3
