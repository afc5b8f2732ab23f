"""Linear baseline training, prediction, and the gradient-correctness oracle."""

import dataclasses

import numpy as np
import pytest
from scipy import sparse

from conftest import make_corpus
from lenbias.analysis import compute_profile, optimal_split, split_f1
from lenbias.baselines import (
    HASHED_TOKENS,
    LENGTH_FEATURE,
    LinearModel,
    TrainConfig,
    accuracy,
    featurize,
    hash_token,
    length_threshold_predict,
    logistic_loss_and_grad,
    predict,
    train_linear,
)
from lenbias.corpus import Corpus, Document
from lenbias.errors import TrainingError
from lenbias.synth import SyntheticConfig, generate_corpus

FAST = TrainConfig(epochs=4, seed=7)


def content_corpus(n=40, seed=0):
    """Label decided by the presence of the token "good"."""
    rng = np.random.default_rng(seed)
    docs = []
    for i in range(n):
        label = int(i % 2)
        words = [f"w{int(x)}" for x in rng.integers(0, 50, size=int(rng.integers(3, 9)))]
        if label == 1:
            words.insert(int(rng.integers(0, len(words))), "good")
        docs.append(
            Document(id=f"c{i}", label=label, text=" ".join(words), token_count=len(words))
        )
    return Corpus(documents=tuple(docs), labels=(0, 1))


class TestGradient:
    def _random_problem(self, rng, n=12, dim=7):
        X = sparse.csr_matrix(rng.normal(size=(n, dim)))
        y = (rng.random(n) > 0.5).astype(float)
        return X, y

    @pytest.mark.parametrize("weight_decay", [0.0, 1e-2])
    @pytest.mark.parametrize("weighted", [False, True])
    def test_analytic_matches_central_differences(self, weight_decay, weighted):
        rng = np.random.default_rng(11)
        eps = 1e-6
        for trial in range(5):
            X, y = self._random_problem(rng)
            sw = rng.uniform(0.5, 2.0, size=X.shape[0]) if weighted else None
            w = rng.normal(scale=0.8, size=X.shape[1])
            b = float(rng.normal())
            _, grad_w, grad_b = logistic_loss_and_grad(w, b, X, y, weight_decay, sw)
            worst = 0.0
            for j in range(X.shape[1]):
                wp, wm = w.copy(), w.copy()
                wp[j] += eps
                wm[j] -= eps
                lp, _, _ = logistic_loss_and_grad(wp, b, X, y, weight_decay, sw)
                lm, _, _ = logistic_loss_and_grad(wm, b, X, y, weight_decay, sw)
                numeric = (lp - lm) / (2 * eps)
                scale = max(abs(numeric), abs(grad_w[j]), 1e-8)
                worst = max(worst, abs(grad_w[j] - numeric) / scale)
            lp, _, _ = logistic_loss_and_grad(w, b + eps, X, y, weight_decay, sw)
            lm, _, _ = logistic_loss_and_grad(w, b - eps, X, y, weight_decay, sw)
            numeric_b = (lp - lm) / (2 * eps)
            worst = max(worst, abs(grad_b - numeric_b) / max(abs(numeric_b), abs(grad_b), 1e-8))
            assert worst < 1e-4


class TestTrainLinear:
    def test_length_separable_reaches_perfect_training_accuracy(self):
        corpus = make_corpus({1: [3, 4, 5, 6] * 5, 0: [20, 22, 25, 30] * 5})
        model = train_linear(corpus, {LENGTH_FEATURE}, FAST)
        assert accuracy(predict(model, corpus), corpus) == 1.0

    def test_content_token_reaches_perfect_training_accuracy(self):
        corpus = content_corpus()
        model = train_linear(corpus, {HASHED_TOKENS}, FAST)
        assert accuracy(predict(model, corpus), corpus) == 1.0

    def test_single_class_rejected(self):
        corpus = make_corpus({0: [3], 1: [4]})
        degenerate = corpus.with_documents([d for d in corpus if d.label == 0])
        with pytest.raises(TrainingError):
            train_linear(degenerate, {LENGTH_FEATURE}, FAST)

    def test_deterministic_weights(self):
        corpus = content_corpus(seed=3)
        a = train_linear(corpus, {LENGTH_FEATURE, HASHED_TOKENS}, FAST)
        b = train_linear(corpus, {LENGTH_FEATURE, HASHED_TOKENS}, FAST)
        assert np.array_equal(a.weights, b.weights)
        assert a.bias == b.bias
        preds_a = predict(a, corpus)
        preds_b = predict(b, corpus)
        assert preds_a == preds_b

    def test_constant_length_neutralizes_length_feature(self):
        corpus = make_corpus({1: [5] * 6, 0: [5] * 6})
        model = train_linear(corpus, {LENGTH_FEATURE}, FAST)
        assert model.length_std == 1.0
        scores = {p.doc_id: p.score for p in predict(model, corpus)}
        assert len(set(scores.values())) == 1

    def test_save_load_round_trip(self, tmp_path):
        corpus = content_corpus(seed=5)
        model = train_linear(corpus, {LENGTH_FEATURE, HASHED_TOKENS}, FAST)
        path = tmp_path / "model.json"
        model.save(path)
        loaded = LinearModel.load(path)
        assert np.array_equal(loaded.weights, model.weights)
        assert loaded.bias == model.bias
        assert loaded.feature_config == model.feature_config
        assert predict(loaded, corpus) == predict(model, corpus)


class TestPredict:
    def test_zero_weight_model_predicts_single_label(self):
        corpus = make_corpus({1: [3, 5], 0: [9, 12]})
        cfg = TrainConfig(epochs=1, seed=0)
        trained = train_linear(corpus, {LENGTH_FEATURE}, cfg)
        model = dataclasses.replace(
            trained, weights=np.zeros_like(trained.weights), bias=-0.5
        )
        preds = predict(model, corpus)
        assert {p.score for p in preds} == {-0.5}
        assert {p.predicted_label for p in preds} == {model.negative_label}

    def test_hashed_out_content_is_chance_on_balanced_test(self):
        # hash_dim=1 folds every token into one bucket whose value is
        # constant by construction, so nothing remains to learn from.
        cfg = SyntheticConfig(n_per_class=300, seed=4, id_prefix="chance")
        train = generate_corpus(cfg)
        test = generate_corpus(dataclasses.replace(cfg, seed=5, id_prefix="chancetest"))
        model = train_linear(
            train, {HASHED_TOKENS}, dataclasses.replace(FAST, hash_dim=1)
        )
        assert abs(accuracy(predict(model, test), test) - 0.5) <= 0.05

    def test_hash_token_is_process_stable(self):
        import zlib

        assert hash_token("good", 2**18) == zlib.crc32(b"good") % 2**18 == 20114
        assert hash_token("", 16) == 0

    def test_featurize_rejects_empty_config(self):
        corpus = make_corpus({1: [3], 0: [4]})
        with pytest.raises(ValueError):
            featurize(corpus, set(), 16, 1.0, 1.0)


class TestLengthThresholdPredict:
    def test_training_f1_matches_split(self):
        corpus = make_corpus({1: [3, 5, 9, 2], 0: [4, 8, 10, 12]})
        profile = compute_profile(corpus)
        split = optimal_split(corpus, profile)
        preds = length_threshold_predict(split, corpus)
        by_id = {p.doc_id: p.predicted_label for p in preds}
        # rebuild the confusion matrix and its macro F1 from raw predictions
        f1s = []
        for positive in corpus.labels:
            tp = fp = fn = 0
            for d in corpus.documents:
                if by_id[d.id] == positive and d.label == positive:
                    tp += 1
                elif by_id[d.id] == positive:
                    fp += 1
                elif d.label == positive:
                    fn += 1
            denom = 2 * tp + fp + fn
            f1s.append(2 * tp / denom if denom else 0.0)
        assert sum(f1s) / 2 == pytest.approx(split.f1)
        assert split_f1(corpus, split.threshold, profile.short_label) == pytest.approx(split.f1)
