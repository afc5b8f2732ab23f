"""Desk-scale linear classifiers over an explicit length feature and
hashed bag-of-tokens features.

The length feature family is the standardized token count (train-set
mean/stdev stored on the model) plus one indicator per exact token count
up to a cap, so gradient descent can fit both a smooth length trend and a
sharp length threshold. Token features are unigram frequencies hashed
into `hash_dim` buckets with crc32 and rescaled to a common document
length (count / doc_len * train_mean_len), so every row sums to the same
value: content features carry no length information and a model can only
exploit length through the explicit length family. Training is logistic
regression by mini-batch gradient descent with a seeded shuffle; a fixed
seed gives bit-identical weights.
"""

import json
import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .analysis import SplitPoint
from .corpus import Corpus
from .errors import TrainingError

LENGTH_FEATURE = "length-feature"
HASHED_TOKENS = "hashed-bag-of-tokens"
DEFAULT_HASH_DIM = 2**18
LENGTH_INDICATOR_CAP = 1024


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 8
    learning_rate: float = 5.0
    seed: int = 0
    hash_dim: int = DEFAULT_HASH_DIM
    batch_size: int = 64
    weight_decay: float = 0.0
    token_scale: float = 0.25

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "hash_dim": self.hash_dim,
            "batch_size": self.batch_size,
            "weight_decay": self.weight_decay,
            "token_scale": self.token_scale,
        }


@dataclass(frozen=True)
class Prediction:
    doc_id: str
    predicted_label: int
    score: float


@dataclass
class LinearModel:
    labels: tuple
    positive_label: int
    feature_config: frozenset
    hash_dim: int
    length_mean: float
    length_std: float
    weights: np.ndarray = field(repr=False)
    bias: float
    train_config: TrainConfig

    @property
    def negative_label(self) -> int:
        return next(lab for lab in self.labels if lab != self.positive_label)

    def to_dict(self) -> dict:
        sparse_weights = {}
        offset = 0
        if LENGTH_FEATURE in self.feature_config:
            if self.weights[0] != 0.0:
                sparse_weights["length"] = float(self.weights[0])
            for idx in np.nonzero(self.weights[1 : 1 + LENGTH_INDICATOR_CAP])[0]:
                sparse_weights[f"len{int(idx)}"] = float(self.weights[1 + idx])
            offset = 1 + LENGTH_INDICATOR_CAP
        if HASHED_TOKENS in self.feature_config:
            for idx in np.nonzero(self.weights[offset:])[0]:
                sparse_weights[str(int(idx))] = float(self.weights[offset + idx])
        return {
            "labels": list(self.labels),
            "positive_label": self.positive_label,
            "feature_config": sorted(self.feature_config),
            "hash_dim": self.hash_dim,
            "normalization": {"length_mean": self.length_mean, "length_std": self.length_std},
            "weights": sparse_weights,
            "bias": self.bias,
            "train_config": self.train_config.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinearModel":
        config = frozenset(d["feature_config"])
        n = _n_features(config, d["hash_dim"])
        weights = np.zeros(n)
        offset = (1 + LENGTH_INDICATOR_CAP) if LENGTH_FEATURE in config else 0
        for key, value in d["weights"].items():
            if key == "length":
                weights[0] = value
            elif key.startswith("len"):
                weights[1 + int(key[3:])] = value
            else:
                weights[offset + int(key)] = value
        return cls(
            labels=tuple(d["labels"]),
            positive_label=d["positive_label"],
            feature_config=config,
            hash_dim=d["hash_dim"],
            length_mean=d["normalization"]["length_mean"],
            length_std=d["normalization"]["length_std"],
            weights=weights,
            bias=d["bias"],
            train_config=TrainConfig(**d["train_config"]),
        )

    def save(self, path) -> None:
        from ._util import atomic_write_text

        atomic_write_text(path, json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "LinearModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _n_features(feature_config, hash_dim: int) -> int:
    n = 0
    if LENGTH_FEATURE in feature_config:
        n += 1 + LENGTH_INDICATOR_CAP
    if HASHED_TOKENS in feature_config:
        n += hash_dim
    return n


def hash_token(token: str, hash_dim: int) -> int:
    """Fixed, process-independent token hash (crc32 of UTF-8 bytes mod dim)."""
    return zlib.crc32(token.encode("utf-8")) % hash_dim


def featurize(
    corpus: Corpus,
    feature_config,
    hash_dim: int,
    length_mean: float,
    length_std: float,
    token_scale: float = 1.0,
) -> sparse.csr_matrix:
    """Feature matrix: [standardized length | length indicators | hashed token frequencies].

    token_scale < 1 slows content learning relative to the length family,
    the way a capacity-limited training budget does.
    """
    feature_config = frozenset(feature_config)
    use_length = LENGTH_FEATURE in feature_config
    use_tokens = HASHED_TOKENS in feature_config
    if not use_length and not use_tokens:
        raise ValueError("feature_config must enable at least one feature family")
    offset = (1 + LENGTH_INDICATOR_CAP) if use_length else 0

    data, indices, indptr = [], [], [0]
    for doc in corpus.documents:
        if use_length:
            indices.append(0)
            data.append((doc.token_count - length_mean) / length_std)
            indices.append(1 + min(doc.token_count, LENGTH_INDICATOR_CAP - 1))
            data.append(1.0)
        if use_tokens:
            tokens = doc.text.split()
            if tokens:
                counts = {}
                for tok in tokens:
                    bucket = hash_token(tok, hash_dim)
                    counts[bucket] = counts.get(bucket, 0) + 1
                scale = token_scale * max(length_mean, 1.0) / len(tokens)
                for bucket in sorted(counts):
                    indices.append(offset + bucket)
                    data.append(counts[bucket] * scale)
        indptr.append(len(indices))
    n_cols = _n_features(feature_config, hash_dim)
    return sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(corpus.documents), n_cols),
    )


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss_and_grad(weights, bias, X, y, weight_decay: float = 0.0, sample_weight=None):
    """Weighted mean logistic loss and its analytic gradient.

    loss = sum(sw * log(1 + exp(-s*z))) / sum(sw) + (decay/2)*||w||^2 with
    z = Xw + b and s = +-1 from the 0/1 targets y.
    """
    z = np.asarray(X @ weights).ravel() + bias
    signed = np.where(y > 0, -z, z)
    per_doc = np.logaddexp(0.0, signed)
    if sample_weight is None:
        loss = float(np.mean(per_doc))
        residual = (_sigmoid(z) - y) / len(y)
    else:
        total = float(np.sum(sample_weight))
        loss = float(np.sum(sample_weight * per_doc)) / total
        residual = sample_weight * (_sigmoid(z) - y) / total
    loss += 0.5 * weight_decay * float(weights @ weights)
    grad_w = X.T @ residual + weight_decay * weights
    grad_b = float(np.sum(residual))
    return loss, np.asarray(grad_w).ravel(), grad_b


def train_linear(corpus: Corpus, feature_config, config: TrainConfig) -> LinearModel:
    """Fit the logistic baseline; deterministic for a fixed seed.

    Raises TrainingError when a class has no documents. If every document
    has the same length the length feature is neutralized (stdev stored
    as 1, contributing a constant zero).
    """
    feature_config = frozenset(feature_config)
    n_per = corpus.n_per_label()
    if min(n_per.values()) == 0:
        raise TrainingError(f"degenerate training input: class counts {n_per}")

    lengths = np.array([d.token_count for d in corpus.documents], dtype=np.float64)
    length_mean = float(lengths.mean())
    length_std = float(lengths.std())
    if length_std == 0.0:
        length_std = 1.0

    X = featurize(
        corpus, feature_config, config.hash_dim, length_mean, length_std, config.token_scale
    )
    positive_label = max(corpus.labels)
    y = np.array([1.0 if d.label == positive_label else 0.0 for d in corpus.documents])
    # Inverse-frequency class weights keep skewed training sets from shifting
    # the decision boundary toward the majority class.
    n = X.shape[0]
    n_pos = float(y.sum())
    sw = np.where(y > 0, n / (2.0 * n_pos), n / (2.0 * (n - n_pos)))

    rng = np.random.default_rng(config.seed)
    weights = np.zeros(X.shape[1])
    bias = 0.0
    # Tail averaging over the final epoch removes the endpoint noise of
    # constant-step SGD, which otherwise shifts the decision prior.
    avg_weights = np.zeros_like(weights)
    avg_bias = 0.0
    avg_steps = 0
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            _, grad_w, grad_b = logistic_loss_and_grad(
                weights, bias, X[batch], y[batch], config.weight_decay, sw[batch]
            )
            weights -= config.learning_rate * grad_w
            bias -= config.learning_rate * grad_b
            if epoch == config.epochs - 1:
                avg_weights += weights
                avg_bias += bias
                avg_steps += 1
    if avg_steps:
        weights = avg_weights / avg_steps
        bias = avg_bias / avg_steps
    if not np.all(np.isfinite(weights)) or not np.isfinite(bias):
        raise TrainingError("training diverged to non-finite weights")
    return LinearModel(
        labels=tuple(corpus.labels),
        positive_label=positive_label,
        feature_config=feature_config,
        hash_dim=config.hash_dim,
        length_mean=length_mean,
        length_std=length_std,
        weights=weights,
        bias=bias,
        train_config=config,
    )


def predict(model: LinearModel, corpus: Corpus) -> list:
    """One Prediction per document; deterministic."""
    X = featurize(
        corpus,
        model.feature_config,
        model.hash_dim,
        model.length_mean,
        model.length_std,
        model.train_config.token_scale,
    )
    scores = np.asarray(X @ model.weights).ravel() + model.bias
    neg = model.negative_label
    return [
        Prediction(
            doc_id=doc.id,
            predicted_label=model.positive_label if s > 0 else neg,
            score=float(s),
        )
        for doc, s in zip(corpus.documents, scores)
    ]


def length_threshold_predict(split: SplitPoint, corpus: Corpus) -> list:
    """Apply the split rule: len <= threshold predicts the short class."""
    short = split.positive_class
    long_ = next(lab for lab in corpus.labels if lab != short)
    out = []
    for doc in corpus.documents:
        score = float(split.threshold - doc.token_count)
        out.append(
            Prediction(
                doc_id=doc.id,
                predicted_label=short if doc.token_count <= split.threshold else long_,
                score=score,
            )
        )
    return out


def accuracy(predictions, corpus: Corpus) -> float:
    """Micro accuracy of predictions against corpus labels."""
    by_id = {p.doc_id: p.predicted_label for p in predictions}
    correct = sum(1 for d in corpus.documents if by_id.get(d.id) == d.label)
    return correct / len(corpus.documents) if corpus.documents else 0.0
