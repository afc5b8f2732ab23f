"""Toolkit for detecting, injecting, quantifying, and mitigating
sequence-length bias in binary text-classification corpora."""

from .analysis import LengthProfile, SplitPoint, compute_overlap, compute_profile, optimal_split
from .augmentation import (
    AugmentConfig,
    DummyFillBackend,
    HttpFillBackend,
    MaskedDocument,
    augment_corpus,
    fill,
    plan_extension,
    plan_reduction,
)
from .baselines import (
    LinearModel,
    Prediction,
    TrainConfig,
    length_threshold_predict,
    predict,
    train_linear,
)
from .corpus import Corpus, Document, count_tokens, load_corpus, save_corpus
from .evaluation import EvaluationReport, compare, evaluate
from .experiment import ExperimentConfig, ExperimentResult, run_experiment
from .injection import InjectionSpec, alter_training_set, filter_overlap_window, thresholds_for_overlap
from .partition import PartitionSet, make_partitions
from .synth import SyntheticConfig, generate_corpus

__version__ = "0.1.0"

__all__ = [
    "AugmentConfig",
    "Corpus",
    "Document",
    "DummyFillBackend",
    "EvaluationReport",
    "ExperimentConfig",
    "ExperimentResult",
    "HttpFillBackend",
    "InjectionSpec",
    "LengthProfile",
    "LinearModel",
    "MaskedDocument",
    "PartitionSet",
    "Prediction",
    "SplitPoint",
    "SyntheticConfig",
    "TrainConfig",
    "alter_training_set",
    "augment_corpus",
    "compare",
    "compute_overlap",
    "compute_profile",
    "count_tokens",
    "evaluate",
    "fill",
    "filter_overlap_window",
    "generate_corpus",
    "length_threshold_predict",
    "load_corpus",
    "make_partitions",
    "optimal_split",
    "plan_extension",
    "plan_reduction",
    "predict",
    "run_experiment",
    "save_corpus",
    "thresholds_for_overlap",
    "train_linear",
]
