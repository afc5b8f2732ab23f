"""End-to-end desk-scale experiment: generate a synthetic corpus, inject
length bias at a list of target overlaps, train baselines with and
without the length feature, and evaluate on the original/gap/reverse
test subsets. Optionally augments each biased training set with the
dummy fill backend and reports how much the gap-reverse delta shrinks.

Every artifact is derived from one root seed; completed scenarios are
detected (scenario.json present) and skipped, so interrupted runs resume.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from ._util import atomic_write_json, atomic_write_text, derive_seed
from .analysis import compute_profile, optimal_split
from .augmentation import AugmentConfig, DummyFillBackend, augment_corpus, plan_corpus, plans_to_jsonl
from .baselines import HASHED_TOKENS, LENGTH_FEATURE, TrainConfig, predict, train_linear
from .corpus import Corpus, load_corpus, save_corpus
from .evaluation import EvaluationReport, compare, evaluate
from .injection import alter_training_set, thresholds_for_overlap
from .partition import PartitionSet, make_partitions, partition_corpora
from .synth import SyntheticConfig, generate_corpus

MODEL_WITH_LENGTH = "length"
MODEL_CONTENT_ONLY = "content"


@dataclass(frozen=True)
class ExperimentConfig:
    out_dir: str
    seed: int = 0
    n_per_class: int = 10_000
    test_n_per_class: int = 2_000
    targets: tuple = (80.0, 50.0, 25.0, 0.0)
    include_original: bool = True
    augment: bool = True
    q: float = 0.15
    fraction: float = 1.0
    fill_word: str = "the"
    synth: SyntheticConfig = field(default_factory=SyntheticConfig)
    train: TrainConfig = field(default_factory=TrainConfig)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_per_class": self.n_per_class,
            "test_n_per_class": self.test_n_per_class,
            "targets": list(self.targets),
            "include_original": self.include_original,
            "augment": self.augment,
            "q": self.q,
            "fraction": self.fraction,
            "fill_word": self.fill_word,
            "synth": self.synth.to_dict(),
            "train": self.train.to_dict(),
        }


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    overlap: float
    lower: float | None
    upper: float | None
    n_train: int
    reports: dict  # model name -> EvaluationReport
    augmented_overlap: float | None = None

    @property
    def delta_initial(self) -> float:
        return self.reports[MODEL_WITH_LENGTH].delta_gap_reverse

    @property
    def delta_augmented(self) -> float | None:
        rep = self.reports.get("augmented")
        return rep.delta_gap_reverse if rep else None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    split_threshold: int
    original_overlap: float
    scenarios: tuple

    def scenario(self, name: str) -> ScenarioResult:
        return next(s for s in self.scenarios if s.name == name)


def _scenario_name(target) -> str:
    if target is None:
        return "original"
    return f"{target:g}"


def _predictions_csv(predictions) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["doc_id", "predicted_label", "score"])
    for p in predictions:
        writer.writerow([p.doc_id, p.predicted_label, repr(p.score)])
    return buf.getvalue()


def write_predictions(predictions, path) -> None:
    atomic_write_text(path, _predictions_csv(predictions))


def _train_and_evaluate(
    altered, test, partitions, cfg, scenario, model_name, features, overlap
):
    train_cfg = replace(cfg.train, seed=derive_seed(cfg.seed, "train", scenario, model_name))
    model = train_linear(altered, features, train_cfg)
    preds = predict(model, test)
    metadata = {
        "model": model_name,
        "scenario": scenario,
        "overlap": overlap,
        "train_provenance": altered.provenance,
        "seed": train_cfg.seed,
    }
    report = evaluate(preds, test, partitions, metadata=metadata)
    return model, preds, report


def _run_scenario(cfg: ExperimentConfig, paths, train, profile, split, test, partitions, target):
    name = _scenario_name(target)
    sdir = paths["scenarios"] / name
    marker = sdir / "scenario.json"
    if marker.exists():
        with marker.open("r", encoding="utf-8") as fh:
            saved = json.load(fh)
        reports = {k: EvaluationReport.from_dict(v) for k, v in saved["reports"].items()}
        return ScenarioResult(
            name=name,
            overlap=saved["overlap"],
            lower=saved["lower"],
            upper=saved["upper"],
            n_train=saved["n_train"],
            reports=reports,
            augmented_overlap=saved.get("augmented_overlap"),
        )

    sdir.mkdir(parents=True, exist_ok=True)
    if target is None:
        altered, spec = alter_training_set(train, profile, 0, math.inf)
    elif target == 0.0:
        # Disjoint cut aligned with the split point: the short class keeps
        # lengths at or below the threshold, the long class everything above.
        altered, spec = alter_training_set(
            train, profile, split.threshold + 1, split.threshold, 0.0
        )
    else:
        spec = thresholds_for_overlap(train, profile, target)
        altered, spec = alter_training_set(train, profile, spec.lower, spec.upper, target)
    save_corpus(altered, sdir / "altered.jsonl")
    atomic_write_json(sdir / "injection.json", {"seed": cfg.seed, **spec.to_dict()})

    reports = {}
    for model_name, features in (
        (MODEL_WITH_LENGTH, {LENGTH_FEATURE, HASHED_TOKENS}),
        (MODEL_CONTENT_ONLY, {HASHED_TOKENS}),
    ):
        model, preds, report = _train_and_evaluate(
            altered, test, partitions, cfg, name, model_name, features, spec.achieved_overlap
        )
        model.save(sdir / f"model-{model_name}.json")
        write_predictions(preds, sdir / f"predictions-{model_name}.csv")
        atomic_write_json(sdir / f"report-{model_name}.json", report.to_dict())
        reports[model_name] = report

    augmented_overlap = None
    if cfg.augment:
        aug_cfg = AugmentConfig(
            q=cfg.q,
            fraction=cfg.fraction,
            seed=derive_seed(cfg.seed, "augment", name),
        )
        backend = DummyFillBackend(cfg.fill_word)
        plans, _ = plan_corpus(altered, profile, aug_cfg)
        atomic_write_text(sdir / "plans.jsonl", plans_to_jsonl(plans))
        augmented, aug_report = augment_corpus(altered, profile, aug_cfg, backend)
        save_corpus(augmented, sdir / "augmented.jsonl")
        atomic_write_json(sdir / "augment-report.json", {"seed": cfg.seed, **aug_report.to_dict()})
        augmented_overlap = aug_report.overlap_after
        model, preds, report = _train_and_evaluate(
            augmented, test, partitions, cfg, name, "augmented",
            {LENGTH_FEATURE, HASHED_TOKENS}, aug_report.overlap_after,
        )
        model.save(sdir / "model-augmented.json")
        write_predictions(preds, sdir / "predictions-augmented.csv")
        atomic_write_json(sdir / "report-augmented.json", report.to_dict())
        reports["augmented"] = report

    result = ScenarioResult(
        name=name,
        overlap=spec.achieved_overlap,
        lower=None if math.isinf(spec.lower) else float(spec.lower),
        upper=None if math.isinf(spec.upper) else float(spec.upper),
        n_train=len(altered),
        reports=reports,
        augmented_overlap=augmented_overlap,
    )
    atomic_write_json(
        marker,
        {
            "name": name,
            "overlap": result.overlap,
            "lower": result.lower,
            "upper": result.upper,
            "n_train": result.n_train,
            "augmented_overlap": augmented_overlap,
            "reports": {k: r.to_dict() for k, r in reports.items()},
        },
    )
    return result


def _summary_tables(result: ExperimentResult) -> tuple:
    md = [
        "| scenario | overlap | model | acc original | acc gap | acc reverse | delta |",
        "|---|---|---|---|---|---|---|",
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["scenario", "overlap", "model", "accuracy_original", "accuracy_gap",
         "accuracy_reverse", "delta_gap_reverse"]
    )
    for s in result.scenarios:
        for model_name in (MODEL_WITH_LENGTH, MODEL_CONTENT_ONLY):
            rep = s.reports[model_name]
            md.append(
                f"| {s.name} | {s.overlap:.1f}% | {model_name} | {rep.accuracy_original:.4f} | "
                f"{rep.accuracy_gap:.4f} | {rep.accuracy_reverse:.4f} | {rep.delta_gap_reverse:.4f} |"
            )
            writer.writerow(
                [s.name, f"{s.overlap:.6f}", model_name, f"{rep.accuracy_original:.6f}",
                 f"{rep.accuracy_gap:.6f}", f"{rep.accuracy_reverse:.6f}",
                 f"{rep.delta_gap_reverse:.6f}"]
            )
    return "\n".join(md) + "\n", buf.getvalue()


def _mitigation_tables(result: ExperimentResult) -> tuple:
    md = [
        "| scenario | overlap ini | overlap aug | delta ini | delta aug | change |",
        "|---|---|---|---|---|---|",
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["scenario", "overlap_initial", "overlap_augmented", "delta_initial",
         "delta_augmented", "flag"]
    )
    for s in result.scenarios:
        if s.delta_augmented is None:
            continue
        rows = compare(
            [("initial", s.reports[MODEL_WITH_LENGTH]), ("augmented", s.reports["augmented"])]
        ).rows
        flag = rows[1].flag
        md.append(
            f"| {s.name} | {s.overlap:.1f}% | {s.augmented_overlap:.1f}% | "
            f"{s.delta_initial:.4f} | {s.delta_augmented:.4f} | {flag or '-'} |"
        )
        writer.writerow(
            [s.name, f"{s.overlap:.6f}", f"{s.augmented_overlap:.6f}",
             f"{s.delta_initial:.6f}", f"{s.delta_augmented:.6f}", flag]
        )
    return "\n".join(md) + "\n", buf.getvalue()


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run (or resume) the full scenario sweep under cfg.out_dir."""
    out = Path(cfg.out_dir)
    scenarios_dir = out / "scenarios"
    scenarios_dir.mkdir(parents=True, exist_ok=True)
    paths = {"out": out, "scenarios": scenarios_dir}
    atomic_write_json(out / "config.json", cfg.to_dict())

    synth_train = replace(
        cfg.synth,
        seed=derive_seed(cfg.seed, "corpus"),
        n_per_class=cfg.n_per_class,
        id_prefix="train",
    )
    synth_test = replace(synth_train, n_per_class=cfg.test_n_per_class, id_prefix="test")
    train_path, test_path = out / "train.jsonl", out / "test.jsonl"
    if train_path.exists():
        train = load_corpus(train_path)
    else:
        train = generate_corpus(synth_train)
        save_corpus(train, train_path)
    if test_path.exists():
        test = load_corpus(test_path)
    else:
        test = generate_corpus(synth_test)
        save_corpus(test, test_path)

    profile = compute_profile(train)
    split = optimal_split(train, profile)
    atomic_write_json(
        out / "analysis.json",
        {"seed": cfg.seed, "profile": profile.to_dict(), "split": split.to_dict()},
    )
    partitions = make_partitions(test, split, profile)
    atomic_write_json(
        out / "partitions.json", {"seed": cfg.seed, **_partition_summary(test, partitions)}
    )
    gap_corpus, rev_corpus = partition_corpora(test, partitions)
    save_corpus(test, out / "original-test.jsonl")
    save_corpus(gap_corpus, out / "gap-test.jsonl")
    save_corpus(rev_corpus, out / "reverse-test.jsonl")

    targets = ([None] if cfg.include_original else []) + list(cfg.targets)
    scenarios = tuple(
        _run_scenario(cfg, paths, train, profile, split, test, partitions, target)
        for target in targets
    )
    result = ExperimentResult(
        config=cfg,
        split_threshold=split.threshold,
        original_overlap=profile.overlap_pct,
        scenarios=scenarios,
    )

    summary_md, summary_csv = _summary_tables(result)
    atomic_write_text(out / "summary.md", summary_md)
    atomic_write_text(out / "summary.csv", summary_csv)
    if cfg.augment:
        mit_md, mit_csv = _mitigation_tables(result)
        atomic_write_text(out / "mitigation.md", mit_md)
        atomic_write_text(out / "mitigation.csv", mit_csv)
    atomic_write_json(
        out / "experiment.json",
        {
            "seed": cfg.seed,
            "split_threshold": result.split_threshold,
            "original_overlap": result.original_overlap,
            "scenarios": [
                {
                    "name": s.name,
                    "overlap": s.overlap,
                    "lower": s.lower,
                    "upper": s.upper,
                    "n_train": s.n_train,
                    "augmented_overlap": s.augmented_overlap,
                    "reports": {k: r.to_dict() for k, r in s.reports.items()},
                }
                for s in result.scenarios
            ],
        },
    )
    return result


def _partition_summary(test: Corpus, partitions: PartitionSet) -> dict:
    comp = {"gap": {}, "reverse": {}}
    for d in test.documents:
        subset = "gap" if d.id in partitions.gap_ids else "reverse"
        comp[subset][str(d.label)] = comp[subset].get(str(d.label), 0) + 1
    return {
        "sizes": {"gap": len(partitions.gap_ids), "reverse": len(partitions.reverse_ids)},
        "per_class": comp,
        **partitions.to_dict(),
    }
