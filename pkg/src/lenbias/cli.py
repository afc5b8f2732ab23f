"""Command-line interface tying the pipeline together.

Subcommands: analyze, inject, filter-window, partition, augment,
train-baseline, predict, evaluate, compare, experiment, gen-synthetic.
Flags can be preloaded from a config file of `key = value` lines
(--config); explicit flags win. Exit status is 0 on success, 1 with a
message on any structured error, 2 on usage errors.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from ._util import atomic_write_json, atomic_write_text
from .analysis import LengthProfile, SplitPoint, compute_overlap, compute_profile, optimal_split
from .augmentation import (
    AugmentConfig,
    DummyFillBackend,
    HttpFillBackend,
    augment_corpus,
    plan_corpus,
    plans_to_jsonl,
)
from .baselines import (
    HASHED_TOKENS,
    LENGTH_FEATURE,
    LinearModel,
    Prediction,
    TrainConfig,
    predict,
    train_linear,
)
from .corpus import TOKENIZER_MODES, load_corpus, save_corpus
from .errors import LenbiasError
from .evaluation import EvaluationReport, compare, evaluate
from .experiment import ExperimentConfig, run_experiment, write_predictions
from .injection import alter_training_set, filter_overlap_window, thresholds_for_overlap
from .partition import PartitionSet, make_partitions, partition_corpora
from .synth import SyntheticConfig, generate_corpus

FEATURE_SETS = {
    "length,tokens": {LENGTH_FEATURE, HASHED_TOKENS},
    "tokens": {HASHED_TOKENS},
    "length": {LENGTH_FEATURE},
}


def read_config_file(path) -> dict:
    """Flat `key = value` lines; values parsed as JSON when possible."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise LenbiasError(f"{path}: line {lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            try:
                out[key] = json.loads(value)
            except json.JSONDecodeError:
                out[key] = value
    return out


def _require_file(path, flag: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise LenbiasError(f"{flag}: no such file: {p}")
    return p


def _load(path, mode: str, flag: str = "--in"):
    return load_corpus(_require_file(path, flag), tokenizer_mode=mode)


def _parse_bound(value: str) -> float:
    if value.lower() in ("inf", "+inf", "none"):
        return math.inf
    return int(value)


def _parse_lengths(value):
    if not value:
        return None
    return tuple(int(x) for x in str(value).split(","))


# ---------------------------------------------------------------- analyze


def _histogram_csv(profile: LengthProfile) -> str:
    labels = sorted(profile.per_class_histogram)
    lengths = sorted(set().union(*(profile.per_class_histogram[lab] for lab in labels)))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["length"] + [f"count_{lab}" for lab in labels])
    for length in lengths:
        writer.writerow([length] + [profile.per_class_histogram[lab].get(length, 0) for lab in labels])
    return buf.getvalue()


def _analysis_markdown(name: str, profile: LengthProfile, split: SplitPoint) -> str:
    lines = [
        f"# Length profile: {name}",
        "",
        "| class | documents | mean length | median length |",
        "|---|---|---|---|",
    ]
    for lab in sorted(profile.n_per_class):
        lines.append(
            f"| {lab} | {profile.n_per_class[lab]} | {profile.per_class_mean[lab]:.2f} | "
            f"{profile.per_class_median[lab]} |"
        )
    lines += [
        "",
        f"- short class: {profile.short_label}; long class: {profile.long_label}",
        f"- length distribution overlap: {profile.overlap_pct:.2f}%",
        f"- optimal split: len <= {split.threshold} -> class {split.positive_class} "
        f"(macro F1 {split.f1:.4f})",
        "",
    ]
    return "\n".join(lines)


def _analysis_csv(profile: LengthProfile, split: SplitPoint) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["class", "documents", "mean_length", "median_length", "role"])
    for lab in sorted(profile.n_per_class):
        role = "short" if lab == profile.short_label else "long"
        writer.writerow(
            [lab, profile.n_per_class[lab], f"{profile.per_class_mean[lab]:.6f}",
             profile.per_class_median[lab], role]
        )
    writer.writerow([])
    writer.writerow(["overlap_pct", f"{profile.overlap_pct:.6f}"])
    writer.writerow(["split_threshold", split.threshold])
    writer.writerow(["split_f1", f"{split.f1:.6f}"])
    writer.writerow(["split_positive_class", split.positive_class])
    return buf.getvalue()


def write_analysis(out_dir: Path, corpus_name: str, profile, split, seed=None) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {"corpus": corpus_name, "profile": profile.to_dict(), "split": split.to_dict()}
    if seed is not None:
        payload["seed"] = seed
    atomic_write_json(out_dir / "analysis.json", payload)
    atomic_write_text(out_dir / "report.md", _analysis_markdown(corpus_name, profile, split))
    atomic_write_text(out_dir / "summary.csv", _analysis_csv(profile, split))
    atomic_write_text(out_dir / "histogram.csv", _histogram_csv(profile))


def cmd_analyze(args) -> int:
    corpus = _load(args.infile, args.tokenizer_mode)
    profile = compute_profile(corpus)
    split = optimal_split(corpus, profile)
    out_dir = Path(args.out_dir)
    write_analysis(out_dir, Path(args.infile).name, profile, split)
    print(
        f"analyzed {len(corpus)} docs: short={profile.short_label} "
        f"long={profile.long_label} overlap={profile.overlap_pct:.2f}% "
        f"split={split.threshold} (macro F1 {split.f1:.4f}) -> {out_dir}"
    )
    return 0


# ----------------------------------------------------------------- inject


def cmd_inject(args) -> int:
    corpus = _load(args.infile, args.tokenizer_mode)
    profile = compute_profile(corpus)
    if args.target_overlap is not None:
        spec = thresholds_for_overlap(corpus, profile, args.target_overlap)
        lower, upper = spec.lower, spec.upper
    elif args.lower is not None and args.upper is not None:
        lower, upper = _parse_bound(args.lower), _parse_bound(args.upper)
    else:
        raise LenbiasError("inject needs either --target-overlap or both --lower and --upper")
    altered, spec = alter_training_set(corpus, profile, lower, upper, args.target_overlap)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(altered, out_dir / "altered.jsonl")
    atomic_write_json(out_dir / "injection.json", {"seed": args.seed, **spec.to_dict()})
    print(
        f"altered {len(corpus)} -> {len(altered)} docs "
        f"(L={spec.lower:g}, U={spec.upper:g}, overlap {spec.achieved_overlap:.2f}%) "
        f"-> {out_dir}"
    )
    return 0


def cmd_filter_window(args) -> int:
    corpus = _load(args.infile, args.tokenizer_mode)
    filtered = filter_overlap_window(corpus, args.lower, args.upper)
    hists = filtered.length_histograms()
    overlap = compute_overlap(hists[filtered.labels[0]], hists[filtered.labels[1]])
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(filtered, out_dir / "filtered.jsonl")
    atomic_write_json(
        out_dir / "window.json",
        {
            "seed": args.seed,
            "lower": args.lower,
            "upper": args.upper,
            "kept": len(filtered),
            "dropped": len(corpus) - len(filtered),
            "overlap_pct": overlap,
        },
    )
    print(
        f"window [{args.lower}, {args.upper}]: kept {len(filtered)}/{len(corpus)} docs, "
        f"overlap {overlap:.2f}% -> {out_dir}"
    )
    return 0


# --------------------------------------------------------------- partition


def cmd_partition(args) -> int:
    test = _load(args.test, args.tokenizer_mode, "--test")
    with _require_file(args.analysis, "--analysis").open("r", encoding="utf-8") as fh:
        analysis = json.load(fh)
    profile = LengthProfile.from_dict(analysis["profile"])
    split = SplitPoint.from_dict(analysis["split"])
    partitions = make_partitions(test, split, profile)
    gap_corpus, rev_corpus = partition_corpora(test, partitions)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(test, out_dir / "original-test.jsonl")
    save_corpus(gap_corpus, out_dir / "gap-test.jsonl")
    save_corpus(rev_corpus, out_dir / "reverse-test.jsonl")
    comp = {"gap": {}, "reverse": {}}
    for d in test.documents:
        subset = "gap" if d.id in partitions.gap_ids else "reverse"
        comp[subset][str(d.label)] = comp[subset].get(str(d.label), 0) + 1
    atomic_write_json(
        out_dir / "partitions.json",
        {
            "seed": args.seed,
            "sizes": {"gap": len(partitions.gap_ids), "reverse": len(partitions.reverse_ids)},
            "per_class": comp,
            **partitions.to_dict(),
        },
    )
    print(
        f"partitioned {len(test)} docs at len<={split.threshold}: "
        f"gap={len(partitions.gap_ids)} reverse={len(partitions.reverse_ids)} -> {out_dir}"
    )
    return 0


# ----------------------------------------------------------------- augment


def cmd_augment(args) -> int:
    corpus = _load(args.infile, args.tokenizer_mode)
    profile = compute_profile(corpus)
    cfg = AugmentConfig(q=args.q, mask_token=args.mask_token, fraction=args.fraction, seed=args.seed)
    if args.backend == "dummy":
        backend = DummyFillBackend(args.fill_word)
    else:
        if not args.endpoint:
            raise LenbiasError("--backend http requires --endpoint")
        backend = HttpFillBackend(args.endpoint)
    plans, _ = plan_corpus(corpus, profile, cfg)
    augmented, report = augment_corpus(corpus, profile, cfg, backend, replace=args.replace)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(augmented, out_dir / "augmented.jsonl")
    atomic_write_text(out_dir / "plans.jsonl", plans_to_jsonl(plans))
    atomic_write_json(out_dir / "augment-report.json", report.to_dict())
    print(
        f"augmented {len(corpus)} -> {len(augmented)} docs "
        f"(overlap {report.overlap_before:.2f}% -> {report.overlap_after:.2f}%) -> {out_dir}"
    )
    return 0


# ----------------------------------------------------------- train/predict


def cmd_train_baseline(args) -> int:
    corpus = _load(args.infile, args.tokenizer_mode)
    features = FEATURE_SETS.get(args.features)
    if features is None:
        raise LenbiasError(f"--features must be one of {sorted(FEATURE_SETS)}")
    cfg = TrainConfig(
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        seed=args.seed,
        hash_dim=args.hash_dim,
        batch_size=args.batch_size,
        weight_decay=args.weight_decay,
        token_scale=args.token_scale,
    )
    model = train_linear(corpus, features, cfg)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    model.save(args.out)
    print(f"trained {args.features} model on {len(corpus)} docs -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    model = LinearModel.load(_require_file(args.model, "--model"))
    corpus = _load(args.infile, args.tokenizer_mode)
    preds = predict(model, corpus)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_predictions(preds, args.out)
    print(f"wrote {len(preds)} predictions -> {args.out}")
    return 0


# ---------------------------------------------------------------- evaluate


def read_predictions(path) -> list:
    preds = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"doc_id", "predicted_label", "score"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise LenbiasError(f"{path}: predictions CSV needs columns {sorted(required)}")
        for row in reader:
            preds.append(
                Prediction(
                    doc_id=row["doc_id"],
                    predicted_label=int(row["predicted_label"]),
                    score=float(row["score"]),
                )
            )
    return preds


def _report_markdown(label: str, rep: EvaluationReport) -> str:
    return "\n".join(
        [
            f"# Evaluation: {label}",
            "",
            "| subset | n | accuracy |",
            "|---|---|---|",
            f"| original | {rep.n_per_subset['original']} | {rep.accuracy_original:.4f} |",
            f"| gap | {rep.n_per_subset['gap']} | {rep.accuracy_gap:.4f} |",
            f"| reverse | {rep.n_per_subset['reverse']} | {rep.accuracy_reverse:.4f} |",
            "",
            f"- delta gap-reverse: {rep.delta_gap_reverse:.4f}",
            "",
        ]
    )


def cmd_evaluate(args) -> int:
    test = _load(args.test, args.tokenizer_mode, "--test")
    with _require_file(args.partitions, "--partitions").open("r", encoding="utf-8") as fh:
        partitions = PartitionSet.from_dict(json.load(fh))
    preds = read_predictions(_require_file(args.predictions, "--predictions"))
    metadata = {"label": args.label, "predictions": Path(args.predictions).name}
    report = evaluate(preds, test, partitions, metadata=metadata)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    atomic_write_json(out_dir / "report.json", report.to_dict())
    atomic_write_text(out_dir / "report.md", _report_markdown(args.label, report))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["subset", "n", "accuracy"])
    writer.writerow(["original", report.n_per_subset["original"], f"{report.accuracy_original:.6f}"])
    writer.writerow(["gap", report.n_per_subset["gap"], f"{report.accuracy_gap:.6f}"])
    writer.writerow(["reverse", report.n_per_subset["reverse"], f"{report.accuracy_reverse:.6f}"])
    writer.writerow(["delta_gap_reverse", "", f"{report.delta_gap_reverse:.6f}"])
    atomic_write_text(out_dir / "report.csv", buf.getvalue())
    print(
        f"accuracy original={report.accuracy_original:.4f} gap={report.accuracy_gap:.4f} "
        f"reverse={report.accuracy_reverse:.4f} delta={report.delta_gap_reverse:.4f} -> {out_dir}"
    )
    return 0


def cmd_compare(args) -> int:
    if len(args.reports) < 2:
        raise LenbiasError("compare needs at least 2 report JSONs")
    labeled = []
    labels = args.labels.split(",") if args.labels else []
    for i, path in enumerate(args.reports):
        with _require_file(path, "reports").open("r", encoding="utf-8") as fh:
            rep = EvaluationReport.from_dict(json.load(fh))
        label = labels[i] if i < len(labels) else rep.metadata.get("label", Path(path).stem)
        labeled.append((label, rep))
    comparison = compare(labeled)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    atomic_write_text(out_dir / "comparison.md", comparison.to_markdown())
    atomic_write_text(out_dir / "comparison.csv", comparison.to_csv())
    print(comparison.to_markdown())
    return 0


# ------------------------------------------------------------ gen/experiment


def _synth_config(args, prefix: str) -> SyntheticConfig:
    return SyntheticConfig(
        n_per_class=args.n_per_class,
        seed=args.seed,
        short_label=args.short_label,
        long_label=args.long_label,
        short_mean=args.short_mean,
        short_std=args.short_std,
        long_mean=args.long_mean,
        long_std=args.long_std,
        min_len=args.min_len,
        max_len=args.max_len,
        signal=args.signal,
        cross_noise=args.cross_noise,
        n_indicative=args.n_indicative,
        vocab_size=args.vocab_size,
        id_prefix=prefix,
        short_lengths=_parse_lengths(args.short_lengths),
        long_lengths=_parse_lengths(args.long_lengths),
    )


def cmd_gen_synthetic(args) -> int:
    cfg = _synth_config(args, args.id_prefix)
    corpus = generate_corpus(cfg)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, args.out)
    print(f"generated {len(corpus)} docs (seed {args.seed}) -> {args.out}")
    return 0


def cmd_experiment(args) -> int:
    synth = SyntheticConfig(
        short_mean=args.short_mean,
        short_std=args.short_std,
        long_mean=args.long_mean,
        long_std=args.long_std,
        min_len=args.min_len,
        max_len=args.max_len,
        signal=args.signal,
        cross_noise=args.cross_noise,
        n_indicative=args.n_indicative,
        vocab_size=args.vocab_size,
    )
    train_cfg = TrainConfig(
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        hash_dim=args.hash_dim,
        batch_size=args.batch_size,
        weight_decay=args.weight_decay,
        token_scale=args.token_scale,
    )
    cfg = ExperimentConfig(
        out_dir=args.out_dir,
        seed=args.seed,
        n_per_class=args.n_per_class,
        test_n_per_class=args.test_n_per_class,
        targets=tuple(float(t) for t in args.targets.split(",")) if args.targets else (),
        include_original=not args.no_original,
        augment=not args.no_augment,
        q=args.q,
        fraction=args.fraction,
        fill_word=args.fill_word,
        synth=synth,
        train=train_cfg,
    )
    result = run_experiment(cfg)
    print(f"experiment (seed {cfg.seed}) split={result.split_threshold} "
          f"original overlap={result.original_overlap:.2f}%")
    for s in result.scenarios:
        rep = s.reports["length"]
        line = (
            f"  {s.name:>9}: overlap={s.overlap:5.1f}% orig={rep.accuracy_original:.3f} "
            f"gap={rep.accuracy_gap:.3f} rev={rep.accuracy_reverse:.3f} "
            f"delta={rep.delta_gap_reverse:+.3f}"
        )
        if s.delta_augmented is not None:
            line += f" | augmented delta={s.delta_augmented:+.3f}"
        print(line)
    print(f"artifacts -> {cfg.out_dir}")
    return 0


# ------------------------------------------------------------------- parser


def _add_common(p, tokenizer=True, seed=True):
    if tokenizer:
        p.add_argument("--tokenizer-mode", choices=TOKENIZER_MODES, default="whitespace")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> tuple:
    parser = argparse.ArgumentParser(
        prog="lenbias",
        description="Detect, inject, quantify, and mitigate sequence-length bias "
        "in binary text-classification corpora.",
    )
    parser.add_argument("--config", help="flat key = value config file; flags win")
    subs = parser.add_subparsers(dest="command", required=True)
    registry = {}

    p = registry["analyze"] = subs.add_parser("analyze", help="length profile, overlap, split point")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_analyze)

    p = registry["inject"] = subs.add_parser("inject", help="create a length-biased training set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--lower", help="long-class lower length bound (int or 'inf')")
    p.add_argument("--upper", help="short-class upper length bound (int or 'inf')")
    p.add_argument("--target-overlap", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_inject)

    p = registry["filter-window"] = subs.add_parser(
        "filter-window", help="keep both classes inside a shared length window"
    )
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--lower", type=int, required=True)
    p.add_argument("--upper", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_filter_window)

    p = registry["partition"] = subs.add_parser(
        "partition", help="split a test corpus into gap/reverse around the training split point"
    )
    p.add_argument("--test", required=True)
    p.add_argument("--analysis", required=True, help="analysis.json from `analyze` on the training set")
    p.add_argument("--out-dir", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_partition)

    p = registry["augment"] = subs.add_parser(
        "augment", help="mask-based extension/reduction plus fill"
    )
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--q", type=float, default=0.15)
    p.add_argument("--fraction", type=float, default=1.0)
    p.add_argument("--mask-token", default="<mask>")
    p.add_argument("--backend", choices=("dummy", "http"), default="dummy")
    p.add_argument("--endpoint", help="fill service base URL for --backend http")
    p.add_argument("--fill-word", default="the", help="dummy backend replacement word")
    p.add_argument("--replace", action="store_true", help="replace sources instead of appending")
    _add_common(p)
    p.set_defaults(func=cmd_augment)

    p = registry["train-baseline"] = subs.add_parser("train-baseline", help="fit a linear baseline")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--features", default="length,tokens", help="length,tokens | tokens | length")
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--learning-rate", type=float, default=TrainConfig.learning_rate)
    p.add_argument("--hash-dim", type=int, default=TrainConfig.hash_dim)
    p.add_argument("--batch-size", type=int, default=TrainConfig.batch_size)
    p.add_argument("--weight-decay", type=float, default=TrainConfig.weight_decay)
    p.add_argument("--token-scale", type=float, default=TrainConfig.token_scale)
    _add_common(p)
    p.set_defaults(func=cmd_train_baseline)

    p = registry["predict"] = subs.add_parser("predict", help="score a corpus with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="predictions CSV path")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_predict)

    p = registry["evaluate"] = subs.add_parser(
        "evaluate", help="per-subset accuracies from predictions + partitions"
    )
    p.add_argument("--test", required=True)
    p.add_argument("--partitions", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--label", default="run")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_evaluate)

    p = registry["compare"] = subs.add_parser("compare", help="side-by-side report deltas")
    p.add_argument("--reports", nargs="+", required=True)
    p.add_argument("--labels", help="comma-separated row labels")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_compare)

    p = registry["gen-synthetic"] = subs.add_parser(
        "gen-synthetic", help="seeded two-class synthetic corpus"
    )
    p.add_argument("--out", required=True)
    p.add_argument("--n-per-class", type=int, default=10_000)
    p.add_argument("--short-label", type=int, default=1)
    p.add_argument("--long-label", type=int, default=0)
    p.add_argument("--short-mean", type=float, default=95.0)
    p.add_argument("--short-std", type=float, default=30.0)
    p.add_argument("--long-mean", type=float, default=105.0)
    p.add_argument("--long-std", type=float, default=30.0)
    p.add_argument("--min-len", type=int, default=5)
    p.add_argument("--max-len", type=int, default=250)
    p.add_argument("--signal", type=float, default=0.05)
    p.add_argument("--cross-noise", type=float, default=0.3)
    p.add_argument("--n-indicative", type=int, default=50)
    p.add_argument("--vocab-size", type=int, default=5000)
    p.add_argument("--id-prefix", default="doc")
    p.add_argument("--short-lengths", help="comma-separated exact lengths, cycled")
    p.add_argument("--long-lengths", help="comma-separated exact lengths, cycled")
    _add_common(p, tokenizer=False)
    p.set_defaults(func=cmd_gen_synthetic)

    p = registry["experiment"] = subs.add_parser(
        "experiment", help="full synthetic bias-injection sweep"
    )
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-per-class", type=int, default=10_000)
    p.add_argument("--test-n-per-class", type=int, default=2_000)
    p.add_argument("--targets", default="80,50,25,0")
    p.add_argument("--no-original", action="store_true")
    p.add_argument("--no-augment", action="store_true")
    p.add_argument("--q", type=float, default=0.15)
    p.add_argument("--fraction", type=float, default=1.0)
    p.add_argument("--fill-word", default="the")
    p.add_argument("--short-mean", type=float, default=95.0)
    p.add_argument("--short-std", type=float, default=30.0)
    p.add_argument("--long-mean", type=float, default=105.0)
    p.add_argument("--long-std", type=float, default=30.0)
    p.add_argument("--min-len", type=int, default=5)
    p.add_argument("--max-len", type=int, default=250)
    p.add_argument("--signal", type=float, default=0.05)
    p.add_argument("--cross-noise", type=float, default=0.3)
    p.add_argument("--n-indicative", type=int, default=50)
    p.add_argument("--vocab-size", type=int, default=5000)
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--learning-rate", type=float, default=TrainConfig.learning_rate)
    p.add_argument("--hash-dim", type=int, default=TrainConfig.hash_dim)
    p.add_argument("--batch-size", type=int, default=TrainConfig.batch_size)
    p.add_argument("--weight-decay", type=float, default=TrainConfig.weight_decay)
    p.add_argument("--token-scale", type=float, default=TrainConfig.token_scale)
    _add_common(p, tokenizer=False)
    p.set_defaults(func=cmd_experiment)

    return parser, registry


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)

    parser, registry = build_parser()
    if known.config:
        try:
            config = read_config_file(_require_file(known.config, "--config"))
        except LenbiasError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        for sub in registry.values():
            dests = {a.dest for a in sub._actions}
            sub.set_defaults(**{k: v for k, v in config.items() if k in dests})

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LenbiasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
