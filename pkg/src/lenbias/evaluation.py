"""Accuracy diagnostics over the original/gap/reverse test subsets.

The headline metric is the gap-minus-reverse accuracy difference: near
zero when a model ignores length, approaching one when predictions follow
length alone. Overall accuracy always equals the subset-size-weighted
average of the gap and reverse accuracies, which is asserted on every
report.
"""

import csv
import io
from dataclasses import dataclass, field

from .corpus import Corpus
from .errors import CoverageError
from .partition import PartitionSet

_IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class EvaluationReport:
    accuracy_original: float
    accuracy_gap: float
    accuracy_reverse: float
    delta_gap_reverse: float
    n_per_subset: dict
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accuracy_original": self.accuracy_original,
            "accuracy_gap": self.accuracy_gap,
            "accuracy_reverse": self.accuracy_reverse,
            "delta_gap_reverse": self.delta_gap_reverse,
            "n_per_subset": dict(self.n_per_subset),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        return cls(
            accuracy_original=d["accuracy_original"],
            accuracy_gap=d["accuracy_gap"],
            accuracy_reverse=d["accuracy_reverse"],
            delta_gap_reverse=d["delta_gap_reverse"],
            n_per_subset=dict(d["n_per_subset"]),
            metadata=dict(d.get("metadata", {})),
        )


def evaluate(predictions, test: Corpus, partitions: PartitionSet, metadata=None) -> EvaluationReport:
    """Per-subset accuracies and the gap-reverse delta.

    Every test document must have exactly one prediction; missing or
    duplicated ids raise CoverageError listing them. Empty subsets report
    accuracy 0.0 (and weigh nothing in the overall average).
    """
    pred_by_id = {}
    duplicates = []
    for p in predictions:
        if p.doc_id in pred_by_id:
            duplicates.append(p.doc_id)
        pred_by_id[p.doc_id] = p.predicted_label
    test_ids = {d.id for d in test.documents}
    missing = sorted(test_ids - pred_by_id.keys())
    if duplicates:
        raise CoverageError(f"duplicate predictions for ids: {sorted(set(duplicates))}")
    if missing:
        raise CoverageError(f"missing predictions for ids: {missing}")

    n = {"original": 0, "gap": 0, "reverse": 0}
    correct = {"original": 0, "gap": 0, "reverse": 0}
    for d in test.documents:
        subset = "gap" if d.id in partitions.gap_ids else "reverse"
        hit = pred_by_id[d.id] == d.label
        n["original"] += 1
        n[subset] += 1
        if hit:
            correct["original"] += 1
            correct[subset] += 1

    acc = {k: (correct[k] / n[k] if n[k] else 0.0) for k in n}
    weighted = (
        (acc["gap"] * n["gap"] + acc["reverse"] * n["reverse"]) / n["original"]
        if n["original"]
        else 0.0
    )
    if abs(weighted - acc["original"]) > _IDENTITY_TOL:
        raise AssertionError(
            f"weighted-average identity violated: {weighted} vs {acc['original']}"
        )
    return EvaluationReport(
        accuracy_original=acc["original"],
        accuracy_gap=acc["gap"],
        accuracy_reverse=acc["reverse"],
        delta_gap_reverse=acc["gap"] - acc["reverse"],
        n_per_subset=n,
        metadata=dict(metadata or {}),
    )


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    delta: float
    delta_vs_first: float
    reduction_pct: float | None
    flag: str
    accuracy_original: float
    accuracy_gap: float
    accuracy_reverse: float
    overlap: float | None


@dataclass(frozen=True)
class Comparison:
    rows: tuple

    def to_markdown(self) -> str:
        lines = [
            "| run | overlap | acc original | acc gap | acc reverse | delta gap-reverse | vs first |",
            "|---|---|---|---|---|---|---|",
        ]
        for r in self.rows:
            overlap = f"{r.overlap:.1f}%" if r.overlap is not None else "-"
            lines.append(
                f"| {r.label} | {overlap} | {r.accuracy_original:.4f} | "
                f"{r.accuracy_gap:.4f} | {r.accuracy_reverse:.4f} | {r.delta:.4f} | "
                f"{r.flag or '-'} |"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "run",
                "overlap",
                "accuracy_original",
                "accuracy_gap",
                "accuracy_reverse",
                "delta_gap_reverse",
                "delta_vs_first",
                "flag",
            ]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.label,
                    "" if r.overlap is None else f"{r.overlap:.6f}",
                    f"{r.accuracy_original:.6f}",
                    f"{r.accuracy_gap:.6f}",
                    f"{r.accuracy_reverse:.6f}",
                    f"{r.delta:.6f}",
                    f"{r.delta_vs_first:.6f}",
                    r.flag,
                ]
            )
        return buf.getvalue()


def compare(reports) -> Comparison:
    """Side-by-side deltas for two or more labeled reports.

    The first report is the reference; later rows whose delta shrank are
    flagged with the reduction percentage.
    """
    reports = list(reports)
    if len(reports) < 2:
        raise ValueError("compare needs at least 2 reports")
    first_delta = reports[0][1].delta_gap_reverse
    rows = []
    for i, (label, rep) in enumerate(reports):
        delta = rep.delta_gap_reverse
        change = delta - first_delta
        flag = ""
        reduction = None
        if i > 0 and delta < first_delta:
            if first_delta != 0:
                reduction = 100.0 * (first_delta - delta) / abs(first_delta)
                flag = f"reduced by {reduction:.1f}%"
            else:
                flag = "reduced"
        overlap = rep.metadata.get("overlap")
        rows.append(
            ComparisonRow(
                label=label,
                delta=delta,
                delta_vs_first=change,
                reduction_pct=reduction,
                flag=flag,
                accuracy_original=rep.accuracy_original,
                accuracy_gap=rep.accuracy_gap,
                accuracy_reverse=rep.accuracy_reverse,
                overlap=overlap,
            )
        )
    return Comparison(rows=tuple(rows))
