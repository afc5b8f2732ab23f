"""Per-class length profiling: short/long class identity, distribution
overlap, and the optimal length-only split point.

Overlap is histogram intersection over integer token-length bins: both
class histograms are normalized to probability mass and the shared mass
sum(min(p_a, p_b)) is reported as a percentage. The split point is the
length threshold at which the rule "len <= t -> short class" maximizes F1
(positive class = short class) on the corpus that produced it.
"""

import statistics
from dataclasses import dataclass

from .corpus import Corpus
from .errors import ProfileError

SPLIT_RULE = "len <= threshold -> short class, len > threshold -> long class"


@dataclass(frozen=True)
class LengthProfile:
    per_class_histogram: dict
    per_class_mean: dict
    per_class_median: dict
    short_label: int
    long_label: int
    overlap_pct: float
    n_per_class: dict

    def to_dict(self) -> dict:
        return {
            "per_class_histogram": {
                str(lab): {str(k): v for k, v in sorted(h.items())}
                for lab, h in self.per_class_histogram.items()
            },
            "per_class_mean": {str(k): v for k, v in self.per_class_mean.items()},
            "per_class_median": {str(k): v for k, v in self.per_class_median.items()},
            "short_label": self.short_label,
            "long_label": self.long_label,
            "overlap_pct": self.overlap_pct,
            "n_per_class": {str(k): v for k, v in self.n_per_class.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LengthProfile":
        return cls(
            per_class_histogram={
                int(lab): {int(k): v for k, v in h.items()}
                for lab, h in d["per_class_histogram"].items()
            },
            per_class_mean={int(k): v for k, v in d["per_class_mean"].items()},
            per_class_median={int(k): v for k, v in d["per_class_median"].items()},
            short_label=d["short_label"],
            long_label=d["long_label"],
            overlap_pct=d["overlap_pct"],
            n_per_class={int(k): v for k, v in d["n_per_class"].items()},
        )


@dataclass(frozen=True)
class SplitPoint:
    threshold: int
    f1: float
    positive_class: int
    rule: str = SPLIT_RULE

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "f1": self.f1,
            "positive_class": self.positive_class,
            "rule": self.rule,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SplitPoint":
        return cls(
            threshold=d["threshold"],
            f1=d["f1"],
            positive_class=d["positive_class"],
            rule=d.get("rule", SPLIT_RULE),
        )


def compute_overlap(hist_a: dict, hist_b: dict) -> float:
    """Shared probability mass of two length histograms, in [0, 100].

    Histograms are maps length -> count and are normalized internally, so
    the result is invariant under scaling either histogram. With integer
    counts the computation is exact: identical histograms give 100.0 and
    disjoint supports give 0.0.
    """
    if not hist_a or not hist_b:
        raise ValueError("overlap of an empty histogram is undefined")
    total_a = sum(hist_a.values())
    total_b = sum(hist_b.values())
    if total_a <= 0 or total_b <= 0:
        raise ValueError("histogram counts must sum to a positive value")
    # sum(min(a/A, b/B)) == sum(min(a*B, b*A)) / (A*B); integer counts stay exact.
    numer = 0
    for length in hist_a.keys() | hist_b.keys():
        a = hist_a.get(length, 0)
        b = hist_b.get(length, 0)
        numer += min(a * total_b, b * total_a)
    return 100.0 * numer / (total_a * total_b)


def compute_profile(corpus: Corpus) -> LengthProfile:
    """Profile both classes' token-length distributions.

    The short class is the one with the lower mean length (ties break to
    the lower class id). Raises ProfileError when a class has no documents.
    """
    hists = corpus.length_histograms()
    n_per_class = corpus.n_per_label()
    for lab in corpus.labels:
        if n_per_class[lab] == 0:
            raise ProfileError(f"class {lab} has no documents")

    lengths = {lab: [d.token_count for d in corpus.by_label(lab)] for lab in corpus.labels}
    means = {lab: sum(v) / len(v) for lab, v in lengths.items()}
    medians = {lab: int(statistics.median_low(v)) for lab, v in lengths.items()}

    short_label = min(corpus.labels, key=lambda lab: (means[lab], lab))
    long_label = next(lab for lab in corpus.labels if lab != short_label)
    overlap = compute_overlap(hists[short_label], hists[long_label])
    return LengthProfile(
        per_class_histogram=hists,
        per_class_mean=means,
        per_class_median=medians,
        short_label=short_label,
        long_label=long_label,
        overlap_pct=overlap,
        n_per_class=n_per_class,
    )


def _macro_f1(cs: int, cl: int, n_short: int, n_long: int) -> float:
    """Macro F1 of "len <= t -> short" given cs/cl docs at or below t per class."""
    denom_s = cs + cl + n_short
    f1_short = 2 * cs / denom_s if denom_s else 0.0
    denom_l = (n_long - cl) + (n_short - cs) + n_long
    f1_long = 2 * (n_long - cl) / denom_l if denom_l else 0.0
    return 0.5 * (f1_short + f1_long)


def split_f1(corpus: Corpus, threshold: int, short_label: int) -> float:
    """Macro-averaged F1 of the rule "len <= threshold -> short class".

    Both classes are scored as the positive class and averaged, so the
    degenerate predict-everything thresholds score poorly instead of
    winning on the short class alone.
    """
    cs = cl = n_short = n_long = 0
    for d in corpus.documents:
        if d.label == short_label:
            n_short += 1
            cs += d.token_count <= threshold
        else:
            n_long += 1
            cl += d.token_count <= threshold
    return _macro_f1(cs, cl, n_short, n_long)


def optimal_split(corpus: Corpus, profile: LengthProfile) -> SplitPoint:
    """Exhaustively scan length thresholds and return the F1-maximizing one.

    Candidate thresholds are 0 plus every distinct observed length; ties
    break to the smallest threshold. The score is the macro F1 of
    split_f1, reported in SplitPoint.f1.
    """
    short = profile.short_label
    short_hist = profile.per_class_histogram[short]
    long_hist = profile.per_class_histogram[profile.long_label]
    n_short = profile.n_per_class[short]
    n_long = profile.n_per_class[profile.long_label]

    candidates = sorted({0} | short_hist.keys() | long_hist.keys())
    best_t, best_f1 = 0, -1.0
    cs = cl = 0
    for t in candidates:
        cs += short_hist.get(t, 0)
        cl += long_hist.get(t, 0)
        f1 = _macro_f1(cs, cl, n_short, n_long)
        if f1 > best_f1:
            best_t, best_f1 = t, f1
    return SplitPoint(threshold=best_t, f1=best_f1, positive_class=short)
