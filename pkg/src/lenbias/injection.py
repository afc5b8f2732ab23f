"""Create length-biased training sets and the overlap-window mitigation.

Bias is injected by hard thresholding: the long class keeps documents with
len >= lower and the short class keeps documents with len <= upper (closed
intervals). A grid search over observed lengths finds the (lower, upper)
pair whose altered corpus best matches a target overlap percentage. The
few-shot mitigation goes the other way: keep only documents of BOTH
classes inside a shared length window.
"""

import math
from dataclasses import dataclass

import numpy as np

from .analysis import LengthProfile, compute_overlap
from .corpus import Corpus
from .errors import FilterError, InjectionError, SearchError

SEARCH_TOLERANCE_PCT = 5.0
_TIE_BUCKET_PCT = 0.25


@dataclass(frozen=True)
class InjectionSpec:
    lower: float
    upper: float
    target_overlap: float | None
    achieved_overlap: float
    retained: dict
    dropped: dict

    def to_dict(self) -> dict:
        return {
            "lower": None if math.isinf(self.lower) else self.lower,
            "upper": None if math.isinf(self.upper) else self.upper,
            "target_overlap": self.target_overlap,
            "achieved_overlap": self.achieved_overlap,
            "retained": {str(k): v for k, v in self.retained.items()},
            "dropped": {str(k): v for k, v in self.dropped.items()},
        }


def _format_bound(x) -> str:
    return "inf" if math.isinf(x) else str(int(x))


def alter_training_set(
    corpus: Corpus, profile: LengthProfile, lower, upper, target_overlap=None
) -> tuple:
    """Drop long-class docs below `lower` and short-class docs above `upper`.

    Documents themselves are never modified, only membership. Raises
    InjectionError if a class ends up empty. Returns the altered corpus and
    an InjectionSpec recording thresholds, achieved overlap, and per-class
    retained/dropped counts.
    """
    short, long_ = profile.short_label, profile.long_label
    kept = []
    for d in corpus.documents:
        if d.label == long_ and d.token_count >= lower:
            kept.append(d)
        elif d.label == short and d.token_count <= upper:
            kept.append(d)
    n_before = corpus.n_per_label()
    n_kept = {lab: sum(1 for d in kept if d.label == lab) for lab in corpus.labels}
    for lab in corpus.labels:
        if n_kept[lab] == 0:
            raise InjectionError(
                f"thresholds lower={_format_bound(lower)}, upper={_format_bound(upper)} "
                f"left class {lab} empty"
            )
    altered = corpus.with_documents(
        kept, provenance=f"altered: L={_format_bound(lower)},U={_format_bound(upper)}"
    )
    hists = altered.length_histograms()
    achieved = compute_overlap(hists[short], hists[long_])
    spec = InjectionSpec(
        lower=lower,
        upper=upper,
        target_overlap=target_overlap,
        achieved_overlap=achieved,
        retained=n_kept,
        dropped={lab: n_before[lab] - n_kept[lab] for lab in corpus.labels},
    )
    return altered, spec


def thresholds_for_overlap(
    corpus: Corpus, profile: LengthProfile, target_overlap: float
) -> InjectionSpec:
    """Grid-search (lower, upper) threshold pairs for a target overlap.

    Candidates come from {0} + the observed lengths: every pair with
    lower <= upper, plus for each lower the disjoint pair whose upper is
    the next candidate below it (the two classes then share no lengths at
    all, the exact-zero construction). Pairs that empty a class are
    skipped. The pair minimizing |achieved - target| wins, with distances
    bucketed to quarter points so near-equivalent pairs tie; ties keep
    the pair retaining the most documents of its smaller class, then the
    most documents overall, then the least restrictive pair (smallest
    lower, largest upper). Raises SearchError when nothing lands within
    5 points of the target.
    """
    if not 0.0 <= target_overlap <= profile.overlap_pct + 1e-9:
        raise ValueError(
            f"target overlap {target_overlap} outside [0, original overlap "
            f"{profile.overlap_pct:.2f}]"
        )
    short_hist = profile.per_class_histogram[profile.short_label]
    long_hist = profile.per_class_histogram[profile.long_label]
    lengths = sorted({0} | short_hist.keys() | long_hist.keys())
    short_counts = np.array([short_hist.get(x, 0) for x in lengths], dtype=np.int64)
    long_counts = np.array([long_hist.get(x, 0) for x in lengths], dtype=np.int64)
    short_prefix = np.cumsum(short_counts)
    long_suffix = np.cumsum(long_counts[::-1])[::-1]

    best = None  # keyed by (diff bucket, -min retained, -total retained, lower, -upper)
    for lo_idx in range(len(lengths)):
        l_total = int(long_suffix[lo_idx])
        if l_total == 0:
            break
        for hi_idx in range(lo_idx - 1, len(lengths)):
            if hi_idx < 0:
                continue
            s_total = int(short_prefix[hi_idx])
            if s_total == 0:
                continue
            if hi_idx < lo_idx:  # disjoint pair: classes share no lengths
                achieved = 0.0
            else:
                s = short_counts[lo_idx : hi_idx + 1]
                l = long_counts[lo_idx : hi_idx + 1]
                achieved = (
                    100.0
                    * float(np.minimum(s * l_total, l * s_total).sum())
                    / (s_total * l_total)
                )
            key = (
                round(abs(achieved - target_overlap) / _TIE_BUCKET_PCT),
                -min(s_total, l_total),
                -(s_total + l_total),
                lengths[lo_idx],
                -lengths[hi_idx],
            )
            if best is None or key < best[0]:
                best = (key, lengths[lo_idx], lengths[hi_idx], achieved, s_total, l_total)
    if best is None:
        raise SearchError("no threshold pair keeps both classes nonempty")
    _, lower, upper, achieved, s_total, l_total = best
    n = profile.n_per_class
    spec = InjectionSpec(
        lower=float(lower),
        upper=float(upper),
        target_overlap=target_overlap,
        achieved_overlap=achieved,
        retained={profile.short_label: s_total, profile.long_label: l_total},
        dropped={
            profile.short_label: n[profile.short_label] - s_total,
            profile.long_label: n[profile.long_label] - l_total,
        },
    )
    if abs(achieved - target_overlap) > SEARCH_TOLERANCE_PCT:
        raise SearchError(
            f"no threshold pair within {SEARCH_TOLERANCE_PCT} points of target "
            f"{target_overlap}; best achieved {achieved:.2f} at "
            f"L={lower}, U={upper}",
            best=spec,
        )
    return spec


def filter_overlap_window(corpus: Corpus, lower, upper) -> Corpus:
    """Keep documents of both classes with lower <= len <= upper.

    Raises FilterError when either class has no documents inside the
    window (the unusable zero-overlap case).
    """
    if lower > upper:
        raise ValueError(f"window lower {lower} exceeds upper {upper}")
    kept = [d for d in corpus.documents if lower <= d.token_count <= upper]
    n_kept = {lab: sum(1 for d in kept if d.label == lab) for lab in corpus.labels}
    for lab in corpus.labels:
        if n_kept[lab] == 0:
            raise FilterError(
                f"window [{_format_bound(lower)}, {_format_bound(upper)}] contains no "
                f"documents of class {lab}; no observations available for training"
            )
    return corpus.with_documents(
        kept, provenance=f"window: [{_format_bound(lower)},{_format_bound(upper)}]"
    )
