"""Split a test corpus into gap-test and reverse-test around a split point.

Gap-test holds documents whose length is consistent with their class's
length profile (short-class docs at or below the threshold, long-class
docs above it); reverse-test is the complement. By construction the
length-only threshold classifier is exactly right on gap-test and exactly
wrong on reverse-test.
"""

from dataclasses import dataclass

from .analysis import LengthProfile, SplitPoint
from .corpus import Corpus
from .errors import ProfileError


@dataclass(frozen=True)
class PartitionSet:
    gap_ids: frozenset
    reverse_ids: frozenset
    split: SplitPoint

    def to_dict(self) -> dict:
        return {
            "gap_ids": sorted(self.gap_ids),
            "reverse_ids": sorted(self.reverse_ids),
            "split": self.split.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PartitionSet":
        return cls(
            gap_ids=frozenset(d["gap_ids"]),
            reverse_ids=frozenset(d["reverse_ids"]),
            split=SplitPoint.from_dict(d["split"]),
        )


def make_partitions(test: Corpus, split: SplitPoint, profile: LengthProfile) -> PartitionSet:
    """Partition `test` by the training-set split point.

    A document lands in gap-test when the split rule classifies it
    correctly: short-class docs with len <= threshold, long-class docs
    with len > threshold. Everything else is reverse-test.
    """
    if set(test.labels) != {profile.short_label, profile.long_label}:
        raise ProfileError(
            f"test labels {sorted(test.labels)} do not match profile labels "
            f"{sorted((profile.short_label, profile.long_label))}"
        )
    t = split.threshold
    gap, reverse = [], []
    for d in test.documents:
        is_short_class = d.label == profile.short_label
        predicted_short = d.token_count <= t
        (gap if predicted_short == is_short_class else reverse).append(d.id)
    return PartitionSet(gap_ids=frozenset(gap), reverse_ids=frozenset(reverse), split=split)


def partition_corpora(test: Corpus, partitions: PartitionSet) -> tuple:
    """Materialize the gap and reverse subsets in original document order."""
    gap_docs = [d for d in test.documents if d.id in partitions.gap_ids]
    rev_docs = [d for d in test.documents if d.id in partitions.reverse_ids]
    gap = test.with_documents(gap_docs, provenance="gap-test")
    rev = test.with_documents(rev_docs, provenance="reverse-test")
    return gap, rev
