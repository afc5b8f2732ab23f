"""Synthetic corpus generator: determinism, structure, and knobs."""

import dataclasses

from lenbias.analysis import compute_profile
from lenbias.synth import SyntheticConfig, generate_corpus

BASE = SyntheticConfig(n_per_class=200, seed=42, id_prefix="t")


class TestGenerateCorpus:
    def test_deterministic(self):
        a = generate_corpus(BASE)
        b = generate_corpus(BASE)
        assert a.documents == b.documents

    def test_seed_changes_output(self):
        a = generate_corpus(BASE)
        b = generate_corpus(dataclasses.replace(BASE, seed=43))
        assert a.documents != b.documents

    def test_sizes_and_labels(self):
        corpus = generate_corpus(BASE)
        assert len(corpus) == 400
        counts = corpus.n_per_label()
        assert counts == {0: 200, 1: 200}

    def test_short_class_is_shorter_on_average(self):
        profile = compute_profile(generate_corpus(BASE))
        assert profile.short_label == BASE.short_label

    def test_lengths_respect_bounds(self):
        cfg = dataclasses.replace(BASE, min_len=10, max_len=60, short_std=80, long_std=80)
        corpus = generate_corpus(cfg)
        lens = [d.token_count for d in corpus]
        assert min(lens) >= 10 and max(lens) <= 60

    def test_token_count_matches_text(self):
        for d in generate_corpus(BASE):
            assert d.token_count == len(d.text.split())

    def test_fixed_length_grids_cycle_exactly(self):
        cfg = dataclasses.replace(
            BASE, n_per_class=100, short_lengths=(70, 80), long_lengths=(80, 90)
        )
        corpus = generate_corpus(cfg)
        profile = compute_profile(corpus)
        hist_short = profile.per_class_histogram[cfg.short_label]
        hist_long = profile.per_class_histogram[cfg.long_label]
        assert hist_short == {70: 50, 80: 50}
        assert hist_long == {80: 50, 90: 50}
        assert profile.overlap_pct == 50.0

    def test_indicative_tokens_carry_class_signal(self):
        corpus = generate_corpus(dataclasses.replace(BASE, signal=0.2, cross_noise=0.0))
        for label in corpus.labels:
            other = next(x for x in corpus.labels if x != label)
            own = sum(d.text.count(f"c{label}t") for d in corpus.by_label(label))
            foreign = sum(d.text.count(f"c{other}t") for d in corpus.by_label(label))
            assert own > 0
            assert foreign == 0
