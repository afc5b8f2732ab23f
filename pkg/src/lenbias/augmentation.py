"""Mask-based augmentation: lengthen short-class documents by inserting
mask placeholders and shorten long-class documents by merging adjacent
word pairs into one placeholder, then fill the placeholders through a
backend so the two class length distributions move toward each other.

Mask counts are Binomial(m, q) draws where m is the document's whitespace
token count; reductions are capped at floor(m/2) so merged pairs stay
disjoint. Every draw is seeded per document from (config seed, doc id),
so plans do not depend on iteration order.
"""

import json
import logging
from dataclasses import dataclass

import numpy as np
import requests

from ._util import stable_hash64, unit_float
from .analysis import compute_overlap
from .corpus import EXTERNAL_COUNTS, Corpus, Document, count_tokens
from .errors import FillError, TransportError

logger = logging.getLogger(__name__)

EXTEND = "extend"
REDUCE = "reduce"
_SHUFFLE_ATTEMPTS = 100


@dataclass(frozen=True)
class AugmentConfig:
    q: float = 0.15
    mask_token: str = "<mask>"
    fraction: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must be in (0, 1), got {self.q}")
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError(f"fraction must be in (0, 1], got {self.fraction}")
        if not self.mask_token or self.mask_token != self.mask_token.strip():
            raise ValueError("mask_token must be a non-empty token without surrounding space")


@dataclass(frozen=True)
class MaskedDocument:
    source_id: str
    label: int
    operation: str
    masked_text: str
    k: int
    seed: int
    expected_length_delta: int

    def to_dict(self) -> dict:
        return {
            "source_id": self.source_id,
            "label": self.label,
            "operation": self.operation,
            "masked_text": self.masked_text,
            "k": self.k,
            "seed": self.seed,
            "expected_length_delta": self.expected_length_delta,
        }


def per_document_seed(config_seed: int, doc_id: str) -> int:
    return stable_hash64(config_seed, "plan", doc_id)


def insert_masks(tokens, gaps, mask_token: str) -> str:
    """Insert one mask at each inter-token gap index (0..len(tokens))."""
    gaps = sorted(gaps)
    out = []
    gi = 0
    for i, tok in enumerate(tokens):
        while gi < len(gaps) and gaps[gi] == i:
            out.append(mask_token)
            gi += 1
        out.append(tok)
    out.extend(mask_token for _ in gaps[gi:])
    return " ".join(out)


def merge_pairs(tokens, starts, mask_token: str) -> str:
    """Replace each (start, start+1) token pair with one mask; starts disjoint."""
    chosen = set(starts)
    out = []
    i = 0
    while i < len(tokens):
        if i in chosen:
            out.append(mask_token)
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return " ".join(out)


def plan_extension(doc: Document, cfg: AugmentConfig, per_doc_seed: int | None = None) -> MaskedDocument:
    """Draw k ~ Binomial(m, q) and insert k masks at distinct gaps.

    A zero draw returns the original text byte-identically.
    """
    tokens = doc.text.split()
    m = len(tokens)
    if m < 1:
        raise ValueError(f"document {doc.id!r} is empty; nothing to extend")
    seed = per_document_seed(cfg.seed, doc.id) if per_doc_seed is None else per_doc_seed
    rng = np.random.default_rng(seed)
    k = int(rng.binomial(m, cfg.q))
    if k == 0:
        masked = doc.text
    else:
        gaps = sorted(int(g) for g in rng.choice(m + 1, size=k, replace=False))
        masked = insert_masks(tokens, gaps, cfg.mask_token)
    return MaskedDocument(
        source_id=doc.id,
        label=doc.label,
        operation=EXTEND,
        masked_text=masked,
        k=k,
        seed=seed,
        expected_length_delta=k,
    )


def _disjoint_pair_starts(rng, m: int, r: int):
    """r pairwise-disjoint adjacent-pair start indices, via shuffled greedy passes."""
    candidates = np.arange(m - 1)
    for _ in range(_SHUFFLE_ATTEMPTS):
        chosen = set()
        for s in rng.permutation(candidates):
            s = int(s)
            if s in chosen or (s - 1) in chosen or (s + 1) in chosen:
                continue
            chosen.add(s)
            if len(chosen) == r:
                return sorted(chosen)
    # Every even start is mutually disjoint, so this always reaches r <= m//2.
    return list(range(0, 2 * r, 2))


def plan_reduction(doc: Document, cfg: AugmentConfig, per_doc_seed: int | None = None) -> MaskedDocument:
    """Draw r ~ Binomial(m, q) capped at floor(m/2) and merge r disjoint
    adjacent word pairs into single masks, shortening the text by r tokens.
    """
    tokens = doc.text.split()
    m = len(tokens)
    if m < 2:
        raise ValueError(f"document {doc.id!r} has {m} tokens; nothing to merge")
    seed = per_document_seed(cfg.seed, doc.id) if per_doc_seed is None else per_doc_seed
    rng = np.random.default_rng(seed)
    r = min(int(rng.binomial(m, cfg.q)), m // 2)
    if r == 0:
        masked = doc.text
    else:
        starts = _disjoint_pair_starts(rng, m, r)
        masked = merge_pairs(tokens, starts, cfg.mask_token)
    return MaskedDocument(
        source_id=doc.id,
        label=doc.label,
        operation=REDUCE,
        masked_text=masked,
        k=r,
        seed=seed,
        expected_length_delta=-r,
    )


class DummyFillBackend:
    """Replaces every mask with one fixed word; needs no model or network."""

    def __init__(self, word: str = "the"):
        if not word or len(word.split()) != 1:
            raise ValueError("fill word must be a single token")
        self.word = word

    @property
    def backend_id(self) -> str:
        return f"dummy:{self.word}"

    def fill(self, texts, mask_token: str):
        return [t.replace(mask_token, self.word) for t in texts]


class HttpFillBackend:
    """Client for the mask-fill HTTP service (POST {endpoint}/fill)."""

    def __init__(self, endpoint: str, batch_size: int = 64, retries: int = 3, timeout: float = 30.0):
        self.endpoint = endpoint.rstrip("/")
        self.batch_size = batch_size
        self.retries = retries
        self.timeout = timeout
        self.last_model_id = None

    @property
    def backend_id(self) -> str:
        if self.last_model_id:
            return f"http:{self.endpoint} ({self.last_model_id})"
        return f"http:{self.endpoint}"

    def _post_batch(self, batch, mask_token: str):
        payload = {"texts": batch, "mask_token": mask_token}
        last_exc = None
        for attempt in range(1, self.retries + 1):
            try:
                resp = requests.post(
                    f"{self.endpoint}/fill", json=payload, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_exc = exc
                continue
            if resp.status_code != 200:
                raise FillError(
                    f"fill service returned {resp.status_code}: {resp.text[:200]}"
                )
            body = resp.json()
            if "texts" not in body or len(body["texts"]) != len(batch):
                raise FillError(
                    f"fill service returned {len(body.get('texts', []))} texts "
                    f"for a batch of {len(batch)}"
                )
            self.last_model_id = body.get("model_id")
            return body["texts"]
        raise TransportError(
            f"fill service unreachable at {self.endpoint} after {self.retries} attempts: "
            f"{last_exc}",
            attempts=self.retries,
        )

    def fill(self, texts, mask_token: str):
        out = []
        for start in range(0, len(texts), self.batch_size):
            out.extend(self._post_batch(texts[start : start + self.batch_size], mask_token))
        return out


def fill(masked, backend, mask_token: str = "<mask>") -> list:
    """Fill every mask placeholder and build synthetic documents.

    Zero-mask plans pass through byte-identically without touching the
    backend. Raises FillError naming the offending source id when a filled
    text still contains a placeholder, or on a batch-size mismatch.
    """
    pending = [md for md in masked if mask_token in md.masked_text]
    filled = []
    if pending:
        filled = backend.fill([md.masked_text for md in pending], mask_token)
        if len(filled) != len(pending):
            raise FillError(
                f"backend returned {len(filled)} texts for {len(pending)} masked documents"
            )
    filled_iter = iter(filled)
    out = []
    for md in masked:
        text = next(filled_iter) if mask_token in md.masked_text else md.masked_text
        if mask_token in text:
            raise FillError(
                f"backend left {text.count(mask_token)} mask placeholder(s) in "
                f"document {md.source_id!r}"
            )
        out.append(
            Document(
                id=f"{md.source_id}::{md.operation}",
                label=md.label,
                text=text,
                token_count=count_tokens(text),
            )
        )
    return out


@dataclass(frozen=True)
class AugmentationReport:
    overlap_before: float
    overlap_after: float
    n_extended: int
    n_reduced: int
    n_skipped: int
    n_synthetic: int
    mode: str
    backend: str
    fill_passes: str
    q: float
    fraction: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "overlap_before": self.overlap_before,
            "overlap_after": self.overlap_after,
            "n_extended": self.n_extended,
            "n_reduced": self.n_reduced,
            "n_skipped": self.n_skipped,
            "n_synthetic": self.n_synthetic,
            "mode": self.mode,
            "backend": self.backend,
            "fill_passes": self.fill_passes,
            "q": self.q,
            "fraction": self.fraction,
            "seed": self.seed,
        }


def plan_corpus(train: Corpus, profile, cfg: AugmentConfig) -> tuple:
    """Extension/reduction plans for a seeded per-document sample of each class.

    Returns (plans, n_skipped). Selection uses a per-document hash so the
    sample is independent of document order.
    """
    plans = []
    skipped = 0
    for doc in train.documents:
        if unit_float(stable_hash64(cfg.seed, "select", doc.id)) >= cfg.fraction:
            continue
        try:
            if doc.label == profile.short_label:
                plans.append(plan_extension(doc, cfg))
            else:
                plans.append(plan_reduction(doc, cfg))
        except ValueError as exc:
            logger.warning("skipping %s: %s", doc.id, exc)
            skipped += 1
    return plans, skipped


def augment_corpus(
    train: Corpus, profile, cfg: AugmentConfig, backend, replace: bool = False
) -> tuple:
    """Plan, fill, and merge synthetic documents into the corpus.

    By default synthetics are added alongside the originals; replace=True
    substitutes each augmented source with its synthetic instead. Returns
    the new corpus and a report with overlap before and after.
    """
    if train.tokenizer_mode == EXTERNAL_COUNTS:
        raise ValueError(
            "augmentation plans lengths in whitespace tokens; re-load the corpus "
            "in whitespace mode first"
        )
    hists = train.length_histograms()
    overlap_before = compute_overlap(hists[train.labels[0]], hists[train.labels[1]])

    plans, skipped = plan_corpus(train, profile, cfg)
    synthetic = fill(plans, backend, cfg.mask_token)

    if replace:
        by_source = {d.id.rsplit("::", 1)[0]: d for d in synthetic}
        docs = [by_source.get(d.id, d) for d in train.documents]
        mode = "replace"
    else:
        docs = list(train.documents) + synthetic
        mode = "append"
    augmented = train.with_documents(
        docs, provenance=f"augmented: q={cfg.q},fraction={cfg.fraction},mode={mode}"
    )
    hists_after = augmented.length_histograms()
    overlap_after = compute_overlap(hists_after[train.labels[0]], hists_after[train.labels[1]])
    report = AugmentationReport(
        overlap_before=overlap_before,
        overlap_after=overlap_after,
        n_extended=sum(1 for p in plans if p.operation == EXTEND),
        n_reduced=sum(1 for p in plans if p.operation == REDUCE),
        n_skipped=skipped,
        n_synthetic=len(synthetic),
        mode=mode,
        backend=backend.backend_id,
        fill_passes="single",
        q=cfg.q,
        fraction=cfg.fraction,
        seed=cfg.seed,
    )
    return augmented, report


def plans_to_jsonl(plans) -> str:
    lines = [json.dumps(p.to_dict(), ensure_ascii=False, sort_keys=True) for p in plans]
    return "\n".join(lines) + ("\n" if lines else "")
