"""Corpus ingestion and the core document data model.

A corpus is an ordered, immutable collection of labeled documents with
exactly two classes. Token counts are either computed here by whitespace
splitting or ingested from the corpus file when an external tokenizer
produced them (tokenizer_mode="external-counts").

File format: JSONL, one object per line with fields `id` (string),
`label` (integer), `text` (string) and optional `token_count` (integer).
Unknown fields are ignored but preserved on save.
"""

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DuplicateIdError, LabelArityError, ParseError

WHITESPACE = "whitespace"
EXTERNAL_COUNTS = "external-counts"
TOKENIZER_MODES = (WHITESPACE, EXTERNAL_COUNTS)


def count_tokens(text: str) -> int:
    """Number of maximal non-whitespace runs (Unicode whitespace)."""
    return len(text.split())


@dataclass(frozen=True)
class Document:
    id: str
    label: int
    text: str
    token_count: int
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.token_count < 0:
            raise ValueError(f"document {self.id!r}: negative token_count")


@dataclass(frozen=True)
class Corpus:
    documents: tuple
    labels: tuple
    tokenizer_mode: str = WHITESPACE
    provenance: str = ""

    def __post_init__(self):
        if self.tokenizer_mode not in TOKENIZER_MODES:
            raise ValueError(f"unknown tokenizer_mode {self.tokenizer_mode!r}")
        if len(self.labels) != 2 or self.labels[0] == self.labels[1]:
            raise LabelArityError(
                f"corpus must have exactly 2 distinct labels, got {sorted(set(self.labels))}"
            )
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise DuplicateIdError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            if doc.label not in self.labels:
                raise LabelArityError(
                    f"document {doc.id!r} has label {doc.label}, expected one of {list(self.labels)}"
                )

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def by_label(self, label: int) -> tuple:
        return tuple(d for d in self.documents if d.label == label)

    def n_per_label(self) -> dict:
        counts = Counter(d.label for d in self.documents)
        return {lab: counts.get(lab, 0) for lab in self.labels}

    def length_histograms(self) -> dict:
        """Per-class map of token length -> document count."""
        hists = {lab: Counter() for lab in self.labels}
        for d in self.documents:
            hists[d.label][d.token_count] += 1
        return {lab: dict(h) for lab, h in hists.items()}

    def with_documents(self, documents, provenance: str | None = None) -> "Corpus":
        """Same labels and tokenizer mode over a new document tuple."""
        return replace(
            self,
            documents=tuple(documents),
            provenance=self.provenance if provenance is None else provenance,
        )


def _record_to_document(rec: dict, tokenizer_mode: str, lineno: int) -> Document:
    for key, typ in (("id", str), ("label", int), ("text", str)):
        if key not in rec:
            raise ParseError(f"line {lineno}: missing field {key!r}")
        if not isinstance(rec[key], typ) or isinstance(rec[key], bool):
            raise ParseError(f"line {lineno}: field {key!r} must be {typ.__name__}")
    if tokenizer_mode == EXTERNAL_COUNTS:
        if "token_count" not in rec:
            raise ParseError(
                f"line {lineno}: external-counts mode requires token_count on every record"
            )
        tc = rec["token_count"]
        if not isinstance(tc, int) or isinstance(tc, bool) or tc < 0:
            raise ParseError(f"line {lineno}: token_count must be a non-negative integer")
    else:
        tc = count_tokens(rec["text"])
    extra = {k: v for k, v in rec.items() if k not in ("id", "label", "text", "token_count")}
    return Document(id=rec["id"], label=rec["label"], text=rec["text"], token_count=tc, extra=extra)


def load_corpus(path, tokenizer_mode: str = WHITESPACE, provenance: str | None = None) -> Corpus:
    """Load a JSONL corpus, computing or ingesting token counts per mode.

    Document order is preserved from the file. Raises ParseError (with the
    offending line number), LabelArityError, or DuplicateIdError.
    """
    path = Path(path)
    if tokenizer_mode not in TOKENIZER_MODES:
        raise ValueError(f"unknown tokenizer_mode {tokenizer_mode!r}")
    docs = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(rec, dict):
                raise ParseError(f"line {lineno}: record must be a JSON object")
            docs.append(_record_to_document(rec, tokenizer_mode, lineno))
    labels = sorted({d.label for d in docs})
    if len(labels) != 2:
        raise LabelArityError(
            f"{path.name}: corpus must have exactly 2 distinct labels, got {labels}"
        )
    return Corpus(
        documents=tuple(docs),
        labels=tuple(labels),
        tokenizer_mode=tokenizer_mode,
        provenance=path.name if provenance is None else provenance,
    )


def corpus_to_jsonl(corpus: Corpus) -> str:
    lines = []
    for d in corpus.documents:
        rec = {"id": d.id, "label": d.label, "text": d.text, "token_count": d.token_count}
        rec.update(d.extra)
        lines.append(json.dumps(rec, ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def save_corpus(corpus: Corpus, path) -> None:
    """Write JSONL; loading it back in the same mode round-trips exactly."""
    from ._util import atomic_write_text

    atomic_write_text(path, corpus_to_jsonl(corpus))
