import json

import pytest

from lenbias.corpus import Corpus, Document


def make_docs(lengths_by_label, text_for=None):
    """One document per (label, length) entry; text is `length` repeated words."""
    docs = []
    for label, lengths in sorted(lengths_by_label.items()):
        for i, length in enumerate(lengths):
            text = " ".join(text_for(label, length, i) if text_for else ["w"] * length)
            docs.append(
                Document(id=f"d{label}-{i}", label=label, text=text, token_count=length)
            )
    return docs


def make_corpus(lengths_by_label, **kwargs):
    labels = tuple(sorted(lengths_by_label))
    return Corpus(documents=tuple(make_docs(lengths_by_label)), labels=labels, **kwargs)


@pytest.fixture
def write_jsonl(tmp_path):
    def _write(records, name="corpus.jsonl"):
        path = tmp_path / name
        with path.open("w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")
        return path

    return _write
