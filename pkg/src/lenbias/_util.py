"""Shared helpers: stable hashing, seeded RNG derivation, atomic file writes."""

import hashlib
import json
import os
import tempfile

import numpy as np

_SEP = "\x1f"


def stable_hash64(*parts) -> int:
    """64-bit hash of the given parts, stable across processes and platforms."""
    payload = _SEP.join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "big")


def derive_seed(root_seed: int, *labels) -> int:
    """Derive a stage seed from the root seed and a stage label path."""
    return stable_hash64(root_seed, *labels)


def derive_rng(root_seed: int, *labels) -> np.random.Generator:
    return np.random.default_rng(derive_seed(root_seed, *labels))


def unit_float(h: int) -> float:
    """Map a 64-bit hash to [0, 1)."""
    return (h >> 11) / float(1 << 53)


def atomic_write_text(path, text: str) -> None:
    """Write text to path via a temp file and rename, so readers never see partial output."""
    path = os.fspath(path)
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")
