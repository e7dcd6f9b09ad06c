"""Deterministic, order-independent random streams.

Every stochastic operation in the package draws from a stream derived
from an explicit 64-bit seed plus the identifiers of the unit of work
(restart index, image label, replicate index, ...).  Streams are backed
by the counter-based Philox generator, so work units can run in any
order or in parallel without changing a single drawn value.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_rng(seed: int, *parts: int | str) -> np.random.Generator:
    """Return a Generator keyed by ``seed`` and the given stream parts."""
    h = hashlib.sha256()
    h.update(int(np.uint64(seed)).to_bytes(8, "little"))
    for part in parts:
        if isinstance(part, str):
            data = part.encode("utf-8")
            h.update(b"s" + len(data).to_bytes(4, "little") + data)
        else:
            h.update(b"i" + int(np.uint64(part)).to_bytes(8, "little"))
    key = np.frombuffer(h.digest()[:16], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
