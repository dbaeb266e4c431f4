"""Deterministic text embedding via signed feature hashing.

Every entity's metadata is flattened to text and mapped into a 256-dim
unit vector.  The default embedder is fully deterministic across runs
and platforms (no model weights, no RNG), which keeps search results
reproducible and testable.  Anything satisfying :class:`Embedder` can be
plugged in instead, as long as it honors the same output contract
(dimension ``DIM``, unit L2 norm or exactly zero).
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import List, Protocol

import numpy as np

DIM = 256

_FNV_OFFSET = 14695981039346656037
_FNV_PRIME = 1099511628211
_MASK64 = 0xFFFFFFFFFFFFFFFF

_SPLIT = re.compile(r"[\W_]+", re.UNICODE)


def tokenize(text: str) -> List[str]:
    """Lowercase and split on every non-alphanumeric character."""
    return [t for t in _SPLIT.split(text.lower()) if t]


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    return h


@lru_cache(maxsize=65536)
def _token_slot(token: str) -> tuple[int, float]:
    h = fnv1a_64(token.encode("utf-8"))
    sign = 1.0 if (h >> 63) == 0 else -1.0
    return h % DIM, sign


def embed_text(text: str) -> np.ndarray:
    """Hash tokens into signed buckets, then L2-normalize.

    The zero vector (empty text, or exact sign cancellation) is returned
    unnormalized.
    """
    vec = np.zeros(DIM, dtype=np.float64)
    for token in tokenize(text):
        bucket, sign = _token_slot(token)
        vec[bucket] += sign
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


class Embedder(Protocol):
    """Plug point for external embedding models (same output contract)."""

    def embed(self, text: str) -> np.ndarray: ...


class HashingEmbedder:
    """Default embedder: the feature-hashing scheme above."""

    dim = DIM

    def embed(self, text: str) -> np.ndarray:
        return embed_text(text)
