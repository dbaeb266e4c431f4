"""Canonical JSON serialization and content hashing.

Canonical form: UTF-8, object keys sorted ascending by code point, no
insignificant whitespace, integers in shortest decimal form, floats via
shortest round-trip repr.  Two serializations of equal values are
byte-identical, which is what the golden-file API tests rely on.

Content hashing is SHA-256 over raw bytes, lowercase hex.  The empty
input hashes to
e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(value: Any) -> str:
    return json.dumps(
        value,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )


def canonical_bytes(value: Any) -> bytes:
    return canonical_json(value).encode("utf-8")


def content_hash(data: bytes) -> str:
    """Hex digest of the content hash used for every stored entity."""
    return hashlib.sha256(data).hexdigest()
