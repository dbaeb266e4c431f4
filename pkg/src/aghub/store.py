"""On-disk persistence.

Each logical store is one append-or-replace document file: a JSONL file
where every line is a canonical-JSON record ``{"op": "put"|"del",
"id": ..., "doc": ...}``.  Loading replays the file, last write wins.
Desk-scale corpora make compaction unnecessary.

Content bytes live outside the document files, one file per entity under
``<root>/content/<entity-id>``; the physical name is derived from the
entity id and never from the logical path.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

import json

from .canonical import canonical_json


class JsonlStore:
    """Append-or-replace document store backed by a single JSONL file."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def load(self) -> Dict[str, Any]:
        docs: Dict[str, Any] = {}
        if not self.path.exists():
            return docs
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if rec["op"] == "put":
                    docs[rec["id"]] = rec["doc"]
                elif rec["op"] == "del":
                    docs.pop(rec["id"], None)
        return docs

    def put(self, doc_id: str, doc: Any) -> None:
        self._append({"op": "put", "id": doc_id, "doc": doc})

    def delete(self, doc_id: str) -> None:
        self._append({"op": "del", "id": doc_id})

    def _append(self, rec: Dict[str, Any]) -> None:
        line = canonical_json(rec) + "\n"
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())


class AppendLog:
    """Pure append-only log of canonical-JSON lines (provenance uses this)."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, rec: Any) -> None:
        line = canonical_json(rec) + "\n"
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())

    def replay(self) -> Iterator[Any]:
        if not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)


class ContentStore:
    """Flat directory of content files named by entity id."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, entity_id: str) -> Path:
        return self.root / entity_id

    def write(self, entity_id: str, data: bytes) -> None:
        self._path(entity_id).write_bytes(data)

    def read(self, entity_id: str) -> bytes:
        return self._path(entity_id).read_bytes()

    def copy(self, src_id: str, dst_id: str) -> None:
        self.write(dst_id, self.read(src_id))

    def remove(self, entity_id: str) -> None:
        try:
            self._path(entity_id).unlink()
        except FileNotFoundError:
            pass

    def exists(self, entity_id: str) -> bool:
        return self._path(entity_id).exists()

    def size(self, entity_id: str) -> Optional[int]:
        p = self._path(entity_id)
        return p.stat().st_size if p.exists() else None
