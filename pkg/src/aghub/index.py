"""Semantic index: metadata embeddings, filtered search, 2D projection.

The index keeps one (vector, facet record) pair per live entity.  Search
is exact brute-force cosine over unit vectors (a dot product), filtered
by a conjunctive facet query and by requester visibility.  Projection to
2D uses the top two principal components of the selected vectors.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .embedding import Embedder, HashingEmbedder
from .errors import InvalidFilterError, UnknownEntityError
from .store import JsonlStore

FACET_FIELDS = (
    "path",
    "mode",
    "format",
    "category",
    "labels",
    "privilege",
    "realtime",
    "time_range",
    "geo",
    "owner",
)


def metadata_to_text(doc: Dict[str, Any]) -> str:
    """Flatten a metadata doc to the text that gets embedded.

    Fixed order: last path segment, mode, format, category, sorted
    labels, description; empty fields collapse away.
    """
    parts = [
        doc["path"].rsplit("/", 1)[-1],
        doc["mode"],
        doc["format"],
        doc.get("category", ""),
    ]
    parts.extend(sorted(doc.get("labels", [])))
    parts.append(doc.get("description", ""))
    return " ".join(p for p in parts if p)


@dataclass(frozen=True)
class QueryFilter:
    """Conjunctive facet filter; absent fields do not constrain."""

    mode: Optional[str] = None
    format: Optional[str] = None
    category: Optional[str] = None
    labels: Optional[frozenset[str]] = None
    privilege: Optional[str] = None
    realtime: Optional[bool] = None
    time_range: Optional[Tuple[float, float]] = None
    spatial_bbox: Optional[Dict[str, float]] = None

    def validate(self) -> None:
        if self.time_range is not None:
            start, end = self.time_range
            if start > end:
                raise InvalidFilterError("time_range start exceeds end")
        if self.spatial_bbox is not None:
            b = self.spatial_bbox
            missing = {"min_lat", "min_lon", "max_lat", "max_lon"} - set(b)
            if missing:
                raise InvalidFilterError(f"bbox missing {sorted(missing)}")
            if b["min_lat"] > b["max_lat"] or b["min_lon"] > b["max_lon"]:
                raise InvalidFilterError("bbox min exceeds max")

    def matches(self, facets: Dict[str, Any]) -> bool:
        if self.mode is not None and facets["mode"] != self.mode:
            return False
        if self.format is not None and facets["format"] != self.format:
            return False
        if self.category is not None and facets["category"] != self.category:
            return False
        if self.labels is not None:
            if not self.labels & set(facets.get("labels", [])):
                return False
        if self.privilege is not None and facets["privilege"] != self.privilege:
            return False
        if self.realtime is not None and facets["realtime"] != self.realtime:
            return False
        if self.time_range is not None:
            cand = facets.get("time_range")
            if cand is None:
                return False
            if cand[0] > self.time_range[1] or self.time_range[0] > cand[1]:
                return False
        if self.spatial_bbox is not None:
            if not _geo_matches(facets.get("geo"), self.spatial_bbox):
                return False
        return True


def _geo_matches(geo: Optional[Dict[str, float]], bbox: Dict[str, float]) -> bool:
    if geo is None:
        return False
    if "lat" in geo:
        return (
            bbox["min_lat"] <= geo["lat"] <= bbox["max_lat"]
            and bbox["min_lon"] <= geo["lon"] <= bbox["max_lon"]
        )
    # candidate bbox: intersect on both axes
    return (
        geo["min_lat"] <= bbox["max_lat"]
        and bbox["min_lat"] <= geo["max_lat"]
        and geo["min_lon"] <= bbox["max_lon"]
        and bbox["min_lon"] <= geo["max_lon"]
    )


@dataclass(frozen=True)
class SearchHit:
    entity_id: str
    path: str
    similarity: float
    mode: str

    def to_doc(self) -> Dict[str, Any]:
        return {
            "entity_id": self.entity_id,
            "path": self.path,
            "similarity": self.similarity,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class ProjectionPoint:
    entity_id: str
    x: float
    y: float
    mode: str

    def to_doc(self) -> Dict[str, Any]:
        return {"entity_id": self.entity_id, "x": self.x, "y": self.y, "mode": self.mode}


class SemanticIndex:
    """Exact-search vector index over entity metadata.

    Thread contract: mutations take the lock exclusively; searches copy a
    consistent snapshot under the lock and rank outside it.
    """

    def __init__(self, store: Optional[JsonlStore] = None, embedder: Optional[Embedder] = None):
        self._embedder = embedder or HashingEmbedder()
        self._store = store
        self._lock = threading.RLock()
        self._vectors: Dict[str, np.ndarray] = {}
        self._facets: Dict[str, Dict[str, Any]] = {}
        if store is not None:
            for entity_id, doc in store.load().items():
                self._vectors[entity_id] = np.asarray(doc["vector"], dtype=np.float64)
                self._facets[entity_id] = doc["facets"]

    def upsert(self, entity_id: str, doc: Dict[str, Any]) -> None:
        vector = self._embedder.embed(metadata_to_text(doc))
        facets = {k: doc[k] for k in FACET_FIELDS}
        with self._lock:
            self._vectors[entity_id] = vector
            self._facets[entity_id] = facets
            if self._store is not None:
                self._store.put(entity_id, {"vector": vector.tolist(), "facets": facets})

    def remove(self, entity_id: str) -> None:
        with self._lock:
            existed = entity_id in self._vectors
            self._vectors.pop(entity_id, None)
            self._facets.pop(entity_id, None)
            if existed and self._store is not None:
                self._store.delete(entity_id)

    def __contains__(self, entity_id: str) -> bool:
        with self._lock:
            return entity_id in self._vectors

    def entity_ids(self) -> List[str]:
        with self._lock:
            return list(self._vectors)

    def _snapshot(self) -> Tuple[Dict[str, np.ndarray], Dict[str, Dict[str, Any]]]:
        with self._lock:
            return dict(self._vectors), dict(self._facets)

    def search(
        self,
        query_text: str,
        query_filter: Optional[QueryFilter],
        k: int,
        requesting_user: Optional[str],
    ) -> List[SearchHit]:
        if k < 1:
            raise InvalidFilterError("k must be >= 1")
        flt = query_filter or QueryFilter()
        flt.validate()
        vectors, facets = self._snapshot()
        qv = self._embedder.embed(query_text)
        hits: List[SearchHit] = []
        for entity_id, fac in facets.items():
            if not _visible(fac, requesting_user):
                continue
            if not flt.matches(fac):
                continue
            similarity = float(np.dot(qv, vectors[entity_id]))
            hits.append(SearchHit(entity_id, fac["path"], similarity, fac["mode"]))
        hits.sort(key=lambda h: (-h.similarity, h.path))
        return hits[:k]

    def project_2d(self, entity_ids: Sequence[str]) -> List[ProjectionPoint]:
        """Project the given entities onto their top-2 principal components.

        Sign convention: each axis is flipped so its largest-magnitude
        coordinate is positive.  Degenerate sets (single point, zero
        variance, vanishing component) collapse to the origin on the
        affected axes.
        """
        if not entity_ids:
            return []
        with self._lock:
            missing = [e for e in entity_ids if e not in self._vectors]
            if missing:
                raise UnknownEntityError(f"not indexed: {missing[0]}")
            mat = np.stack([self._vectors[e] for e in entity_ids])
            modes = [self._facets[e]["mode"] for e in entity_ids]
        centered = mat - mat.mean(axis=0)
        coords = np.zeros((len(entity_ids), 2), dtype=np.float64)
        if len(entity_ids) > 1:
            u, s, _ = np.linalg.svd(centered, full_matrices=False)
            tol = max(s[0], 0.0) * 1e-12
            for j in range(min(2, s.size)):
                if s[j] > tol and s[j] > 0.0:
                    coords[:, j] = u[:, j] * s[j]
            for j in range(2):
                extreme = np.argmax(np.abs(coords[:, j]))
                if coords[extreme, j] < 0:
                    coords[:, j] = -coords[:, j]
        return [
            ProjectionPoint(e, float(coords[i, 0]), float(coords[i, 1]), modes[i])
            for i, e in enumerate(entity_ids)
        ]


def _visible(facets: Dict[str, Any], requesting_user: Optional[str]) -> bool:
    return facets["privilege"] == "public" or facets["owner"] == requesting_user
