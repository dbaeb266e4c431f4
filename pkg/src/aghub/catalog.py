"""Catalog of users, entities, logical paths, metadata, and collections.

Logical paths form a single global namespace across all modes; physical
content is stored by entity id, never by path, so metadata edits and
moves never touch content bytes.  Visibility is two-level (private to
the owner, or public); a failed visibility check is reported exactly
like absence so private paths cannot be probed.

The virtual folder ``/<user>/ag_data/public_data`` is synthesized on
read: it exposes every public entity of every other user, remapped to
``/<user>/ag_data/public_data/<owner>/<path relative to that owner's
data root>``.
"""

from __future__ import annotations

import dataclasses
import hmac
import re
import secrets
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Set, Tuple

from .canonical import content_hash
from .errors import (
    DuplicateMemberError,
    DuplicateUsernameError,
    ImmutableFieldError,
    InvalidMetadataError,
    InvalidPathError,
    InvalidUsernameError,
    IsFolderError,
    CycleError,
    MissingParentError,
    NotACollectionError,
    NotFoundError,
    PathConflictError,
    PermissionDeniedError,
    SelfMemberError,
)
from .index import SemanticIndex
from .provenance import ProvenanceLog
from .store import AppendLog, ContentStore, JsonlStore

MODES = ("data", "tool", "model", "collection")
FOLDER_MODES = ("data", "tool", "model")
PRIVILEGES = ("public", "private")
MUTABLE_FIELDS = ("category", "labels", "description", "realtime", "time_range", "geo")

DATA_ROOT_NAME = "ag_data"
PUBLIC_DATA_NAME = "public_data"

_USERNAME_RE = re.compile(r"^[a-z0-9_]{1,32}$")
_SEGMENT_RE = re.compile(r"^[A-Za-z0-9._-]+$")

_VIRTUAL_NS = uuid.UUID("6ba7b812-9dad-11d1-80b4-00c04fd430c8")  # uuid5 namespace


def validate_username(username: str) -> None:
    if not _USERNAME_RE.match(username or ""):
        raise InvalidUsernameError(f"invalid username {username!r}")


def validate_path(path: str) -> None:
    if not path.startswith("/") or path.endswith("/") or path == "/":
        raise InvalidPathError(f"invalid path {path!r}")
    for segment in path[1:].split("/"):
        if not _SEGMENT_RE.match(segment) or segment in (".", ".."):
            raise InvalidPathError(f"invalid path segment {segment!r}")


def path_owner(path: str) -> str:
    return path[1:].split("/", 1)[0]


def parent_path(path: str) -> str:
    return path.rsplit("/", 1)[0]


def format_of(name: str) -> str:
    stem, sep, ext = name.rpartition(".")
    if sep and stem:
        return ext.lower()
    return "none"


@dataclass
class UserAccount:
    username: str
    api_key: str
    created_at: int

    def to_doc(self) -> Dict[str, Any]:
        return {
            "username": self.username,
            "api_key": self.api_key,
            "created_at": self.created_at,
        }


@dataclass
class MetadataDoc:
    entity_id: str
    path: str
    mode: str
    is_folder: bool
    owner: str
    format: str
    category: str
    labels: Set[str]
    privilege: str
    realtime: bool
    time_range: Optional[Tuple[int, int]]
    geo: Optional[Dict[str, float]]
    description: str
    size_bytes: int
    content_hash: str
    created_at: int
    updated_at: int

    def to_doc(self) -> Dict[str, Any]:
        return {
            "entity_id": self.entity_id,
            "path": self.path,
            "mode": self.mode,
            "is_folder": self.is_folder,
            "owner": self.owner,
            "format": self.format,
            "category": self.category,
            "labels": sorted(self.labels),
            "privilege": self.privilege,
            "realtime": self.realtime,
            "time_range": list(self.time_range) if self.time_range else None,
            "geo": dict(self.geo) if self.geo else None,
            "description": self.description,
            "size_bytes": self.size_bytes,
            "content_hash": self.content_hash,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_doc(cls, doc: Dict[str, Any]) -> "MetadataDoc":
        return cls(
            entity_id=doc["entity_id"],
            path=doc["path"],
            mode=doc["mode"],
            is_folder=doc["is_folder"],
            owner=doc["owner"],
            format=doc["format"],
            category=doc["category"],
            labels=set(doc["labels"]),
            privilege=doc["privilege"],
            realtime=doc["realtime"],
            time_range=tuple(doc["time_range"]) if doc["time_range"] else None,
            geo=doc["geo"],
            description=doc["description"],
            size_bytes=doc["size_bytes"],
            content_hash=doc["content_hash"],
            created_at=doc["created_at"],
            updated_at=doc["updated_at"],
        )

    def copy(self) -> "MetadataDoc":
        dup = dataclasses.replace(self)
        dup.labels = set(self.labels)
        dup.geo = dict(self.geo) if self.geo else None
        return dup

    def visible_to(self, user: Optional[str]) -> bool:
        return self.privilege == "public" or self.owner == user


class Catalog:
    """All catalog state and operations; every public method is atomic."""

    def __init__(
        self,
        root: Path,
        index: SemanticIndex,
        provenance: ProvenanceLog,
        id_factory: Optional[Callable[[], str]] = None,
        key_factory: Optional[Callable[[], str]] = None,
        clock: Optional[Callable[[], int]] = None,
    ):
        self.root = Path(root)
        self.index = index
        self.provenance = provenance
        self._new_id = id_factory or (lambda: str(uuid.uuid4()))
        self._new_key = key_factory or (lambda: secrets.token_hex(32))
        self._clock = clock or (lambda: int(time.time()))
        self._lock = threading.RLock()

        self._users_store = JsonlStore(self.root / "users.jsonl")
        self._entities_store = JsonlStore(self.root / "entities.jsonl")
        self._collections_store = JsonlStore(self.root / "collections.jsonl")
        self._audit = AppendLog(self.root / "audit.jsonl")
        self.content = ContentStore(self.root / "content")

        self._users: Dict[str, UserAccount] = {
            name: UserAccount(**doc) for name, doc in self._users_store.load().items()
        }
        self._entities: Dict[str, MetadataDoc] = {
            eid: MetadataDoc.from_doc(doc)
            for eid, doc in self._entities_store.load().items()
        }
        self._by_path: Dict[str, str] = {
            doc.path: eid for eid, doc in self._entities.items()
        }
        self._collections: Dict[str, List[str]] = {
            eid: doc["members"] for eid, doc in self._collections_store.load().items()
        }

    # -- internal helpers ----------------------------------------------

    def _now(self) -> int:
        return self._clock()

    def _persist(self, doc: MetadataDoc) -> None:
        self._entities_store.put(doc.entity_id, doc.to_doc())

    def _live_doc(self, path: str) -> Optional[MetadataDoc]:
        eid = self._by_path.get(path)
        return self._entities.get(eid) if eid else None

    def _require_visible(self, path: str, user: Optional[str]) -> MetadataDoc:
        doc = self._live_doc(path)
        if doc is None or not doc.visible_to(user):
            raise NotFoundError(path)
        return doc

    def _require_owned(self, path: str, actor: str) -> MetadataDoc:
        doc = self._require_visible(path, actor)
        if doc.owner != actor:
            raise PermissionDeniedError(path)
        return doc

    def _subtree(self, path: str) -> List[MetadataDoc]:
        prefix = path + "/"
        docs = [
            doc
            for doc in self._entities.values()
            if doc.path == path or doc.path.startswith(prefix)
        ]
        docs.sort(key=lambda d: d.path)
        return docs

    def _check_creatable(self, actor: str, path: str) -> None:
        validate_path(path)
        if path_owner(path) != actor:
            raise PermissionDeniedError(f"{actor} does not own {path}")
        if path in self._by_path:
            raise PathConflictError(path)
        if path == f"{self._data_root_of(actor)}/{PUBLIC_DATA_NAME}":
            # occupied by the synthesized public_data folder
            raise PathConflictError(path)
        parent = self._live_doc(parent_path(path))
        if parent is None or not parent.is_folder:
            raise MissingParentError(parent_path(path))

    def _register(self, doc: MetadataDoc, edge_kind: str, args: str) -> None:
        self._entities[doc.entity_id] = doc
        self._by_path[doc.path] = doc.entity_id
        self._persist(doc)
        self.index.upsert(doc.entity_id, doc.to_doc())
        self.provenance.add_node(doc.entity_id, doc.path)
        self.provenance.record_operation(
            edge_kind, [], [doc.entity_id], doc.owner, args=args, timestamp=doc.created_at
        )

    def _new_doc(self, actor, path, mode, is_folder, size, chash, now, **meta) -> MetadataDoc:
        doc = MetadataDoc(
            entity_id=self._new_id(),
            path=path,
            mode=mode,
            is_folder=is_folder,
            owner=actor,
            format="none" if is_folder else format_of(path.rsplit("/", 1)[-1]),
            category="",
            labels=set(),
            privilege="private",
            realtime=False,
            time_range=None,
            geo=None,
            description="",
            size_bytes=size,
            content_hash=chash,
            created_at=now,
            updated_at=now,
        )
        if meta:
            _apply_patch(doc, _validated_patch(meta))
            doc.updated_at = now
        return doc

    # -- users -----------------------------------------------------------

    def create_user(self, username: str) -> UserAccount:
        validate_username(username)
        with self._lock:
            if username in self._users:
                raise DuplicateUsernameError(username)
            now = self._now()
            account = UserAccount(username, self._new_key(), now)
            self._users[username] = account
            self._users_store.put(username, account.to_doc())
            data_root = f"/{username}/{DATA_ROOT_NAME}"
            doc = self._new_doc(username, data_root, "data", True, 0, "", now)
            self._register(doc, "create", "null")
            return account

    def user_by_key(self, api_key: str) -> Optional[str]:
        # constant-time comparison over every account: no timing oracle
        found = None
        with self._lock:
            for account in self._users.values():
                if hmac.compare_digest(account.api_key, api_key):
                    found = account.username
        return found

    def user_exists(self, username: str) -> bool:
        with self._lock:
            return username in self._users

    def account(self, username: str) -> UserAccount:
        with self._lock:
            if username not in self._users:
                raise NotFoundError(username)
            return self._users[username]

    # -- entity creation ---------------------------------------------------

    def upload_entity(
        self,
        actor: str,
        path: str,
        mode: str,
        content: bytes,
        meta_patch: Optional[Dict[str, Any]] = None,
        _edge_kind: str = "upload",
        _edge_args: str = "external",
        _record_edge: bool = True,
    ) -> str:
        if mode not in FOLDER_MODES:
            raise InvalidMetadataError(f"mode {mode!r} cannot be uploaded")
        with self._lock:
            self._check_creatable(actor, path)
            now = self._now()
            doc = self._new_doc(
                actor, path, mode, False, len(content), content_hash(content),
                now, **(meta_patch or {}),
            )
            self.content.write(doc.entity_id, content)
            if _record_edge:
                self._register(doc, _edge_kind, _edge_args)
            else:
                self._entities[doc.entity_id] = doc
                self._by_path[doc.path] = doc.entity_id
                self._persist(doc)
                self.index.upsert(doc.entity_id, doc.to_doc())
                self.provenance.add_node(doc.entity_id, doc.path)
            return doc.entity_id

    def create_folder(self, actor: str, path: str, mode: str = "data") -> str:
        if mode not in FOLDER_MODES:
            raise InvalidMetadataError(f"mode {mode!r} is not a folder mode")
        with self._lock:
            self._check_creatable(actor, path)
            doc = self._new_doc(actor, path, mode, True, 0, "", self._now())
            self._register(doc, "create", "null")
            return doc.entity_id

    # -- reads -----------------------------------------------------------

    def get_metadata(self, path: str, requesting_user: Optional[str]) -> MetadataDoc:
        validate_path(path)
        with self._lock:
            virt = _split_virtual(path)
            if virt is not None:
                return self._virtual_metadata(path, virt)
            return self._require_visible(path, requesting_user).copy()

    def read_content(self, path: str, requesting_user: Optional[str]) -> bytes:
        with self._lock:
            doc = self.get_metadata(path, requesting_user)
            if doc.is_folder:
                raise IsFolderError(path)
            return self.content.read(doc.entity_id)

    def list_children(self, path: str, requesting_user: Optional[str]) -> List[MetadataDoc]:
        validate_path(path)
        with self._lock:
            virt = _split_virtual(path)
            if virt is not None:
                tree_owner, remainder = virt
                if not self.user_exists(tree_owner):
                    raise NotFoundError(path)
                entries = [
                    d for d in self._public_docs_for(tree_owner)
                    if d.path.startswith(path + "/")
                ]
                entries.sort(key=lambda d: d.path)
                return entries
            doc = self._require_visible(path, requesting_user)
            prefix = path + "/"
            children = [
                d.copy()
                for d in self._entities.values()
                if parent_path(d.path) == path and d.visible_to(requesting_user)
            ]
            if doc.is_folder and path == self._data_root_of(path_owner(path)):
                children.append(self._public_data_folder_doc(path_owner(path)))
            children.sort(key=lambda d: d.path)
            return children

    def _data_root_of(self, username: str) -> str:
        return f"/{username}/{DATA_ROOT_NAME}"

    # -- virtual public_data ----------------------------------------------

    def _public_data_folder_doc(self, tree_owner: str) -> MetadataDoc:
        account = self._users[tree_owner]
        virtual_path = f"{self._data_root_of(tree_owner)}/{PUBLIC_DATA_NAME}"
        return MetadataDoc(
            entity_id=str(uuid.uuid5(_VIRTUAL_NS, f"public_data:{tree_owner}")),
            path=virtual_path,
            mode="data",
            is_folder=True,
            owner=tree_owner,
            format="none",
            category="",
            labels=set(),
            privilege="public",
            realtime=False,
            time_range=None,
            geo=None,
            description="public data from other users",
            size_bytes=0,
            content_hash="",
            created_at=account.created_at,
            updated_at=account.created_at,
        )

    def _public_docs_for(self, tree_owner: str) -> List[MetadataDoc]:
        """Every other user's public entity, remapped into the virtual tree."""
        base = f"{self._data_root_of(tree_owner)}/{PUBLIC_DATA_NAME}"
        remapped = []
        for doc in self._entities.values():
            if doc.owner == tree_owner or doc.privilege != "public":
                continue
            owner_root = self._data_root_of(doc.owner)
            if doc.path != owner_root and not doc.path.startswith(owner_root + "/"):
                continue
            relative = doc.path[len(owner_root):]
            dup = doc.copy()
            dup.path = f"{base}/{doc.owner}{relative}"
            remapped.append(dup)
        return remapped

    def public_entries_for(self, tree_owner: str) -> List[MetadataDoc]:
        """Full flattened contents of the user's public_data virtual folder."""
        with self._lock:
            if not self.user_exists(tree_owner):
                raise NotFoundError(tree_owner)
            return sorted(self._public_docs_for(tree_owner), key=lambda d: d.path)

    def _virtual_metadata(self, path: str, virt: Tuple[str, str]) -> MetadataDoc:
        tree_owner, remainder = virt
        if not self.user_exists(tree_owner):
            raise NotFoundError(path)
        if remainder == "":
            return self._public_data_folder_doc(tree_owner)
        for doc in self._public_docs_for(tree_owner):
            if doc.path == path:
                return doc
        raise NotFoundError(path)

    # -- metadata updates ---------------------------------------------------

    def update_metadata(self, actor: str, path: str, patch: Dict[str, Any]) -> MetadataDoc:
        validate_path(path)
        with self._lock:
            doc = self._require_owned(path, actor)
            clean = _validated_patch(patch)
            _apply_patch(doc, clean)
            doc.updated_at = max(self._now(), doc.updated_at)
            self._persist(doc)
            self.index.upsert(doc.entity_id, doc.to_doc())
            self._audit.append(
                {
                    "op": "update_metadata",
                    "actor": actor,
                    "path": path,
                    "fields": sorted(clean),
                    "timestamp": doc.updated_at,
                }
            )
            return doc.copy()

    def set_visibility(self, actor: str, path: str, privilege: str) -> List[str]:
        if privilege not in PRIVILEGES:
            raise InvalidMetadataError(f"privilege {privilege!r}")
        with self._lock:
            self._require_owned(path, actor)
            now = self._now()
            affected = []
            for doc in self._subtree(path):
                doc.privilege = privilege
                doc.updated_at = max(now, doc.updated_at)
                self._persist(doc)
                self.index.upsert(doc.entity_id, doc.to_doc())
                affected.append(doc.path)
            self._audit.append(
                {
                    "op": "set_visibility",
                    "actor": actor,
                    "path": path,
                    "privilege": privilege,
                    "affected": len(affected),
                    "timestamp": now,
                }
            )
            return affected

    # -- delete / move / copy ------------------------------------------------

    def delete_entity(self, actor: str, path: str) -> List[str]:
        validate_path(path)
        with self._lock:
            self._require_owned(path, actor)
            if path == self._data_root_of(actor):
                raise PermissionDeniedError("data root cannot be deleted")
            removed = []
            for doc in self._subtree(path):
                del self._entities[doc.entity_id]
                del self._by_path[doc.path]
                self._entities_store.delete(doc.entity_id)
                self.index.remove(doc.entity_id)
                if not doc.is_folder:
                    self.content.remove(doc.entity_id)
                if doc.entity_id in self._collections:
                    del self._collections[doc.entity_id]
                    self._collections_store.delete(doc.entity_id)
                self.provenance.mark_deleted(doc.entity_id)
                removed.append(doc.entity_id)
            self._prune_memberships(set(removed))
            return removed

    def _prune_memberships(self, gone: Set[str]) -> None:
        for cid, members in self._collections.items():
            kept = [m for m in members if m not in gone]
            if len(kept) != len(members):
                self._collections[cid] = kept
                self._collections_store.put(cid, {"members": kept})

    def move_entity(self, actor: str, src: str, dst: str) -> MetadataDoc:
        validate_path(src)
        validate_path(dst)
        with self._lock:
            doc = self._require_owned(src, actor)
            if src == self._data_root_of(actor):
                raise PermissionDeniedError("data root cannot be moved")
            if dst == src or dst.startswith(src + "/"):
                raise CycleError(f"{dst} is inside {src}")
            self._check_creatable(actor, dst)
            now = self._now()
            for sub in self._subtree(src):
                del self._by_path[sub.path]
                sub.path = dst + sub.path[len(src):]
                sub.updated_at = max(now, sub.updated_at)
                self._by_path[sub.path] = sub.entity_id
                self._persist(sub)
                self.index.upsert(sub.entity_id, sub.to_doc())
            self.provenance.record_operation(
                "move", [doc.entity_id], [doc.entity_id], actor,
                args=f"{src} -> {dst}", timestamp=now,
            )
            return doc.copy()

    def copy_entity(self, actor: str, src: str, dst: str) -> str:
        validate_path(src)
        validate_path(dst)
        with self._lock:
            self._require_owned(src, actor)
            if dst == src or dst.startswith(src + "/"):
                raise CycleError(f"{dst} is inside {src}")
            self._check_creatable(actor, dst)
            now = self._now()
            root_id = None
            for sub in self._subtree(src):
                dup = sub.copy()
                dup.entity_id = self._new_id()
                dup.path = dst + sub.path[len(src):]
                dup.privilege = "private"
                dup.created_at = now
                dup.updated_at = now
                if not dup.is_folder:
                    self.content.copy(sub.entity_id, dup.entity_id)
                self._entities[dup.entity_id] = dup
                self._by_path[dup.path] = dup.entity_id
                self._persist(dup)
                self.index.upsert(dup.entity_id, dup.to_doc())
                self.provenance.add_node(dup.entity_id, dup.path)
                self.provenance.record_operation(
                    "copy", [sub.entity_id], [dup.entity_id], actor,
                    args=f"{sub.path} -> {dup.path}", timestamp=now,
                )
                if sub.entity_id in self._collections:
                    members = list(self._collections[sub.entity_id])
                    self._collections[dup.entity_id] = members
                    self._collections_store.put(dup.entity_id, {"members": members})
                if root_id is None:
                    root_id = dup.entity_id
            assert root_id is not None
            return root_id

    # -- collections -----------------------------------------------------

    def create_collection(self, actor: str, path: str) -> str:
        with self._lock:
            self._check_creatable(actor, path)
            doc = self._new_doc(actor, path, "collection", True, 0, "", self._now())
            self._register(doc, "create", "null")
            self._collections[doc.entity_id] = []
            self._collections_store.put(doc.entity_id, {"members": []})
            return doc.entity_id

    def _require_collection(self, actor: str, path: str) -> MetadataDoc:
        doc = self._require_owned(path, actor)
        if doc.mode != "collection":
            raise NotACollectionError(path)
        return doc

    def add_member(self, actor: str, collection_path: str, member_path: str) -> None:
        with self._lock:
            coll = self._require_collection(actor, collection_path)
            member = self._require_visible(member_path, actor)
            if member.entity_id == coll.entity_id:
                raise SelfMemberError(member_path)
            members = self._collections[coll.entity_id]
            if member.entity_id in members:
                raise DuplicateMemberError(member_path)
            members.append(member.entity_id)
            self._collections_store.put(coll.entity_id, {"members": members})
            self._touch(coll)

    def remove_member(self, actor: str, collection_path: str, member_path: str) -> None:
        with self._lock:
            coll = self._require_collection(actor, collection_path)
            member = self._require_visible(member_path, actor)
            members = self._collections[coll.entity_id]
            if member.entity_id not in members:
                raise NotFoundError(f"{member_path} not in collection")
            members.remove(member.entity_id)
            self._collections_store.put(coll.entity_id, {"members": members})
            self._touch(coll)

    def collection_members(self, path: str, requesting_user: Optional[str]) -> List[MetadataDoc]:
        with self._lock:
            doc = self._require_visible(path, requesting_user)
            if doc.mode != "collection":
                raise NotACollectionError(path)
            docs = []
            for member_id in self._collections.get(doc.entity_id, []):
                member = self._entities.get(member_id)
                if member is not None and member.visible_to(requesting_user):
                    docs.append(member.copy())
            return docs

    def _touch(self, doc: MetadataDoc) -> None:
        doc.updated_at = max(self._now(), doc.updated_at)
        self._persist(doc)
        self.index.upsert(doc.entity_id, doc.to_doc())

    # -- misc ------------------------------------------------------------

    def doc_by_id(self, entity_id: str) -> Optional[MetadataDoc]:
        with self._lock:
            doc = self._entities.get(entity_id)
            return doc.copy() if doc else None

    def all_docs(self) -> List[MetadataDoc]:
        with self._lock:
            return sorted((d.copy() for d in self._entities.values()), key=lambda d: d.path)


def _validated_patch(patch: Dict[str, Any]) -> Dict[str, Any]:
    clean: Dict[str, Any] = {}
    for key, value in patch.items():
        if key not in MUTABLE_FIELDS:
            raise ImmutableFieldError(key)
        clean[key] = _validate_field(key, value)
    return clean


def _validate_field(key: str, value: Any) -> Any:
    if key in ("category", "description"):
        if not isinstance(value, str):
            raise InvalidMetadataError(f"{key} must be a string")
        return value
    if key == "labels":
        if isinstance(value, str) or not all(isinstance(v, str) for v in value):
            raise InvalidMetadataError("labels must be a set of strings")
        return set(value)
    if key == "realtime":
        if not isinstance(value, bool):
            raise InvalidMetadataError("realtime must be a boolean")
        return value
    if key == "time_range":
        if value is None:
            return None
        try:
            start, end = value
        except (TypeError, ValueError):
            raise InvalidMetadataError("time_range must be [start, end]") from None
        if not all(isinstance(v, (int, float)) for v in (start, end)) or start > end:
            raise InvalidMetadataError("time_range start must not exceed end")
        return (start, end)
    if key == "geo":
        return _validate_geo(value)
    raise ImmutableFieldError(key)


def _validate_geo(value: Any) -> Optional[Dict[str, float]]:
    if value is None:
        return None
    if not isinstance(value, dict):
        raise InvalidMetadataError("geo must be a point or bbox object")
    keys = set(value)
    if keys == {"lat", "lon"}:
        lat, lon = value["lat"], value["lon"]
        if not (-90 <= lat <= 90 and -180 <= lon <= 180):
            raise InvalidMetadataError("geo point out of range")
        return {"lat": float(lat), "lon": float(lon)}
    if keys == {"min_lat", "min_lon", "max_lat", "max_lon"}:
        if value["min_lat"] > value["max_lat"] or value["min_lon"] > value["max_lon"]:
            raise InvalidMetadataError("geo bbox min exceeds max")
        for k in ("min_lat", "max_lat"):
            if not -90 <= value[k] <= 90:
                raise InvalidMetadataError("geo bbox latitude out of range")
        for k in ("min_lon", "max_lon"):
            if not -180 <= value[k] <= 180:
                raise InvalidMetadataError("geo bbox longitude out of range")
        return {k: float(v) for k, v in value.items()}
    raise InvalidMetadataError("geo must be {lat,lon} or {min_lat,min_lon,max_lat,max_lon}")


def _apply_patch(doc: MetadataDoc, clean: Dict[str, Any]) -> None:
    for key, value in clean.items():
        setattr(doc, key, value)


def _split_virtual(path: str) -> Optional[Tuple[str, str]]:
    """(tree owner, remainder) when path is at or under a public_data folder."""
    segments = path[1:].split("/")
    if (
        len(segments) >= 3
        and segments[1] == DATA_ROOT_NAME
        and segments[2] == PUBLIC_DATA_NAME
    ):
        return segments[0], "/".join(segments[3:])
    return None
