"""Tool argument specs and sandboxed runs.

A run executes one tool entity inside a per-run sandbox directory under
``<root>/runs/<run_id>/``.  Declared ``path_in`` arguments are
materialized as read-only files named by their last path segment;
declared ``path_out`` files are harvested into the catalog only when the
process exits 0, together with exactly one tool_run provenance edge.  A
nonzero exit, timeout, or cancellation registers nothing.

The container scheduler of a full deployment is abstracted to an OS
process with a working-directory jail and a minimal environment; run
records still carry container_id and image fields for display.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from .catalog import Catalog, MetadataDoc, parent_path, validate_path
from .errors import (
    AlreadyTerminalError,
    DuplicateArgError,
    InvalidBindingError,
    MissingArgError,
    NotAToolError,
    NotFoundError,
    PermissionDeniedError,
)
from .provenance import ProvenanceLog
from .store import JsonlStore

ARG_KINDS = ("string", "int", "float", "flag", "path_in", "path_out")
TERMINAL = ("succeeded", "failed", "cancelled")

LOG_EXCERPT_LIMIT = 64 * 1024


@dataclass(frozen=True)
class ArgSpec:
    name: str
    kind: str
    required: bool = False
    default: Any = None

    def to_doc(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "required": self.required,
            "default": self.default,
        }


@dataclass
class ToolSpec:
    tool_entity: str
    executor_profile: str
    argspec: List[ArgSpec]

    def to_doc(self) -> Dict[str, Any]:
        return {
            "tool_entity": self.tool_entity,
            "executor_profile": self.executor_profile,
            "argspec": [a.to_doc() for a in self.argspec],
        }

    @classmethod
    def from_doc(cls, doc: Dict[str, Any]) -> "ToolSpec":
        return cls(
            tool_entity=doc["tool_entity"],
            executor_profile=doc["executor_profile"],
            argspec=[ArgSpec(**a) for a in doc["argspec"]],
        )


@dataclass(frozen=True)
class ExecutorProfile:
    name: str
    command: List[str]  # argv prefix; "{tool}" expands to the tool file
    timeout_s: float = 60.0
    max_output_bytes: int = LOG_EXCERPT_LIMIT

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("profile timeout must be positive")


DEFAULT_PROFILES = {
    "python3": ExecutorProfile("python3", ["python3", "{tool}"], 60.0),
}


@dataclass
class RunRecord:
    run_id: str
    container_id: str
    image: str
    status: str
    started_at: int
    running_time: float
    actor: str
    bindings: Dict[str, Any]
    output_ids: List[str]
    log_excerpt: str
    tool_id: str

    def to_doc(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "container_id": self.container_id,
            "image": self.image,
            "status": self.status,
            "started_at": self.started_at,
            "running_time": self.running_time,
            "actor": self.actor,
            "bindings": self.bindings,
            "output_ids": list(self.output_ids),
            "log_excerpt": self.log_excerpt,
            "tool_id": self.tool_id,
        }


class _Run:
    """Mutable run state owned by the runner; snapshot before returning."""

    def __init__(self, record: RunRecord, tool_doc: MetadataDoc, spec: ToolSpec,
                 profile: ExecutorProfile, output_mode: str, seq: int):
        self.record = record
        self.tool_doc = tool_doc
        self.spec = spec
        self.profile = profile
        self.output_mode = output_mode
        self.seq = seq
        self.cancel_requested = False
        self.process: Optional[subprocess.Popen] = None
        self.mono_start: Optional[float] = None


class ToolRunner:
    """Bounded worker pool executing tool runs against the catalog."""

    def __init__(
        self,
        catalog: Catalog,
        provenance: ProvenanceLog,
        root: Path,
        profiles: Optional[Dict[str, ExecutorProfile]] = None,
        max_workers: int = 4,
        id_factory: Optional[Callable[[], str]] = None,
        clock: Optional[Callable[[], int]] = None,
    ):
        self.catalog = catalog
        self.provenance = provenance
        self.root = Path(root)
        self.profiles = dict(DEFAULT_PROFILES if profiles is None else profiles)
        self._new_id = id_factory or (lambda: str(uuid.uuid4()))
        self._clock = clock or (lambda: int(time.time()))
        self._lock = threading.RLock()
        self._runs: Dict[str, _Run] = {}
        self._seq = 0
        self._pool = ThreadPoolExecutor(max_workers=max_workers)

        self._specs_store = JsonlStore(self.root / "tool_specs.jsonl")
        self._runs_store = JsonlStore(self.root / "run_records.jsonl")
        self._specs: Dict[str, ToolSpec] = {
            tid: ToolSpec.from_doc(doc) for tid, doc in self._specs_store.load().items()
        }
        for rid, doc in self._runs_store.load().items():
            record = RunRecord(**doc)
            if record.status not in TERMINAL:
                # the process did not survive the restart
                record.status = "failed"
                record.log_excerpt += "\n[interrupted by service restart]"
                self._runs_store.put(rid, record.to_doc())
            run = _Run(record, None, None, None, "data", self._seq)  # type: ignore[arg-type]
            self._seq += 1
            self._runs[rid] = run

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True, cancel_futures=True)

    # -- tool specs ------------------------------------------------------

    def _runnable_tool(self, tool_path: str, user: str) -> MetadataDoc:
        doc = self.catalog.get_metadata(tool_path, user)
        if doc.is_folder:
            raise NotAToolError(tool_path)
        if doc.mode == "tool":
            return doc
        # inference entrypoints live inside a model folder
        prefix = parent_path(doc.path)
        while prefix.count("/") >= 2:
            try:
                parent = self.catalog.get_metadata(prefix, user)
            except NotFoundError:
                break
            if parent.mode == "model":
                return doc
            prefix = parent_path(prefix)
        raise NotAToolError(tool_path)

    def set_tool_argspec(
        self,
        actor: str,
        tool_path: str,
        argspec: List[ArgSpec],
        executor_profile: str = "python3",
    ) -> ToolSpec:
        doc = self._runnable_tool(tool_path, actor)
        if doc.owner != actor:
            raise PermissionDeniedError(tool_path)
        names = [a.name for a in argspec]
        if len(names) != len(set(names)):
            raise DuplicateArgError("argument names must be unique")
        for arg in argspec:
            if arg.kind not in ARG_KINDS:
                raise InvalidBindingError(f"unknown arg kind {arg.kind!r}")
            if arg.kind in ("path_in", "path_out") and arg.default is not None:
                raise InvalidBindingError(f"{arg.kind} args cannot carry defaults")
        spec = ToolSpec(doc.entity_id, executor_profile, list(argspec))
        if executor_profile not in self.profiles:
            raise InvalidBindingError(f"unknown executor profile {executor_profile!r}")
        with self._lock:
            self._specs[doc.entity_id] = spec
            self._specs_store.put(doc.entity_id, spec.to_doc())
        return spec

    def get_tool_spec(self, tool_path: str, user: str) -> ToolSpec:
        doc = self._runnable_tool(tool_path, user)
        with self._lock:
            spec = self._specs.get(doc.entity_id)
        if spec is None:
            raise NotFoundError(f"no argspec registered for {tool_path}")
        return spec

    # -- runs --------------------------------------------------------------

    def launch_run(
        self,
        actor: str,
        tool_path: str,
        bindings: Dict[str, Any],
        output_mode: str = "data",
    ) -> RunRecord:
        tool_doc = self._runnable_tool(tool_path, actor)
        if output_mode not in ("data", "model"):
            raise InvalidBindingError(f"output_mode {output_mode!r}")
        with self._lock:
            spec = self._specs.get(tool_doc.entity_id)
        if spec is None:
            spec = ToolSpec(tool_doc.entity_id, "python3", [])
        profile = self.profiles.get(spec.executor_profile)
        if profile is None:
            raise InvalidBindingError(f"unknown executor profile {spec.executor_profile!r}")
        resolved = self._resolve_bindings(actor, spec, bindings)

        run_id = self._new_id()
        record = RunRecord(
            run_id=run_id,
            container_id=f"sbx-{run_id[:12]}",
            image=profile.name,
            status="queued",
            started_at=0,
            running_time=0.0,
            actor=actor,
            bindings={k: v for k, v in resolved.items()},
            output_ids=[],
            log_excerpt="",
            tool_id=tool_doc.entity_id,
        )
        with self._lock:
            run = _Run(record, tool_doc, spec, profile, output_mode, self._seq)
            self._seq += 1
            self._runs[run_id] = run
            self._runs_store.put(run_id, record.to_doc())
        self._pool.submit(self._execute, run)
        return self._snapshot(run)

    def _resolve_bindings(self, actor: str, spec: ToolSpec, bindings: Dict[str, Any]) -> Dict[str, Any]:
        known = {a.name: a for a in spec.argspec}
        for name in bindings:
            if name not in known:
                raise InvalidBindingError(f"unknown argument {name!r}")
        resolved: Dict[str, Any] = {}
        for arg in spec.argspec:
            if arg.name in bindings:
                resolved[arg.name] = self._coerce(actor, arg, bindings[arg.name])
            elif arg.default is not None:
                resolved[arg.name] = arg.default
            elif arg.kind == "flag":
                resolved[arg.name] = False
            elif arg.required:
                raise MissingArgError(arg.name)
        return resolved

    def _coerce(self, actor: str, arg: ArgSpec, value: Any) -> Any:
        try:
            if arg.kind == "int":
                return int(value)
            if arg.kind == "float":
                return float(value)
            if arg.kind == "flag":
                if isinstance(value, bool):
                    return value
                return str(value).lower() in ("1", "true", "yes")
            if arg.kind == "string":
                return str(value)
        except (TypeError, ValueError):
            raise InvalidBindingError(f"{arg.name}: bad {arg.kind} value {value!r}") from None
        path = str(value)
        if arg.kind == "path_in":
            try:
                doc = self.catalog.get_metadata(path, actor)
            except NotFoundError:
                raise InvalidBindingError(f"{arg.name}: {path} is not visible") from None
            if doc.is_folder:
                raise InvalidBindingError(f"{arg.name}: {path} is a folder")
            return path
        # path_out: must be creatable by the actor right now
        try:
            validate_path(path)
        except Exception:
            raise InvalidBindingError(f"{arg.name}: invalid path {path!r}") from None
        from .catalog import path_owner

        if path_owner(path) != actor:
            raise InvalidBindingError(f"{arg.name}: {actor} does not own {path}")
        try:
            self.catalog.get_metadata(path, actor)
        except NotFoundError:
            pass
        else:
            raise InvalidBindingError(f"{arg.name}: {path} already exists")
        try:
            parent = self.catalog.get_metadata(parent_path(path), actor)
        except NotFoundError:
            raise InvalidBindingError(f"{arg.name}: parent of {path} missing") from None
        if not parent.is_folder:
            raise InvalidBindingError(f"{arg.name}: parent of {path} is not a folder")
        return path

    # -- worker ------------------------------------------------------------

    def _execute(self, run: _Run) -> None:
        with self._lock:
            if run.cancel_requested:
                self._finalize(run, "cancelled")
                return
            run.record.status = "running"
            run.record.started_at = self._clock()
            run.mono_start = time.monotonic()
            self._runs_store.put(run.record.run_id, run.record.to_doc())
        try:
            self._run_sandboxed(run)
        except Exception as exc:  # defensive: a worker must never die silently
            run.record.log_excerpt += f"\n[runner error: {exc}]"
            self._finalize(run, "failed")

    def _run_sandboxed(self, run: _Run) -> None:
        sandbox = self.root / "runs" / run.record.run_id
        sandbox.mkdir(parents=True, exist_ok=True)
        log_path = sandbox / "log.txt"
        actor = run.record.actor

        used_names: Dict[str, int] = {}

        def unique_name(logical_path: str) -> str:
            base = logical_path.rsplit("/", 1)[-1]
            n = used_names.get(base, 0)
            used_names[base] = n + 1
            return base if n == 0 else f"{base}.{n}"

        tool_name = unique_name(run.tool_doc.path)
        (sandbox / tool_name).write_bytes(
            self.catalog.read_content(run.tool_doc.path, actor)
        )

        input_ids: List[str] = []
        out_names: Dict[str, str] = {}
        argv_args: List[str] = []
        for arg in run.spec.argspec:
            if arg.name not in run.record.bindings:
                continue
            value = run.record.bindings[arg.name]
            if arg.kind == "flag":
                if value:
                    argv_args.append(f"--{arg.name}")
                continue
            if arg.kind == "path_in":
                doc = self.catalog.get_metadata(value, actor)
                name = unique_name(value)
                target = sandbox / name
                target.write_bytes(self.catalog.read_content(value, actor))
                target.chmod(0o444)
                input_ids.append(doc.entity_id)
                argv_args.extend([f"--{arg.name}", name])
                continue
            if arg.kind == "path_out":
                name = unique_name(value)
                out_names[value] = name
                argv_args.extend([f"--{arg.name}", name])
                continue
            argv_args.extend([f"--{arg.name}", str(value)])

        argv = [part.replace("{tool}", tool_name) for part in run.profile.command]
        argv.extend(argv_args)
        env = {
            "PATH": os.environ.get("PATH", "/usr/bin:/bin"),
            "HOME": str(sandbox),
            "LANG": "C.UTF-8",
        }

        cancelled = False
        with log_path.open("wb") as log_file:
            with self._lock:
                if run.cancel_requested:
                    self._finalize(run, "cancelled")
                    return
                process = subprocess.Popen(
                    argv,
                    cwd=sandbox,
                    env=env,
                    stdout=log_file,
                    stderr=subprocess.STDOUT,
                    stdin=subprocess.DEVNULL,
                )
                run.process = process
            timed_out = False
            try:
                process.wait(timeout=run.profile.timeout_s)
            except subprocess.TimeoutExpired:
                timed_out = True
                process.kill()
                process.wait()
            with self._lock:
                cancelled = run.cancel_requested

        excerpt_cap = min(LOG_EXCERPT_LIMIT, run.profile.max_output_bytes)
        run.record.log_excerpt = log_path.read_bytes()[:excerpt_cap].decode(
            "utf-8", errors="replace"
        )

        if cancelled:
            self._finalize(run, "cancelled")
            return
        if timed_out:
            run.record.log_excerpt += "\n[killed: wall-clock timeout]"
            self._finalize(run, "failed")
            return
        if process.returncode != 0:
            self._finalize(run, "failed")
            return
        self._harvest_outputs(run, sandbox, input_ids, out_names, argv_args)

    def _harvest_outputs(
        self,
        run: _Run,
        sandbox: Path,
        input_ids: List[str],
        out_names: Dict[str, str],
        argv_args: List[str],
    ) -> None:
        missing = [p for p, name in out_names.items() if not (sandbox / name).exists()]
        if missing:
            run.record.log_excerpt += f"\n[missing declared outputs: {missing}]"
            self._finalize(run, "failed")
            return
        ingested: List[str] = []
        try:
            for logical_path, name in out_names.items():
                data = (sandbox / name).read_bytes()
                entity_id = self.catalog.upload_entity(
                    run.record.actor,
                    logical_path,
                    run.output_mode,
                    data,
                    _record_edge=False,
                )
                ingested.append(entity_id)
            # a run with no declared outputs derives nothing: no edge
            if ingested:
                self.provenance.record_operation(
                    "tool_run",
                    inputs=input_ids,
                    outputs=ingested,
                    actor=run.record.actor,
                    tool=run.tool_doc.entity_id,
                    args=shlex.join(argv_args),
                    timestamp=self._clock(),
                )
        except Exception as exc:
            for entity_id in ingested:
                doc = self.catalog.doc_by_id(entity_id)
                if doc is not None:
                    self.catalog.delete_entity(run.record.actor, doc.path)
            run.record.log_excerpt += f"\n[output registration failed: {exc}]"
            self._finalize(run, "failed")
            return
        run.record.output_ids = ingested
        self._finalize(run, "succeeded")

    def _finalize(self, run: _Run, status: str) -> None:
        with self._lock:
            if run.mono_start is not None:
                run.record.running_time = time.monotonic() - run.mono_start
            run.record.status = status
            self._runs_store.put(run.record.run_id, run.record.to_doc())

    # -- queries -------------------------------------------------------------

    def _snapshot(self, run: _Run) -> RunRecord:
        with self._lock:
            record = RunRecord(**run.record.to_doc())
            if record.status == "running" and run.mono_start is not None:
                record.running_time = time.monotonic() - run.mono_start
            return record

    def _authorized(self, run: _Run, user: str) -> bool:
        if run.record.actor == user:
            return True
        tool = self.catalog.doc_by_id(run.record.tool_id)
        return tool is not None and tool.owner == user

    def get_run(self, run_id: str, requesting_user: str) -> RunRecord:
        with self._lock:
            run = self._runs.get(run_id)
        if run is None or not self._authorized(run, requesting_user):
            raise NotFoundError(run_id)
        return self._snapshot(run)

    def list_runs(self, tool_path: str, requesting_user: str) -> List[RunRecord]:
        doc = self.catalog.get_metadata(tool_path, requesting_user)
        with self._lock:
            runs = [r for r in self._runs.values() if r.record.tool_id == doc.entity_id]
            runs = [r for r in runs if self._authorized(r, requesting_user)]
            runs.sort(key=lambda r: r.seq, reverse=True)
            return [self._snapshot(r) for r in runs]

    def cancel_run(self, actor: str, run_id: str) -> RunRecord:
        with self._lock:
            run = self._runs.get(run_id)
            if run is None or run.record.actor != actor:
                raise NotFoundError(run_id)
            if run.record.status in TERMINAL:
                raise AlreadyTerminalError(run.record.status)
            run.cancel_requested = True
            if run.record.status == "queued":
                self._finalize(run, "cancelled")
            elif run.process is not None:
                run.process.kill()
        # the worker observes the kill and finalizes as cancelled
        deadline = time.monotonic() + 10.0
        while time.monotonic() < deadline:
            with self._lock:
                if run.record.status in TERMINAL:
                    break
            time.sleep(0.02)
        return self._snapshot(run)
