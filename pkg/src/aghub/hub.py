"""Composition root: wires catalog, index, provenance, and runner together
over one data root.  Everything the service and the CLI touch goes
through a Hub.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Dict, Optional

from .catalog import Catalog
from .embedding import Embedder
from .execution import ExecutorProfile, ToolRunner
from .index import SemanticIndex
from .provenance import ProvenanceLog
from .store import AppendLog, JsonlStore


class Hub:
    def __init__(
        self,
        data_root: Path,
        profiles: Optional[Dict[str, ExecutorProfile]] = None,
        max_workers: int = 4,
        embedder: Optional[Embedder] = None,
        id_factory: Optional[Callable[[], str]] = None,
        key_factory: Optional[Callable[[], str]] = None,
        clock: Optional[Callable[[], int]] = None,
    ):
        self.data_root = Path(data_root)
        self.data_root.mkdir(parents=True, exist_ok=True)
        self.index = SemanticIndex(
            JsonlStore(self.data_root / "index.jsonl"), embedder=embedder
        )
        self.provenance = ProvenanceLog(AppendLog(self.data_root / "provenance.jsonl"))
        self.catalog = Catalog(
            self.data_root,
            self.index,
            self.provenance,
            id_factory=id_factory,
            key_factory=key_factory,
            clock=clock,
        )
        self.runner = ToolRunner(
            self.catalog,
            self.provenance,
            self.data_root,
            profiles=profiles,
            max_workers=max_workers,
            id_factory=id_factory,
            clock=clock,
        )

    def close(self) -> None:
        self.runner.shutdown()
