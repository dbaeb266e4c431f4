"""Operation provenance: an append-only log that forms a DAG over entities.

Nodes are entities (one per id, never removed, flagged on delete); edges
are operations with any number of inputs and outputs.  Derivation edges
(upload, create, copy, convert, tool_run) must keep the graph acyclic;
move edges are pure annotations (same node on both sides) and are
excluded from cycle accounting.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set

from .errors import CycleDetectedError, UnknownEntityError
from .store import AppendLog

DERIVATION_KINDS = {"upload", "create", "copy", "convert", "tool_run"}
EDGE_KINDS = DERIVATION_KINDS | {"move"}


@dataclass
class ProvNode:
    entity_id: str
    path_at_creation: str
    deleted: bool = False
    seq: int = 0

    def to_doc(self) -> Dict[str, Any]:
        return {
            "entity_id": self.entity_id,
            "path_at_creation": self.path_at_creation,
            "deleted": self.deleted,
        }


@dataclass
class ProvEdge:
    edge_id: int
    kind: str
    inputs: List[str]
    outputs: List[str]
    actor: str
    tool: Optional[str]
    args: Optional[str]
    timestamp: int

    def to_doc(self) -> Dict[str, Any]:
        return {
            "edge_id": self.edge_id,
            "kind": self.kind,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "actor": self.actor,
            "tool": self.tool,
            "args": self.args,
            "timestamp": self.timestamp,
        }


@dataclass
class PipelineView:
    focus: str
    nodes: List[ProvNode]
    edges: List[ProvEdge]
    truncated: bool

    def to_doc(self) -> Dict[str, Any]:
        return {
            "focus": self.focus,
            "nodes": [n.to_doc() for n in self.nodes],
            "edges": [e.to_doc() for e in self.edges],
            "truncated": self.truncated,
        }


class ProvenanceLog:
    """History of every operation; replaying the log rebuilds it exactly."""

    def __init__(self, log: Optional[AppendLog] = None):
        self._log = log
        self._nodes: Dict[str, ProvNode] = {}
        self._edges: Dict[int, ProvEdge] = {}
        self._incident: Dict[str, List[int]] = {}
        self._next_edge_id = 1
        if log is not None:
            for rec in log.replay():
                self._apply(rec)

    # -- log replay ---------------------------------------------------

    def _apply(self, rec: Dict[str, Any]) -> None:
        if rec["type"] == "node":
            self._add_node_state(rec["entity_id"], rec["path"])
        elif rec["type"] == "edge":
            edge = ProvEdge(
                edge_id=rec["edge_id"],
                kind=rec["kind"],
                inputs=rec["inputs"],
                outputs=rec["outputs"],
                actor=rec["actor"],
                tool=rec.get("tool"),
                args=rec.get("args"),
                timestamp=rec["timestamp"],
            )
            self._add_edge_state(edge)
        elif rec["type"] == "deleted":
            node = self._nodes.get(rec["entity_id"])
            if node is not None:
                node.deleted = True

    def _add_node_state(self, entity_id: str, path: str) -> ProvNode:
        node = ProvNode(entity_id, path, seq=len(self._nodes))
        self._nodes[entity_id] = node
        self._incident.setdefault(entity_id, [])
        return node

    def _add_edge_state(self, edge: ProvEdge) -> None:
        self._edges[edge.edge_id] = edge
        self._next_edge_id = max(self._next_edge_id, edge.edge_id + 1)
        for eid in {*edge.inputs, *edge.outputs}:
            self._incident.setdefault(eid, []).append(edge.edge_id)

    # -- mutations ----------------------------------------------------

    def add_node(self, entity_id: str, path: str) -> None:
        if entity_id in self._nodes:
            return
        self._add_node_state(entity_id, path)
        if self._log is not None:
            self._log.append({"type": "node", "entity_id": entity_id, "path": path})

    def mark_deleted(self, entity_id: str) -> None:
        node = self._nodes.get(entity_id)
        if node is None:
            raise UnknownEntityError(entity_id)
        if not node.deleted:
            node.deleted = True
            if self._log is not None:
                self._log.append({"type": "deleted", "entity_id": entity_id})

    def record_operation(
        self,
        kind: str,
        inputs: Sequence[str],
        outputs: Sequence[str],
        actor: str,
        tool: Optional[str] = None,
        args: Optional[str] = None,
        timestamp: int = 0,
    ) -> int:
        if kind not in EDGE_KINDS:
            raise ValueError(f"unknown edge kind {kind!r}")
        if kind in ("upload", "create") and inputs:
            raise ValueError(f"{kind} edges take no inputs")
        if kind == "tool_run":
            if tool is None:
                raise ValueError("tool_run edges require a tool")
            if not outputs:
                raise ValueError("tool_run edges require outputs")
        if kind == "move" and (list(inputs) != list(outputs) or len(inputs) != 1):
            raise ValueError("move edges annotate exactly one node")
        referenced = {*inputs, *outputs} | ({tool} if tool else set())
        for entity_id in referenced:
            if entity_id not in self._nodes:
                raise UnknownEntityError(entity_id)
        if kind in DERIVATION_KINDS and self._would_cycle(inputs, outputs):
            raise CycleDetectedError(f"{kind} edge would create a cycle")
        edge = ProvEdge(
            edge_id=self._next_edge_id,
            kind=kind,
            inputs=list(inputs),
            outputs=list(outputs),
            actor=actor,
            tool=tool,
            args=args,
            timestamp=timestamp,
        )
        self._add_edge_state(edge)
        if self._log is not None:
            self._log.append({"type": "edge", **edge.to_doc()})
        return edge.edge_id

    def _would_cycle(self, inputs: Sequence[str], outputs: Sequence[str]) -> bool:
        targets = set(inputs)
        if not targets:
            return False
        if targets & set(outputs):
            return True
        # cycle iff some input is derivable from some output
        seen: Set[str] = set()
        stack = list(outputs)
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            for succ in self._successors(node):
                if succ in targets:
                    return True
                stack.append(succ)
        return False

    # -- queries ------------------------------------------------------

    def has_node(self, entity_id: str) -> bool:
        return entity_id in self._nodes

    def node(self, entity_id: str) -> ProvNode:
        try:
            return self._nodes[entity_id]
        except KeyError:
            raise UnknownEntityError(entity_id) from None

    def edges(self) -> List[ProvEdge]:
        return [self._edges[eid] for eid in sorted(self._edges)]

    def creating_edges(self, entity_id: str) -> List[ProvEdge]:
        """Derivation edges that have the entity among their outputs."""
        return [
            self._edges[eid]
            for eid in self._incident.get(entity_id, [])
            if self._edges[eid].kind in DERIVATION_KINDS
            and entity_id in self._edges[eid].outputs
        ]

    def _successors(self, entity_id: str) -> Iterable[str]:
        for eid in self._incident.get(entity_id, []):
            edge = self._edges[eid]
            if edge.kind in DERIVATION_KINDS and entity_id in edge.inputs:
                yield from edge.outputs

    def _predecessors(self, entity_id: str) -> Iterable[str]:
        for eid in self._incident.get(entity_id, []):
            edge = self._edges[eid]
            if edge.kind in DERIVATION_KINDS and entity_id in edge.outputs:
                yield from edge.inputs

    def pipeline_of(self, entity_id: str, max_depth: int) -> PipelineView:
        """Bidirectional BFS closure around an entity, cut at max_depth hops."""
        if entity_id not in self._nodes:
            raise UnknownEntityError(entity_id)
        dist: Dict[str, int] = {entity_id: 0}
        included: Set[int] = set()
        frontier = [entity_id]
        for depth in range(max_depth):
            nxt: List[str] = []
            for node in frontier:
                for eid in self._incident.get(node, []):
                    if eid in included:
                        continue
                    included.add(eid)
                    edge = self._edges[eid]
                    for other in {*edge.inputs, *edge.outputs}:
                        if other not in dist:
                            dist[other] = depth + 1
                            nxt.append(other)
            if not nxt:
                break
            frontier = nxt
        truncated = any(
            eid not in included
            for node in dist
            for eid in self._incident.get(node, [])
        )
        nodes = sorted((self._nodes[n] for n in dist), key=lambda n: n.seq)
        edges = sorted(
            (self._edges[eid] for eid in included),
            key=lambda e: (e.timestamp, e.edge_id),
        )
        return PipelineView(entity_id, nodes, edges, truncated)

    def upstream(self, entity_id: str) -> List[str]:
        return self._closure(entity_id, self._predecessors)

    def downstream(self, entity_id: str) -> List[str]:
        return self._closure(entity_id, self._successors)

    def _closure(self, entity_id: str, step) -> List[str]:
        if entity_id not in self._nodes:
            raise UnknownEntityError(entity_id)
        reached: Set[str] = set()
        stack = [entity_id]
        while stack:
            node = stack.pop()
            for other in step(node):
                if other not in reached and other != entity_id:
                    reached.add(other)
                    stack.append(other)
        order = {n: i for i, n in enumerate(self._topological_order())}
        return sorted(reached, key=lambda n: order[n])

    def _topological_order(self) -> List[str]:
        indegree = {n: 0 for n in self._nodes}
        for edge in self._edges.values():
            if edge.kind not in DERIVATION_KINDS:
                continue
            for out in set(edge.outputs):
                indegree[out] += len(set(edge.inputs))
        heap = [
            (self._nodes[n].seq, n) for n, deg in indegree.items() if deg == 0
        ]
        heapq.heapify(heap)
        order: List[str] = []
        while heap:
            _, node = heapq.heappop(heap)
            order.append(node)
            for eid in self._incident.get(node, []):
                edge = self._edges[eid]
                if edge.kind not in DERIVATION_KINDS or node not in edge.inputs:
                    continue
                for out in set(edge.outputs):
                    indegree[out] -= 1
                    if indegree[out] == 0:
                        heapq.heappush(heap, (self._nodes[out].seq, out))
        return order

    def verify_dag(self) -> bool:
        """True iff edges reference known nodes and derivations are acyclic."""
        for edge in self._edges.values():
            referenced = {*edge.inputs, *edge.outputs}
            if edge.tool:
                referenced.add(edge.tool)
            if any(n not in self._nodes for n in referenced):
                return False
        return len(self._topological_order()) == len(self._nodes)


def render_dot(view: PipelineView) -> str:
    """Render a pipeline view as a DOT digraph.

    Entities are ellipses, operations are boxes; hyper-edges fan in
    through the operation box so multi-input steps stay readable.
    """
    lines = ["digraph pipeline {", "  rankdir=LR;"]
    for node in view.nodes:
        name = node.path_at_creation.rsplit("/", 1)[-1]
        label = _dot_escape(name + (" [deleted]" if node.deleted else ""))
        shape = "ellipse" if node.entity_id != view.focus else "doublecircle"
        lines.append(f'  "{node.entity_id}" [label="{label}", shape={shape}];')
    in_view = {n.entity_id for n in view.nodes}
    for edge in view.edges:
        op = f"op{edge.edge_id}"
        label = _dot_escape(edge.kind if not edge.args else f"{edge.kind}: {edge.args}")
        lines.append(f'  "{op}" [label="{label}", shape=box];')
        for src in edge.inputs:
            if src in in_view:
                lines.append(f'  "{src}" -> "{op}";')
        for dst in edge.outputs:
            if dst in in_view:
                lines.append(f'  "{op}" -> "{dst}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')
