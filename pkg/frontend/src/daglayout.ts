// Layered layout of a pipeline view for SVG rendering. Entities and
// operations both become drawable boxes; operation boxes sit between
// their inputs and outputs. Pure math, no DOM.

import type { PipelineView } from "./types.js";

export interface LayoutNode {
  id: string;
  label: string;
  kind: "entity" | "op";
  focus: boolean;
  deleted: boolean;
  layer: number;
  row: number;
  x: number;
  y: number;
}

export interface LayoutLink {
  from: string;
  to: string;
}

export interface DagLayout {
  nodes: LayoutNode[];
  links: LayoutLink[];
  width: number;
  height: number;
}

export const LAYER_WIDTH = 170;
export const ROW_HEIGHT = 56;

export function layoutPipeline(view: PipelineView): DagLayout {
  const layers = new Map<string, number>();
  for (const node of view.nodes) layers.set(node.entity_id, 0);

  // relax layers until stable: op after all inputs, outputs after the op
  for (let pass = 0; pass < view.edges.length + 2; pass++) {
    let changed = false;
    for (const edge of view.edges) {
      const opId = `op${edge.edge_id}`;
      const inputLayers = edge.inputs
        .filter((i) => layers.has(i))
        .map((i) => layers.get(i)!);
      const opLayer = Math.max(layers.get(opId) ?? 0, ...inputLayers.map((l) => l + 1), 0);
      if (opLayer !== (layers.get(opId) ?? -1)) {
        layers.set(opId, opLayer);
        changed = true;
      }
      for (const out of edge.outputs) {
        if (!layers.has(out)) continue;
        // annotation edges (move) output their own input; don't push those
        if (edge.inputs.length === 1 && edge.inputs[0] === out) continue;
        if (layers.get(out)! < opLayer + 1) {
          layers.set(out, opLayer + 1);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  const rows = new Map<number, number>();
  const nodes: LayoutNode[] = [];
  const place = (
    id: string,
    label: string,
    kind: "entity" | "op",
    focus: boolean,
    deleted: boolean,
  ) => {
    const layer = layers.get(id) ?? 0;
    const row = rows.get(layer) ?? 0;
    rows.set(layer, row + 1);
    nodes.push({
      id,
      label,
      kind,
      focus,
      deleted,
      layer,
      row,
      x: 30 + layer * LAYER_WIDTH,
      y: 30 + row * ROW_HEIGHT,
    });
  };
  for (const node of view.nodes) {
    const name = node.path_at_creation.split("/").pop() ?? node.entity_id;
    place(node.entity_id, name, "entity", node.entity_id === view.focus, node.deleted);
  }
  for (const edge of view.edges) {
    place(`op${edge.edge_id}`, edge.kind, "op", false, false);
  }

  const inView = new Set(view.nodes.map((n) => n.entity_id));
  const links: LayoutLink[] = [];
  for (const edge of view.edges) {
    const opId = `op${edge.edge_id}`;
    for (const input of edge.inputs) {
      if (inView.has(input)) links.push({ from: input, to: opId });
    }
    for (const output of edge.outputs) {
      if (inView.has(output)) links.push({ from: opId, to: output });
    }
  }

  const maxLayer = Math.max(0, ...nodes.map((n) => n.layer));
  const maxRow = Math.max(0, ...nodes.map((n) => n.row));
  return {
    nodes,
    links,
    width: 30 + (maxLayer + 1) * LAYER_WIDTH,
    height: 60 + (maxRow + 1) * ROW_HEIGHT,
  };
}
