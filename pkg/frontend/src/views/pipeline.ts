// Pipeline panel: the provenance DAG around one entity as an SVG.
// Entities are rounded boxes (focus highlighted, deleted struck out);
// operations are small gray boxes on the arrows between them.

import { layoutPipeline } from "../daglayout.js";
import { clear, el, svgEl } from "../dom.js";
import { notifyError } from "../notices.js";
import type { Store } from "../state.js";

export function renderPipeline(root: HTMLElement, store: Store, path: string): void {
  const container = clear(root);
  const depthInput = el("input", { type: "number", value: "5", min: "0", class: "search-k" });
  const plot = el("div", { class: "pipeline-plot" }, ["loading..."]);

  const draw = () => {
    store.api.pipeline(path, Number(depthInput.value) || 5).then((view) => {
      const layout = layoutPipeline(view);
      const svg = svgEl("svg", {
        width: layout.width,
        height: layout.height,
        viewBox: `0 0 ${layout.width} ${layout.height}`,
        class: "dag",
      });
      const byId = new Map(layout.nodes.map((n) => [n.id, n]));
      for (const link of layout.links) {
        const from = byId.get(link.from)!;
        const to = byId.get(link.to)!;
        svg.appendChild(svgEl("line", {
          x1: from.x + 60, y1: from.y + 14,
          x2: to.x, y2: to.y + 14,
          class: "dag-link",
          "marker-end": "url(#arrow)",
        }));
      }
      const defs = svgEl("defs");
      const marker = svgEl("marker", {
        id: "arrow", viewBox: "0 0 8 8", refX: 8, refY: 4,
        markerWidth: 6, markerHeight: 6, orient: "auto",
      });
      marker.appendChild(svgEl("path", { d: "M0,0 L8,4 L0,8 z", fill: "#666" }));
      defs.appendChild(marker);
      svg.appendChild(defs);

      for (const node of layout.nodes) {
        const group = svgEl("g", { class: `dag-node dag-${node.kind}` });
        group.appendChild(svgEl("rect", {
          x: node.x, y: node.y, rx: 6,
          width: node.kind === "op" ? 90 : 120, height: 28,
          class: node.focus ? "dag-box dag-focus" : "dag-box",
        }));
        const text = svgEl("text", {
          x: node.x + (node.kind === "op" ? 45 : 60),
          y: node.y + 18,
          "text-anchor": "middle",
          class: node.deleted ? "dag-label dag-deleted" : "dag-label",
        });
        text.textContent = node.deleted ? `${node.label} (deleted)` : node.label;
        group.appendChild(text);
        svg.appendChild(group);
      }
      clear(plot).append(svg);
      if (view.truncated) {
        plot.append(el("p", { class: "empty" }, ["(truncated: increase depth to see more)"]));
      }
      const dot = el("details", {}, [
        el("summary", {}, ["DOT source"]),
        el("pre", {}, [view.dot]),
      ]);
      plot.append(dot);
    }).catch((err) => {
      clear(plot).append(el("p", { class: "empty" }, ["not found"]));
      notifyError(err);
    });
  };

  container.append(
    el("h2", {}, [`pipeline: ${path}`]),
    el("div", { class: "toolbar" }, [
      el("span", {}, ["depth"]),
      depthInput,
      el("button", { class: "primary", onclick: draw }, ["redraw"]),
      el("a", { href: `#meta${path}`, class: "button-link" }, ["metadata"]),
    ]),
    plot,
  );
  draw();
}
