// Search page: query + facet filters, ranked list, embedding scatter
// (exactly the returned hits, coordinates straight from the server's
// projection payload) and an equirectangular map of geo-tagged hits.

import { clear, el, svgEl } from "../dom.js";
import { notifyError } from "../notices.js";
import { MODE_COLORS, fitToViewport, mapToViewport } from "../scatter.js";
import type { Store } from "../state.js";
import type { Mode, SearchFilters, SearchResponse } from "../types.js";

const SCATTER_W = 420;
const SCATTER_H = 320;

export function renderSearch(root: HTMLElement, store: Store): void {
  const container = clear(root);

  const query = el("input", {
    class: "search-query",
    placeholder: "search by natural language...",
    value: store.state.searchQuery,
  });
  const k = el("input", { class: "search-k", value: "10", type: "number", min: "1" });
  const mode = el("select", {}, [
    el("option", { value: "" }, ["any mode"]),
    ...(["data", "tool", "model", "collection"] as Mode[]).map((m) =>
      el("option", { value: m }, [m]),
    ),
  ]);
  const format = el("input", { placeholder: "format", class: "search-small" });
  const labelInput = el("input", { placeholder: "labels (comma)", class: "search-small" });
  const privilege = el("select", {}, [
    el("option", { value: "" }, ["any privilege"]),
    el("option", { value: "public" }, ["public"]),
    el("option", { value: "private" }, ["private"]),
  ]);
  const bbox = el("input", {
    placeholder: "bbox min_lat,min_lon,max_lat,max_lon",
    class: "search-wide",
  });

  const results = el("div", { class: "search-results" });

  const run = async () => {
    const filters: SearchFilters = {};
    if (mode.value) filters.mode = mode.value as Mode;
    if (format.value) filters.format = format.value;
    if (labelInput.value.trim()) {
      filters.labels = labelInput.value.split(",").map((s) => s.trim()).filter(Boolean);
    }
    if (privilege.value) filters.privilege = privilege.value as "public" | "private";
    if (bbox.value.trim()) filters.bbox = bbox.value.trim();
    try {
      const payload = await store.api.search(query.value, Number(k.value) || 10, filters);
      store.update({ searchQuery: query.value, searchFilters: filters, searchResults: payload });
      renderResults(results, payload);
    } catch (err) {
      notifyError(err);
    }
  };

  const form = el("form", {
    class: "search-form",
    onsubmit: (ev) => {
      ev.preventDefault();
      void run();
    },
  }, [query, k, mode, format, labelInput, privilege, bbox,
      el("button", { type: "submit", class: "primary" }, ["search"])]);

  container.append(form, results);
  if (store.state.searchResults) renderResults(results, store.state.searchResults);
}

function renderResults(root: HTMLElement, payload: SearchResponse): void {
  const list = el("div", { class: "hit-list" });
  if (payload.hits.length === 0) {
    list.append(el("p", { class: "empty" }, ["no results"]));
  }
  for (const hit of payload.hits) {
    list.append(el("div", { class: "hit-row" }, [
      el("span", { class: "hit-sim" }, [hit.similarity.toFixed(4)]),
      el("span", {
        class: "hit-mode",
        style: `color:${MODE_COLORS[hit.mode]}`,
      }, [hit.mode]),
      el("a", { href: `#meta${hit.path}` }, [hit.path]),
    ]));
  }
  clear(root).append(
    list,
    el("div", { class: "plots" }, [
      el("div", { class: "plot" }, [el("h3", {}, ["embedding space"]), scatterSvg(payload)]),
      el("div", { class: "plot" }, [el("h3", {}, ["map"]), mapSvg(payload)]),
    ]),
  );
}

function scatterSvg(payload: SearchResponse): SVGElement {
  const svg = svgEl("svg", {
    width: SCATTER_W, height: SCATTER_H,
    viewBox: `0 0 ${SCATTER_W} ${SCATTER_H}`, class: "scatter",
  });
  const pathById = new Map(payload.hits.map((h) => [h.entity_id, h.path]));
  for (const point of fitToViewport(payload.projection, SCATTER_W, SCATTER_H)) {
    const dot = svgEl("circle", {
      cx: point.sx, cy: point.sy, r: 6, fill: point.color, class: "scatter-dot",
    });
    const title = svgEl("title");
    title.textContent = pathById.get(point.id) ?? point.id;
    dot.appendChild(title);
    svg.appendChild(dot);
  }
  return svg;
}

function mapSvg(payload: SearchResponse): SVGElement {
  const width = 420;
  const height = 210;
  const svg = svgEl("svg", {
    width, height, viewBox: `0 0 ${width} ${height}`, class: "map",
  });
  // plain equirectangular graticule; no tile service
  for (let lon = -180; lon <= 180; lon += 30) {
    const { sx } = mapToViewport(0, lon, width, height);
    svg.appendChild(svgEl("line", {
      x1: sx, y1: 0, x2: sx, y2: height, class: "graticule",
    }));
  }
  for (let lat = -90; lat <= 90; lat += 30) {
    const { sy } = mapToViewport(lat, 0, width, height);
    svg.appendChild(svgEl("line", {
      x1: 0, y1: sy, x2: width, y2: sy, class: "graticule",
    }));
  }
  for (const mark of payload.geo) {
    const { sx, sy } = mapToViewport(mark.lat, mark.lon, width, height);
    const dot = svgEl("circle", {
      cx: sx, cy: sy, r: 5, fill: MODE_COLORS[mark.mode], class: "map-dot",
    });
    const title = svgEl("title");
    title.textContent = `${mark.path} (${mark.lat.toFixed(3)}, ${mark.lon.toFixed(3)})`;
    dot.appendChild(title);
    svg.appendChild(dot);
  }
  return svg;
}
