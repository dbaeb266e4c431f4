// Metadata panel: read-only identity fields plus the editable subset
// (category, labels, description, realtime, time_range, geo). Tools get
// a link to the tool panel; everything links to its pipeline.

import { clear, el } from "../dom.js";
import { formatBytes, formatTimestamp } from "../format.js";
import { notify, notifyError } from "../notices.js";
import type { Store } from "../state.js";
import type { MetadataDoc } from "../types.js";

function readonlyRow(label: string, value: string): HTMLElement {
  return el("div", { class: "meta-row" }, [
    el("span", { class: "meta-label" }, [label]),
    el("span", { class: "meta-value" }, [value]),
  ]);
}

export function renderMetadata(root: HTMLElement, store: Store, path: string): void {
  const container = clear(root);
  container.append(el("p", {}, ["loading..."]));
  store.api.metadata(path).then((doc) => {
    clear(container);
    container.append(buildPanel(store, doc, () => renderMetadata(root, store, path)));
  }).catch((err) => {
    clear(container).append(el("p", { class: "empty" }, ["not found"]));
    notifyError(err);
  });
}

function buildPanel(store: Store, doc: MetadataDoc, refresh: () => void): HTMLElement {
  const category = el("input", { value: doc.category });
  const labels = el("input", { value: doc.labels.join(",") });
  const description = el("textarea", {}, [doc.description]);
  const realtime = el("input", { type: "checkbox" });
  realtime.checked = doc.realtime;
  const timeFrom = el("input", { value: doc.time_range ? String(doc.time_range[0]) : "" });
  const timeTo = el("input", { value: doc.time_range ? String(doc.time_range[1]) : "" });
  const geo = el("input", {
    value: doc.geo ? JSON.stringify(doc.geo) : "",
    placeholder: '{"lat": 41.1, "lon": -96.5}',
  });

  const save = async () => {
    const patch: Record<string, unknown> = {
      category: category.value,
      labels: labels.value.split(",").map((s) => s.trim()).filter(Boolean),
      description: description.value,
      realtime: realtime.checked,
    };
    patch.time_range = timeFrom.value && timeTo.value
      ? [Number(timeFrom.value), Number(timeTo.value)]
      : null;
    try {
      patch.geo = geo.value ? JSON.parse(geo.value) : null;
    } catch {
      notifyError(new Error("geo must be JSON like {\"lat\": ..., \"lon\": ...}"));
      return;
    }
    try {
      await store.api.updateMeta(doc.path, patch);
      notify("metadata saved");
      refresh();
    } catch (err) {
      notifyError(err);
    }
  };

  const actions = el("div", { class: "meta-actions" }, [
    el("a", { href: `#pipeline${doc.path}`, class: "button-link" }, ["pipeline"]),
    el("a", { href: `#files${doc.path.split("/").slice(0, -1).join("/")}` , class: "button-link" }, ["open folder"]),
  ]);
  if (!doc.is_folder && (doc.mode === "tool" || doc.mode === "model")) {
    actions.prepend(el("a", { href: `#tool${doc.path}`, class: "button-link" }, ["tool panel"]));
  }
  if (doc.mode === "collection") {
    actions.prepend(el("a", { href: `#collections${doc.path}`, class: "button-link" }, ["members"]));
  }
  if (!doc.is_folder) {
    actions.append(el("a", {
      href: store.api.contentUrl(doc.path),
      class: "button-link",
      download: doc.path.split("/").pop() ?? "file",
    }, ["download"]));
  }

  return el("div", { class: "meta-panel" }, [
    el("h2", {}, [doc.path]),
    actions,
    readonlyRow("entity id", doc.entity_id),
    readonlyRow("mode", doc.mode + (doc.is_folder ? " (folder)" : "")),
    readonlyRow("owner", doc.owner),
    readonlyRow("format", doc.format),
    readonlyRow("privilege", doc.privilege),
    readonlyRow("size", doc.is_folder ? "-" : formatBytes(doc.size_bytes)),
    readonlyRow("content hash", doc.content_hash || "-"),
    readonlyRow("created", formatTimestamp(doc.created_at)),
    readonlyRow("updated", formatTimestamp(doc.updated_at)),
    el("h3", {}, ["editable"]),
    el("div", { class: "meta-row" }, [el("span", { class: "meta-label" }, ["category"]), category]),
    el("div", { class: "meta-row" }, [el("span", { class: "meta-label" }, ["labels"]), labels]),
    el("div", { class: "meta-row" }, [el("span", { class: "meta-label" }, ["description"]), description]),
    el("div", { class: "meta-row" }, [el("span", { class: "meta-label" }, ["realtime"]), realtime]),
    el("div", { class: "meta-row" }, [
      el("span", { class: "meta-label" }, ["time range"]), timeFrom, el("span", {}, ["to"]), timeTo,
    ]),
    el("div", { class: "meta-row" }, [el("span", { class: "meta-label" }, ["geo"]), geo]),
    el("button", { class: "primary", onclick: save }, ["save metadata"]),
  ]);
}
