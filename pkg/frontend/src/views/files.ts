// File browser: navigate folders, upload, mkdir, move/copy/delete, and
// the locker icon that toggles recursive visibility.

import { clear, el } from "../dom.js";
import { baseName, formatBytes, parentPath } from "../format.js";
import { notify, notifyError } from "../notices.js";
import type { Store } from "../state.js";
import type { MetadataDoc } from "../types.js";

const MODE_ICONS: Record<string, string> = {
  data: "\u{1F4C4}",        // page
  tool: "\u{1F527}",        // wrench
  model: "\u{1F9E0}",       // brain
  collection: "\u{1F4DA}",  // books
};

function icon(doc: MetadataDoc): string {
  if (doc.is_folder && doc.mode === "data") return "\u{1F4C1}";
  return MODE_ICONS[doc.mode] ?? "\u{1F4C4}";
}

function locker(doc: MetadataDoc, store: Store, refresh: () => void): HTMLElement {
  const isPublic = doc.privilege === "public";
  return el("button", {
    class: "locker",
    title: isPublic ? "public: click to make private (recursive)"
                    : "private: click to make public (recursive)",
    onclick: async (ev) => {
      ev.stopPropagation();
      try {
        const target = isPublic ? "private" : "public";
        const { affected } = await store.api.setVisibility(doc.path, target);
        notify(`${target}: ${affected.length} path(s) affected`);
        refresh();
      } catch (err) {
        notifyError(err);
      }
    },
  }, [isPublic ? "\u{1F513}" : "\u{1F512}"]);
}

export function renderFiles(root: HTMLElement, store: Store): void {
  const path = store.state.currentPath;
  const container = clear(root);
  const listing = el("div", { class: "file-list" }, ["loading..."]);

  const navigate = (next: string) => {
    location.hash = `#files${next}`;
  };

  const refresh = () => renderFiles(root, store);

  const crumbs = el("div", { class: "crumbs" });
  let acc = "";
  for (const segment of path.split("/").filter(Boolean)) {
    acc += `/${segment}`;
    const target = acc;
    crumbs.append(
      "/",
      el("a", { href: `#files${target}` }, [segment]),
    );
  }

  const fileInput = el("input", { type: "file", class: "hidden-input" });
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const mode = modeSelect.value;
    try {
      await store.api.upload(`${path}/${file.name}`, mode, file);
      notify(`uploaded ${file.name}`);
      refresh();
    } catch (err) {
      notifyError(err);
    }
  });
  const modeSelect = el("select", { class: "mode-select" }, [
    el("option", { value: "data" }, ["data"]),
    el("option", { value: "tool" }, ["tool"]),
    el("option", { value: "model" }, ["model"]),
  ]);

  const toolbar = el("div", { class: "toolbar" }, [
    el("button", { onclick: () => navigate(parentPath(path)) }, ["↑ up"]),
    crumbs,
    el("span", { class: "spacer" }),
    modeSelect,
    el("button", { onclick: () => fileInput.click() }, ["upload"]),
    fileInput,
    el("button", {
      onclick: async () => {
        const name = prompt("new folder name");
        if (!name) return;
        try {
          await store.api.mkdir(`${path}/${name}`);
          refresh();
        } catch (err) {
          notifyError(err);
        }
      },
    }, ["new folder"]),
    el("button", {
      onclick: async () => {
        const name = prompt("new collection name");
        if (!name) return;
        try {
          await store.api.mkdir(`${path}/${name}`, "collection");
          refresh();
        } catch (err) {
          notifyError(err);
        }
      },
    }, ["new collection"]),
  ]);

  container.append(toolbar, listing);

  store.api.list(path).then((docs) => {
    clear(listing);
    if (docs.length === 0) {
      listing.append(el("p", { class: "empty" }, ["(empty)"]));
      return;
    }
    for (const doc of docs) {
      const row = el("div", { class: "file-row", "data-path": doc.path }, [
        el("span", { class: "file-icon" }, [icon(doc)]),
        el("a", {
          class: "file-name",
          href: doc.is_folder || doc.mode === "collection"
            ? `#files${doc.path}`
            : `#meta${doc.path}`,
        }, [baseName(doc.path)]),
        el("span", { class: "file-mode" }, [doc.mode]),
        el("span", { class: "file-size" }, [doc.is_folder ? "" : formatBytes(doc.size_bytes)]),
        locker(doc, store, refresh),
        el("a", { class: "row-action", href: `#meta${doc.path}`, title: "metadata" }, ["info"]),
        el("button", {
          class: "row-action",
          title: "move",
          onclick: async () => {
            const dst = prompt("move to path", doc.path);
            if (!dst || dst === doc.path) return;
            try {
              await store.api.move(doc.path, dst);
              refresh();
            } catch (err) {
              notifyError(err);
            }
          },
        }, ["mv"]),
        el("button", {
          class: "row-action",
          title: "copy",
          onclick: async () => {
            const dst = prompt("copy to path", `${doc.path}.copy`);
            if (!dst) return;
            try {
              await store.api.copy(doc.path, dst);
              refresh();
            } catch (err) {
              notifyError(err);
            }
          },
        }, ["cp"]),
        el("button", {
          class: "row-action row-danger",
          title: "delete",
          onclick: async () => {
            if (!confirm(`delete ${doc.path} and all descendants?`)) return;
            try {
              const { removed } = await store.api.remove(doc.path);
              notify(`removed ${removed.length} entit(ies)`);
              refresh();
            } catch (err) {
              notifyError(err);
            }
          },
        }, ["rm"]),
      ]);
      listing.append(row);
    }
  }).catch((err) => {
    clear(listing).append(el("p", { class: "empty" }, ["not found"]));
    notifyError(err);
  });
}
