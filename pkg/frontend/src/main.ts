// Entry point: key gate, hash router, panel navigation. Reloading any
// URL re-fetches everything from the service, so the view always
// reflects server state.

import "./styles.css";

import { mountNotices } from "./notices.js";
import { Store } from "./state.js";
import { renderCollections } from "./views/collections.js";
import { renderFiles } from "./views/files.js";
import { renderLogin } from "./views/login.js";
import { renderMetadata } from "./views/metadata.js";
import { renderPipeline } from "./views/pipeline.js";
import { renderSearch } from "./views/search.js";
import { renderTool } from "./views/tool.js";
import { clear, el } from "./dom.js";

export function parseRoute(hash: string): { panel: string; path: string } {
  const raw = hash.replace(/^#/, "");
  for (const panel of ["files", "meta", "tool", "pipeline", "collections"]) {
    if (raw === panel || raw.startsWith(`${panel}/`)) {
      return { panel, path: raw.slice(panel.length) || "" };
    }
  }
  if (raw === "search") return { panel: "search", path: "" };
  return { panel: "files", path: "" };
}

function boot(): void {
  const root = document.getElementById("app")!;
  mountNotices(document.body);
  const store = new Store("");

  const content = el("main", { class: "content" });

  const nav = el("nav", { class: "sidebar" }, [
    el("h1", {}, ["aghub"]),
    el("a", { href: "#files", class: "nav-link" }, ["files"]),
    el("a", { href: "#search", class: "nav-link" }, ["search"]),
    el("a", { href: "#collections", class: "nav-link" }, ["collections"]),
    el("div", { class: "nav-footer" }, [
      el("span", { class: "nav-user" }, []),
      el("button", {
        onclick: () => {
          store.logout();
          location.hash = "";
          start();
        },
      }, ["sign out"]),
    ]),
  ]);

  const route = () => {
    const { panel, path } = parseRoute(location.hash);
    const fallback = `/${store.state.username}/ag_data`;
    switch (panel) {
      case "files":
        store.update({ panel: "files", currentPath: path || fallback });
        renderFiles(content, store);
        break;
      case "meta":
        store.update({ panel: "metadata" });
        renderMetadata(content, store, path || fallback);
        break;
      case "tool":
        store.update({ panel: "tool" });
        renderTool(content, store, path);
        break;
      case "pipeline":
        store.update({ panel: "pipeline" });
        renderPipeline(content, store, path || fallback);
        break;
      case "search":
        store.update({ panel: "search" });
        renderSearch(content, store);
        break;
      case "collections":
        store.update({ panel: "collections" });
        renderCollections(content, store, path || undefined);
        break;
    }
  };

  const showShell = () => {
    clear(root).append(nav, content);
    (nav.querySelector(".nav-user") as HTMLElement).textContent = store.state.username ?? "";
    route();
  };

  const start = () => {
    if (!store.api.key) {
      renderLogin(root, store, showShell);
      return;
    }
    store.api.whoami().then(({ username }) => {
      store.update({ username });
      showShell();
    }).catch(() => renderLogin(root, store, showShell));
  };

  window.addEventListener("hashchange", () => {
    if (store.state.username) route();
  });
  start();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
