// Tool panel: edit the argument spec, bind arguments (path args get a
// file picker over the user's visible tree), launch runs, and monitor
// them live (poll every 2 s by default; green dot while active).

import { clear, el } from "../dom.js";
import { baseName, formatDuration } from "../format.js";
import { notify, notifyError } from "../notices.js";
import type { Store } from "../state.js";
import type { ArgSpec, MetadataDoc, RunRecord, ToolSpec } from "../types.js";

const KINDS = ["string", "int", "float", "flag", "path_in", "path_out"];

export function renderTool(root: HTMLElement, store: Store, path: string): void {
  const container = clear(root);
  container.append(el("p", {}, ["loading..."]));
  Promise.all([
    store.api.metadata(path),
    store.api.toolSpec(path).catch(() => null),
  ]).then(([doc, spec]) => {
    clear(container);
    container.append(buildToolPanel(store, doc, spec));
  }).catch((err) => {
    clear(container).append(el("p", { class: "empty" }, ["not found"]));
    notifyError(err);
  });
}

function buildToolPanel(store: Store, doc: MetadataDoc, spec: ToolSpec | null): HTMLElement {
  const panel = el("div", { class: "tool-panel" });
  const headline = el("h2", {}, []);
  const greenDot = el("span", { class: "green-dot hidden" }, ["●"]);
  headline.append(greenDot, ` ${doc.path}`);
  panel.append(headline);

  // -- argspec editor ------------------------------------------------
  const rows = el("div", { class: "arg-rows" });
  const addRow = (arg?: ArgSpec) => {
    const name = el("input", { value: arg?.name ?? "", placeholder: "name" });
    const kind = el("select", {}, KINDS.map((k) =>
      el("option", { value: k, ...(arg?.kind === k ? { selected: true } : {}) }, [k]),
    ));
    const required = el("input", { type: "checkbox" });
    required.checked = arg?.required ?? false;
    const dflt = el("input", {
      value: arg?.default != null ? String(arg.default) : "",
      placeholder: "default",
    });
    const row = el("div", { class: "arg-row" }, [
      name, kind, el("label", {}, [required, " required"]), dflt,
      el("button", { onclick: () => row.remove() }, ["remove"]),
    ]);
    rows.append(row);
  };
  for (const arg of spec?.argspec ?? []) addRow(arg);

  const saveSpec = async () => {
    const argspec = [...rows.querySelectorAll(".arg-row")].map((row) => {
      const [name, dflt] = [...row.querySelectorAll("input:not([type=checkbox])")] as HTMLInputElement[];
      const kind = (row.querySelector("select") as HTMLSelectElement).value;
      const required = (row.querySelector("input[type=checkbox]") as HTMLInputElement).checked;
      return {
        name: name.value.trim(),
        kind,
        required,
        default: dflt.value === "" ? null : dflt.value,
      };
    }).filter((a) => a.name);
    try {
      const saved = await store.api.setToolSpec(doc.path, argspec);
      notify(`argspec saved (${saved.argspec.length} args)`);
      renderBindings(saved);
    } catch (err) {
      notifyError(err);
    }
  };

  panel.append(
    el("h3", {}, ["command-line arguments"]),
    rows,
    el("div", { class: "toolbar" }, [
      el("button", { onclick: () => addRow() }, ["add argument"]),
      el("button", { class: "primary", onclick: saveSpec }, ["save argspec"]),
    ]),
  );

  // -- run form ---------------------------------------------------------
  const bindingsBox = el("div", { class: "bindings" });
  const runsBox = el("div", { class: "runs-box" });
  panel.append(el("h3", {}, ["run"]), bindingsBox, runsBox);

  const bindingInputs = new Map<string, HTMLInputElement>();

  const renderBindings = (current: ToolSpec | null) => {
    clear(bindingsBox);
    bindingInputs.clear();
    for (const arg of current?.argspec ?? []) {
      const input = el("input", {
        placeholder: arg.kind.startsWith("path") ? "/user/ag_data/..." : arg.kind,
        "data-arg": arg.name,
      });
      bindingInputs.set(arg.name, input);
      const row = el("div", { class: "bind-row" }, [
        el("span", { class: "meta-label" }, [`${arg.name} (${arg.kind}${arg.required ? ", required" : ""})`]),
        input,
      ]);
      if (arg.kind === "path_in") {
        row.append(el("button", {
          onclick: () => openPicker(store, (picked) => { input.value = picked; }),
        }, ["pick file"]));
      }
      bindingsBox.append(row);
    }
    bindingsBox.append(el("button", {
      class: "primary run-button",
      onclick: () => void launch(),
    }, ["Run"]));
  };

  const watchRecord = (record: RunRecord) => {
    store.poller.watch(record, (update) => {
      renderRunRow(update);
      greenDot.classList.toggle("hidden", !store.poller.toolIsActive(doc.entity_id));
    });
  };

  const launch = async () => {
    const bindings: Record<string, unknown> = {};
    for (const [name, input] of bindingInputs) {
      if (input.value !== "") bindings[name] = input.value;
    }
    try {
      const record = await store.api.launchRun(doc.path, bindings);
      notify(`run ${record.run_id.slice(0, 8)} starts in a sandboxed environment`);
      watchRecord(record);
    } catch (err) {
      notifyError(err);
    }
  };

  // -- run monitor -----------------------------------------------------
  const runRows = new Map<string, HTMLElement>();
  const renderRunRow = (record: RunRecord) => {
    let row = runRows.get(record.run_id);
    if (!row) {
      row = el("div", { class: "run-row", "data-run": record.run_id });
      runsBox.prepend(row);
      runRows.set(record.run_id, row);
    }
    clear(row).append(
      el("span", { class: `run-status run-${record.status}` }, [record.status]),
      el("span", { class: "run-id" }, [`container ${record.container_id}`]),
      el("span", {}, [`image ${record.image}`]),
      el("span", {}, [formatDuration(record.running_time)]),
      el("span", { class: "run-outputs" },
        record.output_ids.length ? [`outputs: ${record.output_ids.length}`] : []),
      ...(record.status === "queued" || record.status === "running"
        ? [el("button", {
            onclick: async () => {
              try {
                watchRecord(await store.api.cancelRun(record.run_id));
              } catch (err) {
                notifyError(err);
              }
            },
          }, ["cancel"])]
        : []),
    );
  };

  renderBindings(spec);
  store.api.runs(doc.path).then((records) => {
    for (const record of [...records].reverse()) watchRecord(record);
  }).catch(() => undefined);

  return panel;
}

/** Minimal file picker: walk the visible tree starting at the data root. */
function openPicker(store: Store, onPick: (path: string) => void): void {
  const username = store.state.username;
  if (!username) return;
  const overlay = el("div", { class: "picker-overlay" });
  const body = el("div", { class: "picker-body" });
  overlay.append(body);
  const show = (path: string) => {
    clear(body).append(
      el("div", { class: "picker-head" }, [
        el("strong", {}, [path]),
        el("button", { onclick: () => overlay.remove() }, ["close"]),
      ]),
    );
    store.api.list(path).then((docs) => {
      for (const doc of docs) {
        body.append(el("div", { class: "picker-row" }, [
          el("a", {
            href: "#",
            onclick: (ev) => {
              ev.preventDefault();
              if (doc.is_folder) {
                show(doc.path);
              } else {
                onPick(doc.path);
                overlay.remove();
              }
            },
          }, [(doc.is_folder ? "\u{1F4C1} " : "\u{1F4C4} ") + baseName(doc.path)]),
        ]));
      }
    }).catch(notifyError);
  };
  show(`/${username}/ag_data`);
  document.body.append(overlay);
}
