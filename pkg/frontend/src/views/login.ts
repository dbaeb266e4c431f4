import { clear, el } from "../dom.js";
import { notifyError } from "../notices.js";
import type { Store } from "../state.js";

export function renderLogin(root: HTMLElement, store: Store, onDone: () => void): void {
  const input = el("input", {
    type: "password",
    placeholder: "API key",
    class: "login-key",
    autofocus: true,
  });
  const form = el("form", {
    class: "login-form",
    onsubmit: async (ev) => {
      ev.preventDefault();
      try {
        await store.login(input.value.trim());
        onDone();
      } catch (err) {
        notifyError(err);
      }
    },
  }, [
    el("h1", {}, ["aghub"]),
    el("p", {}, ["Enter your API key to open your data root."]),
    input,
    el("button", { type: "submit" }, ["Sign in"]),
  ]);
  clear(root).appendChild(el("div", { class: "login-wrap" }, [form]));
}
