// Non-blocking notices: errors and confirmations stack in a corner and
// fade; nothing modal.

let container: HTMLElement | null = null;

export function mountNotices(parent: HTMLElement): void {
  container = document.createElement("div");
  container.className = "notices";
  parent.appendChild(container);
}

export function notify(message: string, kind: "info" | "error" = "info", ttlMs = 5000): void {
  if (!container) return;
  const node = document.createElement("div");
  node.className = `notice notice-${kind}`;
  node.textContent = message;
  container.appendChild(node);
  setTimeout(() => node.remove(), ttlMs);
}

export function notifyError(err: unknown): void {
  const message = err instanceof Error ? err.message : String(err);
  notify(message, "error", 8000);
}
