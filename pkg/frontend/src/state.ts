// Single view-state store with subscriptions. Every datum in it comes
// from an API response; the client holds no authority of its own.

import { ApiClient } from "./api.js";
import { RunPoller } from "./poll.js";
import type { SearchFilters, SearchResponse } from "./types.js";

export type Panel = "files" | "metadata" | "tool" | "pipeline" | "search" | "collections";

export interface ViewState {
  username: string | null;
  currentPath: string;
  panel: Panel;
  searchQuery: string;
  searchFilters: SearchFilters;
  searchResults: SearchResponse | null;
}

type Listener = (state: ViewState) => void;

const POLL_KEY = "aghub_poll_ms";
const SESSION_KEY = "aghub_key";

export class Store {
  api: ApiClient;
  poller: RunPoller;
  state: ViewState = {
    username: null,
    currentPath: "/",
    panel: "files",
    searchQuery: "",
    searchFilters: {},
    searchResults: null,
  };
  private listeners: Listener[] = [];

  constructor(baseUrl = "") {
    const key = localStorage.getItem(SESSION_KEY) ?? "";
    const pollMs = Number(localStorage.getItem(POLL_KEY) ?? "") || 2000;
    this.api = new ApiClient(baseUrl, key);
    this.poller = new RunPoller((runId) => this.api.runStatus(runId), pollMs);
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async login(key: string): Promise<string> {
    this.api.key = key;
    const { username } = await this.api.whoami();
    localStorage.setItem(SESSION_KEY, key);
    this.update({ username, currentPath: `/${username}/ag_data` });
    return username;
  }

  logout(): void {
    localStorage.removeItem(SESSION_KEY);
    this.api.key = "";
    this.poller.stopAll();
    this.update({ username: null });
  }

  setPollInterval(ms: number): void {
    this.poller.intervalMs = ms;
    localStorage.setItem(POLL_KEY, String(ms));
  }
}
