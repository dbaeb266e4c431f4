import type {
  CollectionView,
  MetadataDoc,
  PipelineView,
  RunRecord,
  SearchFilters,
  SearchResponse,
  ToolSpec,
} from "./types.js";

export class ApiError extends Error {
  constructor(public code: string, message: string, public status: number) {
    super(message);
  }
}

/** Build /api_search query parameters from a query + filter object. */
export function searchParams(q: string, k: number, filters: SearchFilters): URLSearchParams {
  const params = new URLSearchParams();
  params.set("q", q);
  params.set("k", String(k));
  if (filters.mode) params.set("mode", filters.mode);
  if (filters.format) params.set("format", filters.format);
  if (filters.category) params.set("category", filters.category);
  for (const label of filters.labels ?? []) params.append("label", label);
  if (filters.privilege) params.set("privilege", filters.privilege);
  if (filters.realtime !== undefined) params.set("realtime", String(filters.realtime));
  if (filters.from !== undefined) params.set("from", String(filters.from));
  if (filters.to !== undefined) params.set("to", String(filters.to));
  if (filters.bbox) params.set("bbox", filters.bbox);
  return params;
}

export class ApiClient {
  constructor(public baseUrl: string = "", public key: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "X-Api-Key": this.key };
    let payload: string | undefined;
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      payload = JSON.stringify(body);
    }
    const resp = await fetch(this.baseUrl + path, { method, headers, body: payload });
    if (!resp.ok) {
      let code = "internal";
      let message = `HTTP ${resp.status}`;
      try {
        const envelope = await resp.json();
        code = envelope.error.code;
        message = envelope.error.message;
      } catch {
        // non-JSON error body; keep the defaults
      }
      throw new ApiError(code, message, resp.status);
    }
    return (await resp.json()) as T;
  }

  whoami(): Promise<{ username: string }> {
    return this.request("GET", "/api_whoami");
  }

  metadata(path: string): Promise<MetadataDoc> {
    return this.request("GET", `/api_meta_data?path=${encodeURIComponent(path)}`);
  }

  list(path: string): Promise<MetadataDoc[]> {
    return this.request("GET", `/api_list_sub_items?path=${encodeURIComponent(path)}`);
  }

  search(q: string, k: number, filters: SearchFilters = {}): Promise<SearchResponse> {
    return this.request("GET", `/api_search?${searchParams(q, k, filters)}`);
  }

  async upload(path: string, mode: string, data: Blob | Uint8Array): Promise<MetadataDoc> {
    const params = new URLSearchParams({ path, mode });
    const resp = await fetch(`${this.baseUrl}/api_upload?${params}`, {
      method: "POST",
      headers: { "X-Api-Key": this.key },
      body: data as BodyInit,
    });
    if (!resp.ok) {
      const envelope = await resp.json();
      throw new ApiError(envelope.error.code, envelope.error.message, resp.status);
    }
    return (await resp.json()) as MetadataDoc;
  }

  mkdir(path: string, mode = "data"): Promise<MetadataDoc> {
    return this.request("POST", "/api_mkdir", { path, mode });
  }

  async content(path: string): Promise<Blob> {
    const resp = await fetch(
      `${this.baseUrl}/api_content?path=${encodeURIComponent(path)}`,
      { headers: { "X-Api-Key": this.key } },
    );
    if (!resp.ok) {
      const envelope = await resp.json();
      throw new ApiError(envelope.error.code, envelope.error.message, resp.status);
    }
    return resp.blob();
  }

  contentUrl(path: string): string {
    const params = new URLSearchParams({ path, key: this.key });
    return `${this.baseUrl}/api_content?${params}`;
  }

  updateMeta(path: string, patch: Record<string, unknown>): Promise<MetadataDoc> {
    return this.request("POST", "/api_update_meta", { path, patch });
  }

  setVisibility(path: string, privilege: string): Promise<{ affected: string[] }> {
    return this.request("POST", "/api_visibility", { path, privilege });
  }

  remove(path: string): Promise<{ removed: string[] }> {
    return this.request("POST", "/api_delete", { path });
  }

  move(src: string, dst: string): Promise<MetadataDoc> {
    return this.request("POST", "/api_move", { src, dst });
  }

  copy(src: string, dst: string): Promise<{ entity_id: string }> {
    return this.request("POST", "/api_copy", { src, dst });
  }

  collection(path: string): Promise<CollectionView> {
    return this.request("GET", `/api_collection?path=${encodeURIComponent(path)}`);
  }

  collectionAction(action: string, path: string, member?: string): Promise<unknown> {
    return this.request("POST", "/api_collection", { action, path, member });
  }

  toolSpec(tool: string): Promise<ToolSpec> {
    return this.request("GET", `/api_argspec?tool=${encodeURIComponent(tool)}`);
  }

  setToolSpec(tool: string, argspec: object[], executorProfile = "python3"): Promise<ToolSpec> {
    return this.request("POST", "/api_argspec", {
      tool,
      argspec,
      executor_profile: executorProfile,
    });
  }

  launchRun(
    tool: string,
    bindings: Record<string, unknown>,
    outputMode = "data",
  ): Promise<RunRecord> {
    return this.request("POST", "/api_run", { tool, bindings, output_mode: outputMode });
  }

  runStatus(runId: string): Promise<RunRecord> {
    return this.request("GET", `/api_run_status?run_id=${encodeURIComponent(runId)}`);
  }

  runs(tool: string): Promise<RunRecord[]> {
    return this.request("GET", `/api_runs?tool=${encodeURIComponent(tool)}`);
  }

  cancelRun(runId: string): Promise<RunRecord> {
    return this.request("POST", "/api_run_cancel", { run_id: runId });
  }

  pipeline(path: string, depth = 5): Promise<PipelineView> {
    const params = new URLSearchParams({ path, depth: String(depth) });
    return this.request("GET", `/api_pipeline?${params}`);
  }

  createUser(username: string): Promise<{ username: string; api_key: string }> {
    return this.request("POST", "/api_create_user", { username });
  }
}
