// Shapes of the canonical-JSON API responses. Field names mirror the
// server exactly; the client never invents data (no client-side authority).

export type Mode = "data" | "tool" | "model" | "collection";
export type Privilege = "public" | "private";
export type RunStatus = "queued" | "running" | "succeeded" | "failed" | "cancelled";

export interface GeoPoint {
  lat: number;
  lon: number;
}

export interface GeoBBox {
  min_lat: number;
  min_lon: number;
  max_lat: number;
  max_lon: number;
}

export interface MetadataDoc {
  entity_id: string;
  path: string;
  mode: Mode;
  is_folder: boolean;
  owner: string;
  format: string;
  category: string;
  labels: string[];
  privilege: Privilege;
  realtime: boolean;
  time_range: [number, number] | null;
  geo: GeoPoint | GeoBBox | null;
  description: string;
  size_bytes: number;
  content_hash: string;
  created_at: number;
  updated_at: number;
}

export interface SearchHit {
  entity_id: string;
  path: string;
  similarity: number;
  mode: Mode;
}

export interface ProjectionPoint {
  entity_id: string;
  x: number;
  y: number;
  mode: Mode;
}

export interface GeoMark {
  entity_id: string;
  lat: number;
  lon: number;
  mode: Mode;
  path: string;
}

export interface SearchResponse {
  hits: SearchHit[];
  projection: ProjectionPoint[];
  geo: GeoMark[];
}

export interface ArgSpec {
  name: string;
  kind: "string" | "int" | "float" | "flag" | "path_in" | "path_out";
  required: boolean;
  default: unknown;
}

export interface ToolSpec {
  tool_entity: string;
  executor_profile: string;
  argspec: ArgSpec[];
}

export interface RunRecord {
  run_id: string;
  container_id: string;
  image: string;
  status: RunStatus;
  started_at: number;
  running_time: number;
  actor: string;
  bindings: Record<string, unknown>;
  output_ids: string[];
  log_excerpt: string;
  tool_id: string;
}

export interface ProvNode {
  entity_id: string;
  path_at_creation: string;
  deleted: boolean;
}

export interface ProvEdge {
  edge_id: number;
  kind: string;
  inputs: string[];
  outputs: string[];
  actor: string;
  tool: string | null;
  args: string | null;
  timestamp: number;
}

export interface PipelineView {
  focus: string;
  nodes: ProvNode[];
  edges: ProvEdge[];
  truncated: boolean;
  dot: string;
}

export interface CollectionView {
  collection: MetadataDoc;
  members: MetadataDoc[];
}

export interface ErrorEnvelope {
  error: { code: string; message: string };
}

export interface SearchFilters {
  mode?: Mode;
  format?: string;
  category?: string;
  labels?: string[];
  privilege?: Privilege;
  realtime?: boolean;
  from?: number;
  to?: number;
  bbox?: string;
}
