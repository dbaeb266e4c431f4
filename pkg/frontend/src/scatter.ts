// Pure coordinate math for the two plot views. The embedding scatter
// plots exactly the server's projection payload; the map is a plain
// equirectangular lat/lon scatter (no tile service).

import type { Mode } from "./types.js";

export const MODE_COLORS: Record<Mode, string> = {
  data: "#2e7d32",
  tool: "#1565c0",
  model: "#ef6c00",
  collection: "#6a1b9a",
};

export interface ScreenPoint {
  id: string;
  sx: number;
  sy: number;
  color: string;
}

/** Fit (x, y) points into a width x height viewport, preserving aspect. */
export function fitToViewport(
  points: { entity_id: string; x: number; y: number; mode: Mode }[],
  width: number,
  height: number,
  pad = 16,
): ScreenPoint[] {
  if (points.length === 0) return [];
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const span = Math.max(maxX - minX, maxY - minY);
  const scale = span > 0 ? (Math.min(width, height) - 2 * pad) / span : 0;
  const cx = (minX + maxX) / 2;
  const cy = (minY + maxY) / 2;
  return points.map((p) => ({
    id: p.entity_id,
    sx: width / 2 + (p.x - cx) * scale,
    // screen y grows downward
    sy: height / 2 - (p.y - cy) * scale,
    color: MODE_COLORS[p.mode],
  }));
}

/** Equirectangular projection of a lat/lon pair into the viewport. */
export function mapToViewport(lat: number, lon: number, width: number, height: number) {
  return {
    sx: ((lon + 180) / 360) * width,
    sy: ((90 - lat) / 180) * height,
  };
}
