import { describe, expect, it } from "vitest";

import { MODE_COLORS, fitToViewport, mapToViewport } from "../src/scatter.js";
import type { Mode } from "../src/types.js";

const point = (id: string, x: number, y: number, mode: Mode = "data") => ({
  entity_id: id, x, y, mode,
});

describe("fitToViewport", () => {
  it("maps the extremes inside the padded viewport", () => {
    const pts = [point("a", -1, -1), point("b", 1, 1), point("c", 0, 0)];
    const screen = fitToViewport(pts, 400, 300, 16);
    for (const p of screen) {
      expect(p.sx).toBeGreaterThanOrEqual(16);
      expect(p.sx).toBeLessThanOrEqual(400 - 16);
      expect(p.sy).toBeGreaterThanOrEqual(16);
      expect(p.sy).toBeLessThanOrEqual(300 - 16);
    }
  });

  it("preserves relative geometry and inverts y", () => {
    const screen = fitToViewport([point("lo", 0, 0), point("hi", 0, 2)], 200, 200);
    const lo = screen.find((p) => p.id === "lo")!;
    const hi = screen.find((p) => p.id === "hi")!;
    expect(lo.sx).toBeCloseTo(hi.sx, 9);
    expect(hi.sy).toBeLessThan(lo.sy); // larger y is higher on screen
  });

  it("centers a single point", () => {
    const [p] = fitToViewport([point("only", 7, -3)], 100, 80);
    expect(p.sx).toBeCloseTo(50);
    expect(p.sy).toBeCloseTo(40);
  });

  it("keeps one screen point per input point with mode colors", () => {
    const pts = [point("a", 0, 0, "data"), point("b", 1, 1, "tool")];
    const screen = fitToViewport(pts, 100, 100);
    expect(screen.map((p) => p.color)).toEqual([MODE_COLORS.data, MODE_COLORS.tool]);
  });

  it("returns empty for empty input", () => {
    expect(fitToViewport([], 100, 100)).toEqual([]);
  });
});

describe("mapToViewport", () => {
  it("is the equirectangular identity at the corners", () => {
    expect(mapToViewport(90, -180, 360, 180)).toEqual({ sx: 0, sy: 0 });
    expect(mapToViewport(-90, 180, 360, 180)).toEqual({ sx: 360, sy: 180 });
    expect(mapToViewport(0, 0, 360, 180)).toEqual({ sx: 180, sy: 90 });
  });

  it("scales linearly with the viewport", () => {
    const { sx, sy } = mapToViewport(45, 90, 400, 200);
    expect(sx).toBeCloseTo(((90 + 180) / 360) * 400);
    expect(sy).toBeCloseTo(((90 - 45) / 180) * 200);
  });
});
