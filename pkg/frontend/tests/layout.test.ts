import { describe, expect, it } from "vitest";

import type { GraphRecord } from "../src/api.js";
import { forceLayout, treeLayout } from "../src/layout.js";
import { hashString, mulberry32 } from "../src/rng.js";

function graph(id: string, n: number, edges: [number, number][], directed = false): GraphRecord {
  return {
    id,
    directed,
    nodes: Array.from({ length: n }, (_, i) => ({ id: `n${i}`, label: "a", attrs: {} })),
    edges: edges.map(([s, t]) => ({ s: `n${s}`, t: `n${t}` })),
    macroAttrs: {},
  };
}

describe("rng", () => {
  it("hashString is stable and spreads distinct ids", () => {
    expect(hashString("g0")).toBe(hashString("g0"));
    expect(hashString("g0")).not.toBe(hashString("g1"));
  });

  it("mulberry32 is deterministic per seed and uniform in [0, 1)", () => {
    const a = mulberry32(7);
    const b = mulberry32(7);
    const seq = Array.from({ length: 100 }, () => a());
    expect(Array.from({ length: 100 }, () => b())).toEqual(seq);
    expect(seq.every((v) => v >= 0 && v < 1)).toBe(true);
  });
});

describe("forceLayout", () => {
  it("is deterministic for a given graph id", () => {
    const g = graph("g7", 6, [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5]]);
    expect(forceLayout(g)).toEqual(forceLayout(g));
  });

  it("different graph ids produce different arrangements", () => {
    const a = forceLayout(graph("a", 5, [[0, 1], [1, 2]]));
    const b = forceLayout(graph("b", 5, [[0, 1], [1, 2]]));
    expect(a).not.toEqual(b);
  });

  it("keeps every node inside the viewport", () => {
    const g = graph("big", 12, Array.from({ length: 11 }, (_, i) => [i, i + 1] as [number, number]));
    for (const p of forceLayout(g, { width: 200, height: 150 })) {
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(200);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(150);
    }
  });

  it("centers a single node and returns one point per node", () => {
    const pts = forceLayout(graph("solo", 1, []), { width: 100, height: 80 });
    expect(pts).toEqual([{ id: "n0", x: 50, y: 40 }]);
    expect(forceLayout(graph("trio", 3, []))).toHaveLength(3);
  });

  it("places adjacent nodes closer than the graph diameter endpoints", () => {
    const g = graph("chain", 8, Array.from({ length: 7 }, (_, i) => [i, i + 1] as [number, number]));
    const pts = new Map(forceLayout(g).map((p) => [p.id, p]));
    const dist = (a: string, b: string) =>
      Math.hypot(pts.get(a)!.x - pts.get(b)!.x, pts.get(a)!.y - pts.get(b)!.y);
    expect(dist("n0", "n1")).toBeLessThan(dist("n0", "n7"));
  });
});

describe("treeLayout", () => {
  it("stacks layers by longest-path depth", () => {
    // root n0, children n1 n2, grandchild n3
    const g = graph("t", 4, [[0, 1], [0, 2], [1, 3]], true);
    const pts = new Map(treeLayout(g).map((p) => [p.id, p]));
    expect(pts.get("n0")!.y).toBeLessThan(pts.get("n1")!.y);
    expect(pts.get("n1")!.y).toBe(pts.get("n2")!.y);
    expect(pts.get("n1")!.y).toBeLessThan(pts.get("n3")!.y);
  });

  it("uses the longest path when multiple routes reach a node", () => {
    // n3 reachable directly and via n1-n2; depth should be 3
    const g = graph("lp", 4, [[0, 1], [1, 2], [2, 3], [0, 3]], true);
    const pts = new Map(treeLayout(g).map((p) => [p.id, p]));
    expect(pts.get("n3")!.y).toBeGreaterThan(pts.get("n2")!.y);
  });

  it("falls back to force layout on cycles", () => {
    const g = graph("cyc", 3, [[0, 1], [1, 2], [2, 0]], true);
    expect(treeLayout(g)).toEqual(forceLayout(g));
  });
});
