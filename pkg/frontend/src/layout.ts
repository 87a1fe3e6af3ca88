/**
 * Client-side graph layouts. Graphs here are small (tens of nodes), so a
 * plain O(n^2) force simulation is fine. The simulation is seeded from the
 * graph id: the same graph always lands in the same arrangement, which keeps
 * the candidate grid visually stable across re-renders.
 */

import type { GraphRecord } from "./api.js";
import { hashString, mulberry32 } from "./rng.js";

export interface LayoutPoint {
  id: string;
  x: number;
  y: number;
}

export interface LayoutOptions {
  width?: number;
  height?: number;
  iterations?: number;
  /** Overrides the graph-id-derived seed; used by tests. */
  seed?: number;
}

const DEFAULTS = { width: 320, height: 240, iterations: 150 };

export function forceLayout(graph: GraphRecord, options: LayoutOptions = {}): LayoutPoint[] {
  const { width, height, iterations } = { ...DEFAULTS, ...options };
  const n = graph.nodes.length;
  if (n === 0) return [];
  const rand = mulberry32(options.seed ?? hashString(graph.id));
  const index = new Map(graph.nodes.map((node, i) => [node.id, i]));
  const x = new Float64Array(n);
  const y = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    x[i] = (rand() - 0.5) * width * 0.5;
    y[i] = (rand() - 0.5) * height * 0.5;
  }
  if (n === 1) return [{ id: graph.nodes[0].id, x: width / 2, y: height / 2 }];

  const edges = graph.edges.map((e) => [index.get(e.s)!, index.get(e.t)!] as const);
  const area = width * height;
  const spring = Math.sqrt(area / n) * 0.6;
  for (let it = 0; it < iterations; it++) {
    const temp = 0.1 * Math.min(width, height) * (1 - it / iterations);
    const dx = new Float64Array(n);
    const dy = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let ax = x[i] - x[j];
        let ay = y[i] - y[j];
        let d2 = ax * ax + ay * ay;
        if (d2 < 1e-6) {
          // coincident nodes repel in a deterministic direction
          ax = 1e-3 * (1 + i);
          ay = 1e-3 * (1 + j);
          d2 = ax * ax + ay * ay;
        }
        const rep = (spring * spring) / d2;
        dx[i] += ax * rep;
        dy[i] += ay * rep;
        dx[j] -= ax * rep;
        dy[j] -= ay * rep;
      }
    }
    for (const [i, j] of edges) {
      const ax = x[i] - x[j];
      const ay = y[i] - y[j];
      const d = Math.sqrt(ax * ax + ay * ay) || 1e-3;
      const att = (d * d) / spring / d;
      dx[i] -= ax * att;
      dy[i] -= ay * att;
      dx[j] += ax * att;
      dy[j] += ay * att;
    }
    for (let i = 0; i < n; i++) {
      const d = Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]) || 1e-9;
      const step = Math.min(d, temp);
      x[i] += (dx[i] / d) * step;
      y[i] += (dy[i] / d) * step;
    }
  }

  // fit into the viewport with a small margin
  const minX = Math.min(...x);
  const maxX = Math.max(...x);
  const minY = Math.min(...y);
  const maxY = Math.max(...y);
  const margin = 18;
  const sx = (width - 2 * margin) / Math.max(maxX - minX, 1e-9);
  const sy = (height - 2 * margin) / Math.max(maxY - minY, 1e-9);
  const s = Math.min(sx, sy);
  return graph.nodes.map((node, i) => ({
    id: node.id,
    x: margin + (x[i] - minX) * s + (width - 2 * margin - (maxX - minX) * s) / 2,
    y: margin + (y[i] - minY) * s + (height - 2 * margin - (maxY - minY) * s) / 2,
  }));
}

/**
 * Layered layout for directed graphs: nodes are placed on horizontal layers
 * by longest-path depth from the roots (generation axis), evenly spread
 * within each layer. Falls back to force layout when the graph has a cycle.
 */
export function treeLayout(graph: GraphRecord, options: LayoutOptions = {}): LayoutPoint[] {
  const { width, height } = { ...DEFAULTS, ...options };
  const depth = longestPathDepths(graph);
  if (depth === null) return forceLayout(graph, options);

  const layers = new Map<number, string[]>();
  for (const node of graph.nodes) {
    const d = depth.get(node.id)!;
    if (!layers.has(d)) layers.set(d, []);
    layers.get(d)!.push(node.id);
  }
  const maxDepth = Math.max(...layers.keys());
  const margin = 24;
  const points: LayoutPoint[] = [];
  for (const [d, ids] of layers) {
    ids.sort();
    const yPos = maxDepth === 0 ? height / 2 : margin + (d / maxDepth) * (height - 2 * margin);
    ids.forEach((id, i) => {
      points.push({
        id,
        x: margin + ((i + 1) / (ids.length + 1)) * (width - 2 * margin),
        y: yPos,
      });
    });
  }
  const order = new Map(graph.nodes.map((node, i) => [node.id, i]));
  return points.sort((a, b) => order.get(a.id)! - order.get(b.id)!);
}

/** Longest-path depth per node for a DAG; null when a cycle is present. */
function longestPathDepths(graph: GraphRecord): Map<string, number> | null {
  const indegree = new Map(graph.nodes.map((node) => [node.id, 0]));
  const out = new Map<string, string[]>(graph.nodes.map((node) => [node.id, []]));
  for (const e of graph.edges) {
    out.get(e.s)!.push(e.t);
    indegree.set(e.t, (indegree.get(e.t) ?? 0) + 1);
  }
  const depth = new Map<string, number>();
  const queue = graph.nodes.filter((node) => indegree.get(node.id) === 0).map((node) => node.id);
  for (const id of queue) depth.set(id, 0);
  let head = 0;
  while (head < queue.length) {
    const u = queue[head++];
    for (const v of out.get(u)!) {
      depth.set(v, Math.max(depth.get(v) ?? 0, depth.get(u)! + 1));
      indegree.set(v, indegree.get(v)! - 1);
      if (indegree.get(v) === 0) queue.push(v);
    }
  }
  return queue.length === graph.nodes.length ? depth : null;
}
