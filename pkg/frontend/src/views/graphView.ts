/**
 * Node-link rendering of a single graph (the target view and the candidate
 * thumbnails). Visual encoding is schema-driven: one attribute can drive node
 * radius and another node fill; edge width follows the edge weight.
 */

import type { GraphPayload, GraphRecord } from "../api.js";
import { forceLayout, treeLayout } from "../layout.js";
import { clear, svgEl } from "./svg.js";

export interface EncodingConfig {
  sizeAttr?: string;
  colorAttr?: string;
  layout?: "force" | "tree";
}

const SIZE_RANGE: [number, number] = [4, 13];

function attrExtent(graph: GraphRecord, attr: string): [number, number] {
  const values = graph.nodes
    .map((n) => n.attrs[attr])
    .filter((v): v is number => typeof v === "number");
  if (values.length === 0) return [0, 1];
  return [Math.min(...values), Math.max(...values)];
}

function scaled(value: number | undefined, extent: [number, number], out: [number, number]): number {
  if (value === undefined || extent[1] === extent[0]) return (out[0] + out[1]) / 2;
  const t = (value - extent[0]) / (extent[1] - extent[0]);
  return out[0] + t * (out[1] - out[0]);
}

export function renderGraph(
  container: HTMLElement,
  graph: GraphPayload | GraphRecord,
  encoding: EncodingConfig = {},
  width = 320,
  height = 240,
): SVGSVGElement {
  clear(container);
  const layoutFn = encoding.layout === "tree" ? treeLayout : forceLayout;
  const points = layoutFn(graph, { width, height });
  const pos = new Map(points.map((p) => [p.id, p]));

  const svg = svgEl("svg", { width, height, viewBox: `0 0 ${width} ${height}` });
  svg.classList.add("graph-view");
  svg.dataset.graphId = graph.id;

  const weights = graph.edges.map((e) => e.w ?? 1);
  const wExtent: [number, number] = [Math.min(...weights, 1), Math.max(...weights, 1)];
  for (const e of graph.edges) {
    const a = pos.get(e.s)!;
    const b = pos.get(e.t)!;
    const line = svgEl("line", {
      x1: a.x,
      y1: a.y,
      x2: b.x,
      y2: b.y,
      "stroke-width": scaled(e.w ?? 1, wExtent, [1, 3.5]).toFixed(2),
    });
    line.classList.add("edge");
    svg.appendChild(line);
  }

  const sizeExtent = encoding.sizeAttr ? attrExtent(graph, encoding.sizeAttr) : null;
  const colorExtent = encoding.colorAttr ? attrExtent(graph, encoding.colorAttr) : null;
  for (const node of graph.nodes) {
    const p = pos.get(node.id)!;
    const r =
      encoding.sizeAttr && sizeExtent
        ? scaled(node.attrs[encoding.sizeAttr], sizeExtent, SIZE_RANGE)
        : 7;
    const circle = svgEl("circle", { cx: p.x, cy: p.y, r: r.toFixed(2) });
    circle.classList.add("node");
    circle.dataset.nodeId = node.id;
    if (encoding.colorAttr && colorExtent) {
      const t = scaled(node.attrs[encoding.colorAttr], colorExtent, [0, 1]);
      circle.setAttribute("fill", `hsl(${Math.round(220 - 180 * t)}, 65%, 55%)`);
    }
    const title = svgEl("title");
    title.textContent = `${node.id} (${node.label})`;
    circle.appendChild(title);
    svg.appendChild(circle);
  }

  container.appendChild(svg);
  return svg;
}

/** Rows of node attributes shown by the target view's table toggle. */
export function renderAttributeTable(container: HTMLElement, graph: GraphRecord): HTMLTableElement {
  clear(container);
  const names = [...new Set(graph.nodes.flatMap((n) => Object.keys(n.attrs)))].sort();
  const table = document.createElement("table");
  table.classList.add("attr-table");
  const head = table.createTHead().insertRow();
  for (const text of ["node", "label", ...names]) {
    const th = document.createElement("th");
    th.textContent = text;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const node of graph.nodes) {
    const row = body.insertRow();
    row.insertCell().textContent = node.id;
    row.insertCell().textContent = node.label;
    for (const name of names) {
      const v = node.attrs[name];
      row.insertCell().textContent = v === undefined ? "" : v.toFixed(2);
    }
  }
  container.appendChild(table);
  return table;
}
