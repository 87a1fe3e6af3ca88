/**
 * Parallel coordinates over raw attributes: one vertical axis per attribute
 * with a corpus-wide density stream, matched graphs drawn as polylines.
 * Brushing an axis narrows the highlighted set client-side.
 */

import type { ParallelCoordsResponse } from "../api.js";
import { clear, svgEl } from "./svg.js";

export interface ParcoordsCallbacks {
  onBrush?: (keptIds: string[]) => void;
}

export class ParallelCoordsView {
  private svg: SVGSVGElement;
  private data: ParallelCoordsResponse | null = null;
  private brushes = new Map<string, [number, number]>();
  private width: number;
  private height: number;

  constructor(
    container: HTMLElement,
    private callbacks: ParcoordsCallbacks = {},
    options: { width?: number; height?: number } = {},
  ) {
    this.width = options.width ?? 520;
    this.height = options.height ?? 260;
    this.svg = svgEl("svg", {
      width: this.width,
      height: this.height,
      viewBox: `0 0 ${this.width} ${this.height}`,
    });
    this.svg.classList.add("parcoords-view");
    container.appendChild(this.svg);
  }

  setData(data: ParallelCoordsResponse, highlighted: string[]): void {
    this.data = data;
    this.brushes.clear();
    this.redraw(highlighted);
  }

  setHighlight(highlighted: string[]): void {
    const highlightSet = new Set(highlighted);
    for (const path of this.svg.querySelectorAll<SVGPathElement>("path.polyline")) {
      path.classList.toggle("highlighted", highlightSet.has(path.dataset.graphId!));
    }
  }

  /** Constrain one axis to [lo, hi] in data units; pass null to release it. */
  brushAxis(name: string, range: [number, number] | null): string[] {
    if (!this.data) return [];
    if (range === null) this.brushes.delete(name);
    else this.brushes.set(name, range);
    const kept = this.keptByBrushes();
    this.callbacks.onBrush?.(kept);
    return kept;
  }

  private keptByBrushes(): string[] {
    if (!this.data) return [];
    const axisIndex = new Map(this.data.axes.map((a, i) => [a.name, i]));
    return this.data.polylines
      .filter((line) =>
        [...this.brushes.entries()].every(([name, [lo, hi]]) => {
          const i = axisIndex.get(name);
          if (i === undefined) return true;
          const v = line.values[i];
          return v >= lo && v <= hi;
        }),
      )
      .map((line) => line.graphId);
  }

  private redraw(highlighted: string[]): void {
    clear(this.svg);
    if (!this.data || this.data.axes.length === 0) return;
    const { axes, polylines } = this.data;
    const margin = { top: 22, bottom: 12, side: 36 };
    const innerH = this.height - margin.top - margin.bottom;
    const axisX = (i: number) =>
      margin.side + (i / Math.max(axes.length - 1, 1)) * (this.width - 2 * margin.side);
    const axisY = (axis: (typeof axes)[number], v: number) => {
      const span = Math.max(axis.max - axis.min, 1e-9);
      return margin.top + (1 - (v - axis.min) / span) * innerH;
    };

    axes.forEach((axis, i) => {
      const x = axisX(i);
      // density stream: symmetric band whose width tracks the histogram
      const counts = axis.histogram.counts;
      const edges = axis.histogram.binEdges;
      const maxCount = Math.max(...counts, 1);
      const bandW = 14;
      const left: string[] = [];
      const right: string[] = [];
      counts.forEach((c, b) => {
        const mid = (edges[b] + edges[b + 1]) / 2;
        const y = axisY(axis, mid);
        const w = (c / maxCount) * bandW;
        left.push(`${x - w},${y}`);
        right.unshift(`${x + w},${y}`);
      });
      const band = svgEl("polygon", { points: [...left, ...right].join(" ") });
      band.classList.add("density-stream");
      band.dataset.axis = axis.name;
      this.svg.appendChild(band);

      const line = svgEl("line", {
        x1: x,
        y1: margin.top,
        x2: x,
        y2: margin.top + innerH,
      });
      line.classList.add("axis");
      line.dataset.axis = axis.name;
      this.svg.appendChild(line);

      const label = svgEl("text", { x, y: margin.top - 8, "text-anchor": "middle" });
      label.classList.add("axis-label");
      label.textContent = axis.name;
      this.svg.appendChild(label);
    });

    for (const polyline of polylines) {
      const d = polyline.values
        .map((v, i) => `${i === 0 ? "M" : "L"}${axisX(i)},${axisY(axes[i], v)}`)
        .join(" ");
      const path = svgEl("path", { d, fill: "none" });
      path.classList.add("polyline");
      path.dataset.graphId = polyline.graphId;
      this.svg.appendChild(path);
    }
    this.setHighlight(highlighted);
  }

  element(): SVGSVGElement {
    return this.svg;
  }
}
