/**
 * 2D projection scatter: one circle per corpus graph, cluster-colored, with
 * click-to-select and rectangular region selection.
 */

import type { ProjectionPoint } from "../api.js";
import { clear, clusterColor, svgEl } from "./svg.js";

export interface ProjectionCallbacks {
  onSelect?: (graphId: string) => void;
  onRegion?: (graphIds: string[]) => void;
}

export interface ProjectionViewOptions {
  width?: number;
  height?: number;
}

export class ProjectionView {
  private svg: SVGSVGElement;
  private points: ProjectionPoint[] = [];
  private screen = new Map<string, { x: number; y: number }>();
  private width: number;
  private height: number;

  constructor(
    container: HTMLElement,
    private callbacks: ProjectionCallbacks = {},
    options: ProjectionViewOptions = {},
  ) {
    this.width = options.width ?? 460;
    this.height = options.height ?? 380;
    this.svg = svgEl("svg", {
      width: this.width,
      height: this.height,
      viewBox: `0 0 ${this.width} ${this.height}`,
    });
    this.svg.classList.add("projection-view");
    container.appendChild(this.svg);
  }

  setPoints(points: ProjectionPoint[]): void {
    this.points = points;
    this.screen.clear();
    clear(this.svg);
    if (points.length === 0) return;
    const xs = points.map((p) => p.x);
    const ys = points.map((p) => p.y);
    const [minX, maxX] = [Math.min(...xs), Math.max(...xs)];
    const [minY, maxY] = [Math.min(...ys), Math.max(...ys)];
    const margin = 16;
    const sx = (x: number) =>
      margin + ((x - minX) / Math.max(maxX - minX, 1e-9)) * (this.width - 2 * margin);
    const sy = (y: number) =>
      margin + ((y - minY) / Math.max(maxY - minY, 1e-9)) * (this.height - 2 * margin);

    for (const p of points) {
      const cx = sx(p.x);
      const cy = sy(p.y);
      this.screen.set(p.graphId, { x: cx, y: cy });
      const circle = svgEl("circle", { cx, cy, r: 5, fill: clusterColor(p.cluster) });
      circle.classList.add("point");
      circle.dataset.graphId = p.graphId;
      if (p.cluster !== null) circle.dataset.cluster = String(p.cluster);
      circle.addEventListener("click", () => this.callbacks.onSelect?.(p.graphId));
      this.svg.appendChild(circle);
    }
  }

  /** Mark the current target and the highlighted candidate set. */
  setEmphasis(targetId: string | null, highlighted: string[]): void {
    const highlightSet = new Set(highlighted);
    for (const circle of this.svg.querySelectorAll<SVGCircleElement>("circle.point")) {
      const gid = circle.dataset.graphId!;
      circle.classList.toggle("selected", gid === targetId);
      circle.classList.toggle("highlighted", highlightSet.has(gid));
    }
  }

  /** Ids inside a screen-space rectangle; also fires the region callback. */
  selectRegion(x0: number, y0: number, x1: number, y1: number): string[] {
    const [lox, hix] = [Math.min(x0, x1), Math.max(x0, x1)];
    const [loy, hiy] = [Math.min(y0, y1), Math.max(y0, y1)];
    const ids = this.points
      .filter((p) => {
        const s = this.screen.get(p.graphId)!;
        return s.x >= lox && s.x <= hix && s.y >= loy && s.y <= hiy;
      })
      .map((p) => p.graphId);
    this.callbacks.onRegion?.(ids);
    return ids;
  }

  element(): SVGSVGElement {
    return this.svg;
  }
}
