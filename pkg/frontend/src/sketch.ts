/**
 * Sketch model behind the structure panel: freehand nodes and edges plus a
 * template gallery. Emits the corpus graph record format directly, so the
 * server treats sketches exactly like uploaded graphs.
 */

import type { GraphRecord } from "./api.js";

export type TemplateKind = "path" | "star" | "clique" | "tree" | "cycle";

export class SketchDraft {
  private nodes: { id: string; label: string }[] = [];
  private edges: [string, string][] = [];
  private counter = 0;

  get nodeCount(): number {
    return this.nodes.length;
  }

  get edgeCount(): number {
    return this.edges.length;
  }

  nodeIds(): string[] {
    return this.nodes.map((n) => n.id);
  }

  addNode(label = ""): string {
    const id = `s${this.counter++}`;
    this.nodes.push({ id, label });
    return id;
  }

  setLabel(id: string, label: string): void {
    const node = this.nodes.find((n) => n.id === id);
    if (!node) throw new Error(`no sketch node ${id}`);
    node.label = label;
  }

  addEdge(a: string, b: string): void {
    if (a === b) throw new Error("self-loops are not allowed");
    const known = new Set(this.nodes.map((n) => n.id));
    if (!known.has(a) || !known.has(b)) throw new Error(`unknown endpoint ${a} or ${b}`);
    if (this.hasEdge(a, b)) throw new Error(`duplicate edge ${a}-${b}`);
    this.edges.push([a, b]);
  }

  hasEdge(a: string, b: string): boolean {
    return this.edges.some(([s, t]) => (s === a && t === b) || (s === b && t === a));
  }

  removeNode(id: string): void {
    this.nodes = this.nodes.filter((n) => n.id !== id);
    this.edges = this.edges.filter(([s, t]) => s !== id && t !== id);
  }

  clear(): void {
    this.nodes = [];
    this.edges = [];
    this.counter = 0;
  }

  toGraphRecord(): GraphRecord {
    if (this.nodes.length === 0) throw new Error("sketch is empty");
    return {
      id: "sketch",
      directed: false,
      nodes: this.nodes.map((n) => ({ id: n.id, label: n.label, attrs: {} })),
      edges: this.edges.map(([s, t]) => ({ s, t })),
      macroAttrs: {},
    };
  }

  /** Replace the draft with one of the common structural patterns. */
  loadTemplate(kind: TemplateKind, size: number): void {
    if (size < 2) throw new Error("template needs at least 2 nodes");
    this.clear();
    const ids = Array.from({ length: size }, () => this.addNode());
    switch (kind) {
      case "path":
        for (let i = 0; i + 1 < size; i++) this.addEdge(ids[i], ids[i + 1]);
        break;
      case "cycle":
        for (let i = 0; i < size; i++) this.addEdge(ids[i], ids[(i + 1) % size]);
        break;
      case "star":
        for (let i = 1; i < size; i++) this.addEdge(ids[0], ids[i]);
        break;
      case "clique":
        for (let i = 0; i < size; i++)
          for (let j = i + 1; j < size; j++) this.addEdge(ids[i], ids[j]);
        break;
      case "tree":
        for (let i = 1; i < size; i++) this.addEdge(ids[Math.floor((i - 1) / 2)], ids[i]);
        break;
    }
  }
}

/** Per-attribute (min, max) sliders, clamped to the corpus value bounds. */
export class AttributeRanges {
  private ranges = new Map<string, [number, number]>();

  constructor(private bounds: Record<string, [number, number]>) {
    for (const [name, [lo, hi]] of Object.entries(bounds)) {
      this.ranges.set(name, [lo, hi]);
    }
  }

  names(): string[] {
    return [...this.ranges.keys()];
  }

  get(name: string): [number, number] {
    const r = this.ranges.get(name);
    if (!r) throw new Error(`unknown attribute ${name}`);
    return [...r] as [number, number];
  }

  set(name: string, lo: number, hi: number): void {
    const bound = this.bounds[name];
    if (!bound) throw new Error(`unknown attribute ${name}`);
    const clampedLo = Math.max(bound[0], Math.min(lo, bound[1]));
    const clampedHi = Math.max(bound[0], Math.min(hi, bound[1]));
    if (clampedLo > clampedHi) throw new Error(`empty range for ${name}`);
    this.ranges.set(name, [clampedLo, clampedHi]);
  }

  toRecord(): Record<string, [number, number]> {
    return Object.fromEntries([...this.ranges.entries()].map(([k, v]) => [k, [...v]]));
  }

  midpoint(name: string): number {
    const [lo, hi] = this.get(name);
    return (lo + hi) / 2;
  }
}
