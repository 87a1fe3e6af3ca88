import { describe, expect, it } from "vitest";

import { AttributeRanges, SketchDraft } from "../src/sketch.js";

describe("SketchDraft", () => {
  it("assigns sequential node ids and tracks counts", () => {
    const draft = new SketchDraft();
    const a = draft.addNode("x");
    const b = draft.addNode("y");
    expect([a, b]).toEqual(["s0", "s1"]);
    draft.addEdge(a, b);
    expect(draft.nodeCount).toBe(2);
    expect(draft.edgeCount).toBe(1);
  });

  it("rejects self-loops, duplicates, and unknown endpoints", () => {
    const draft = new SketchDraft();
    const a = draft.addNode();
    const b = draft.addNode();
    draft.addEdge(a, b);
    expect(() => draft.addEdge(a, a)).toThrow(/self-loop/);
    expect(() => draft.addEdge(b, a)).toThrow(/duplicate/);
    expect(() => draft.addEdge(a, "s9")).toThrow(/unknown endpoint/);
  });

  it("removing a node removes its incident edges", () => {
    const draft = new SketchDraft();
    draft.loadTemplate("path", 3);
    draft.removeNode("s1");
    expect(draft.nodeCount).toBe(2);
    expect(draft.edgeCount).toBe(0);
  });

  it("emits the corpus wire format", () => {
    const draft = new SketchDraft();
    draft.loadTemplate("path", 2);
    const record = draft.toGraphRecord();
    expect(record.id).toBe("sketch");
    expect(record.directed).toBe(false);
    expect(record.nodes[0]).toEqual({ id: "s0", label: "", attrs: {} });
    expect(record.edges).toEqual([{ s: "s0", t: "s1" }]);
  });

  it("empty sketch cannot be serialized", () => {
    expect(() => new SketchDraft().toGraphRecord()).toThrow(/empty/);
  });

  it.each([
    ["path", 4, 3],
    ["cycle", 4, 4],
    ["star", 5, 4],
    ["clique", 4, 6],
    ["tree", 7, 6],
  ] as const)("%s template of size %i has %i edges", (kind, size, edges) => {
    const draft = new SketchDraft();
    draft.loadTemplate(kind, size);
    expect(draft.nodeCount).toBe(size);
    expect(draft.edgeCount).toBe(edges);
  });

  it("rejects templates below two nodes", () => {
    expect(() => new SketchDraft().loadTemplate("path", 1)).toThrow(/at least 2/);
  });
});

describe("AttributeRanges", () => {
  const bounds = { size: [0, 10] as [number, number], depth: [1, 5] as [number, number] };

  it("starts at the full corpus bounds", () => {
    const ranges = new AttributeRanges(bounds);
    expect(ranges.get("size")).toEqual([0, 10]);
    expect(ranges.names()).toEqual(["size", "depth"]);
  });

  it("clamps slider values to the bounds", () => {
    const ranges = new AttributeRanges(bounds);
    ranges.set("size", -3, 99);
    expect(ranges.get("size")).toEqual([0, 10]);
    ranges.set("depth", 2, 4);
    expect(ranges.midpoint("depth")).toBe(3);
  });

  it("rejects unknown attributes and inverted ranges", () => {
    const ranges = new AttributeRanges(bounds);
    expect(() => ranges.get("nope")).toThrow(/unknown attribute/);
    expect(() => ranges.set("size", 8, 2)).toThrow(/empty range/);
  });

  it("serializes all ranges for the match request", () => {
    const ranges = new AttributeRanges(bounds);
    ranges.set("size", 2, 6);
    expect(ranges.toRecord()).toEqual({ size: [2, 6], depth: [1, 5] });
  });
});
