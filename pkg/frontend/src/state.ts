/**
 * Single mutable view-state store with synchronous notification: every
 * subscriber sees a state change in the same tick, which is what keeps the
 * linked views consistent within one render cycle.
 */

import type { GraphPayload, MatchHit, ProjectionPoint, Space } from "./api.js";
import type { SketchDraft } from "./sketch.js";

export type TargetSelection =
  | { kind: "graph"; graphId: string }
  | { kind: "custom"; draft: SketchDraft }
  | null;

export interface MatchParams {
  method: "knn" | "cluster";
  k: number;
}

export interface ViewState {
  sessionId: string | null;
  space: Space;
  selectedTarget: TargetSelection;
  matchParams: MatchParams;
  /** Last match result hits, in server order. */
  hits: MatchHit[];
  /** Subset of hit ids currently emphasized across all views. */
  highlighted: string[];
  graphs: Record<string, GraphPayload>;
  projection: ProjectionPoint[];
  projectionSpace: Space | null;
  axisChoices: { x: string; y: string };
  busyStage: string | null;
  lastError: string | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    space: "fused",
    selectedTarget: null,
    matchParams: { method: "knn", k: 5 },
    hits: [],
    highlighted: [],
    graphs: {},
    projection: [],
    projectionSpace: null,
    axisChoices: { x: "", y: "" },
    busyStage: null,
    lastError: null,
  };
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState;
  private listeners = new Set<Listener>();

  constructor(state: ViewState = initialState()) {
    this.state = state;
  }

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  /** Merge a partial update, enforce invariants, notify synchronously. */
  update(partial: Partial<ViewState>): void {
    const next = { ...this.state, ...partial };
    const hitIds = new Set(next.hits.map((h) => h.graphId));
    next.highlighted = next.highlighted.filter((gid) => hitIds.has(gid));
    this.state = next;
    for (const listener of this.listeners) listener(next);
  }
}
