/**
 * Application controller: owns the ApiClient, the view-state store, and the
 * four coordinated views. Every user gesture funnels through a method here,
 * which updates the store once; all views re-render from that single update,
 * so cross-view consistency holds within one render cycle.
 */

import { ApiClient, type MatchResponse, type Space } from "./api.js";
import { AttributeRanges, SketchDraft, type TemplateKind } from "./sketch.js";
import { Store } from "./state.js";
import { CandidateView } from "./views/candidates.js";
import { renderAttributeTable, renderGraph, type EncodingConfig } from "./views/graphView.js";
import { ParallelCoordsView } from "./views/parcoords.js";
import { ProjectionView } from "./views/projection.js";
import { clear } from "./views/svg.js";

export interface AppContainers {
  projection: HTMLElement;
  target: HTMLElement;
  candidates: HTMLElement;
  parcoords: HTMLElement;
}

export class App {
  readonly store = new Store();
  readonly sketch = new SketchDraft();
  attrRanges: AttributeRanges | null = null;

  private projectionView: ProjectionView;
  private candidateView: CandidateView;
  private parcoordsView: ParallelCoordsView;
  private targetContainer: HTMLElement;
  private encoding: EncodingConfig = {};
  private showTable = false;

  constructor(
    readonly api: ApiClient,
    containers: AppContainers,
  ) {
    this.targetContainer = containers.target;
    this.projectionView = new ProjectionView(containers.projection, {
      onSelect: (graphId) => void this.selectTarget(graphId),
    });
    this.candidateView = new CandidateView(containers.candidates, {
      onPick: (graphId) => void this.selectCandidate(graphId),
    });
    this.parcoordsView = new ParallelCoordsView(containers.parcoords, {
      onBrush: (kept) => this.store.update({ highlighted: kept }),
    });
    this.store.subscribe(() => this.render());
  }

  // ------------------------------------------------------------------ setup

  async openSession(sessionId: string): Promise<void> {
    const status = await this.api.status(sessionId);
    this.store.update({ sessionId, busyStage: status.stage, lastError: status.error });
  }

  async createSession(corpusText: string): Promise<void> {
    const { sessionId } = await this.api.createSession(corpusText);
    this.store.update({ sessionId });
  }

  private sessionId(): string {
    const sid = this.store.get().sessionId;
    if (!sid) throw new Error("no active session");
    return sid;
  }

  /** Derive slider bounds from the corpus-wide attribute histograms. */
  async initAttributePanel(): Promise<void> {
    const coords = await this.api.parallelCoords(this.sessionId(), []);
    const bounds = Object.fromEntries(
      coords.axes.map((axis) => [axis.name, [axis.min, axis.max] as [number, number]]),
    );
    this.attrRanges = new AttributeRanges(bounds);
  }

  // ------------------------------------------------------------- projection

  async loadProjection(space?: Space): Promise<void> {
    if (space) this.store.update({ space });
    const result = await this.api.projection(this.sessionId());
    this.projectionView.setPoints(result.points);
    this.store.update({ projection: result.points, projectionSpace: result.space });
  }

  async reproject(space: Space, seed = 0): Promise<void> {
    this.store.update({ space });
    await this.api.project(this.sessionId(), { space, seed });
    await this.api.waitIdle(this.sessionId());
    await this.loadProjection();
  }

  // ----------------------------------------------------------------- target

  async selectTarget(graphId: string): Promise<void> {
    const payload = await this.api.graphDetail(this.sessionId(), graphId);
    this.store.update({
      selectedTarget: { kind: "graph", graphId },
      graphs: { ...this.store.get().graphs, [graphId]: payload },
    });
  }

  /** Promote the current sketch/slider draft to the active target. */
  useCustomTarget(): void {
    this.store.update({ selectedTarget: { kind: "custom", draft: this.sketch } });
  }

  loadTemplate(kind: TemplateKind, size: number): void {
    this.sketch.loadTemplate(kind, size);
    this.useCustomTarget();
  }

  setEncoding(encoding: EncodingConfig): void {
    this.encoding = encoding;
    this.render();
  }

  toggleTable(show: boolean): void {
    this.showTable = show;
    this.render();
  }

  // ------------------------------------------------------------------ match

  async runMatch(): Promise<MatchResponse> {
    const state = this.store.get();
    if (!state.selectedTarget) throw new Error("no target selected");
    const base = { space: state.space, method: state.matchParams.method, k: state.matchParams.k };
    const target =
      state.selectedTarget.kind === "graph"
        ? state.selectedTarget.graphId
        : {
            sketch: state.selectedTarget.draft.toGraphRecord(),
            attrRanges: this.attrRanges?.toRecord(),
          };
    const result = await this.api.match(this.sessionId(), { ...base, target });
    const hitIds = result.hits.map((h) => h.graphId);
    const coords = await this.api.parallelCoords(this.sessionId(), hitIds);
    this.parcoordsView.setData(coords, hitIds);
    this.store.update({
      hits: result.hits,
      highlighted: hitIds,
      graphs: { ...this.store.get().graphs, ...result.graphs },
    });
    return result;
  }

  async selectCandidate(graphId: string): Promise<void> {
    if (!(graphId in this.store.get().graphs)) {
      const payload = await this.api.graphDetail(this.sessionId(), graphId);
      this.store.update({ graphs: { ...this.store.get().graphs, [graphId]: payload } });
    }
    this.store.update({
      selectedTarget: { kind: "graph", graphId },
      highlighted: [graphId],
    });
  }

  setMatchParams(params: Partial<{ method: "knn" | "cluster"; k: number }>): void {
    this.store.update({ matchParams: { ...this.store.get().matchParams, ...params } });
  }

  setDisplayCount(count: number): void {
    this.candidateView.setDisplayCount(count);
    this.render();
  }

  brushAxis(name: string, range: [number, number] | null): string[] {
    return this.parcoordsView.brushAxis(name, range);
  }

  // ----------------------------------------------------------------- render

  private render(): void {
    const state = this.store.get();

    // target view
    const target = state.selectedTarget;
    if (target?.kind === "graph") {
      const payload = state.graphs[target.graphId];
      if (payload) {
        if (this.showTable) renderAttributeTable(this.targetContainer, payload);
        else renderGraph(this.targetContainer, payload, this.encoding);
        this.targetContainer.dataset.targetId = target.graphId;
      }
    } else if (target?.kind === "custom") {
      if (target.draft.nodeCount > 0) {
        renderGraph(this.targetContainer, target.draft.toGraphRecord(), this.encoding);
      } else {
        clear(this.targetContainer);
      }
      this.targetContainer.dataset.targetId = "custom";
    } else {
      clear(this.targetContainer);
      delete this.targetContainer.dataset.targetId;
    }

    this.candidateView.render(state.hits, state.graphs, state.highlighted);
    this.parcoordsView.setHighlight(state.highlighted);
    this.projectionView.setEmphasis(
      target?.kind === "graph" ? target.graphId : null,
      state.highlighted,
    );
  }
}

/** Mount the app into the standard page skeleton (used by static/index.html). */
export function mountApp(api: ApiClient = new ApiClient()): App {
  const byId = (id: string): HTMLElement => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing container #${id}`);
    return el;
  };
  return new App(api, {
    projection: byId("projection"),
    target: byId("target"),
    candidates: byId("candidates"),
    parcoords: byId("parcoords"),
  });
}
