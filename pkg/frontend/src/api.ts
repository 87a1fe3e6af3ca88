/**
 * Typed client for the /api/v1 matching service.
 *
 * Every server interaction in the UI goes through this module; no view talks
 * to fetch directly. The fetch implementation is injectable so tests can run
 * against an in-memory contract double.
 */

export type Space = "structure" | "attribute" | "fused";

export interface GraphNode {
  id: string;
  label: string;
  attrs: Record<string, number>;
}

export interface GraphEdge {
  s: string;
  t: string;
  w?: number;
}

/** Graph record in the corpus wire format; sketches reuse it unchanged. */
export interface GraphRecord {
  id: string;
  directed: boolean;
  nodes: GraphNode[];
  edges: GraphEdge[];
  macroAttrs: Record<string, number>;
}

export interface GraphStats {
  nodeCount: number;
  edgeCount: number;
  depth: number;
  degreeHistogram: Record<string, number>;
}

export interface GraphPayload extends GraphRecord {
  stats: GraphStats;
  attributeVector?: Record<string, number>;
}

export interface SessionArtifacts {
  corpus: { name: string; graphs: number };
  embedding: boolean;
  fusion: boolean;
  indexes: string[];
  clusters: boolean;
  projection: boolean;
  bench: boolean;
}

export interface SessionStatus {
  busy: boolean;
  stage: string | null;
  error: string | null;
  artifacts: SessionArtifacts;
}

export interface ProjectionPoint {
  graphId: string;
  x: number;
  y: number;
  cluster: number | null;
}

export interface MatchHit {
  graphId: string;
  distance: number;
}

export interface MatchResponse {
  targetId: string;
  space: Space;
  method: string;
  k: number;
  hits: MatchHit[];
  graphs: Record<string, GraphPayload>;
}

export interface CustomTarget {
  sketch?: GraphRecord;
  attrRanges?: Record<string, [number, number]>;
}

export interface MatchRequest {
  space: Space;
  method?: "knn" | "cluster";
  k?: number;
  target: string | CustomTarget;
  filterByRanges?: boolean;
  seed?: number;
}

export interface AxisDensity {
  name: string;
  min: number;
  max: number;
  histogram: { binEdges: number[]; counts: number[] };
}

export interface ParallelCoordsResponse {
  axes: AxisDensity[];
  polylines: { graphId: string; values: number[] }[];
}

export interface ScatterResponse {
  x: string;
  y: string;
  points: { graphId: string; x: number; y: number }[];
}

export interface BenchRow {
  k: number;
  strategy: string;
  strSim: number;
  attrSim: number;
}

export interface BenchReport {
  dataset: string;
  seed: number;
  kValues: number[];
  strategies: string[];
  targets: string[];
  exactGed: boolean;
  rows: BenchRow[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public kind: string,
    detail: string,
  ) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "/api/v1",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const resp = await this.fetchFn(this.base + path, init);
    const payload = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const kind = (payload as { error?: string }).error ?? "HTTPError";
      const detail =
        (payload as { detail?: string }).detail ?? `request failed with ${resp.status}`;
      throw new ApiError(resp.status, kind, detail);
    }
    return payload as T;
  }

  createSession(corpusText: string): Promise<{ sessionId: string; artifacts: SessionArtifacts }> {
    return this.request("POST", "/sessions", { corpusText });
  }

  status(sessionId: string): Promise<SessionStatus> {
    return this.request("GET", `/sessions/${sessionId}/status`);
  }

  listSessions(): Promise<Record<string, SessionArtifacts>> {
    return this.request("GET", "/sessions");
  }

  embed(
    sessionId: string,
    cfg: { dim?: number; epochs?: number; seed?: number } = {},
  ): Promise<{ status: string }> {
    return this.request("POST", `/sessions/${sessionId}/embed`, cfg);
  }

  fuse(
    sessionId: string,
    cfg: { m?: number; ridge?: number; weighted?: boolean } = {},
  ): Promise<{ status: string; m: number; correlations: number[] }> {
    return this.request("POST", `/sessions/${sessionId}/fuse`, cfg);
  }

  cluster(
    sessionId: string,
    body: { space: Space; method: "dbscan" | "kmeans"; params: Record<string, number> },
  ): Promise<{ status: string; clusterSizes: Record<string, number> }> {
    return this.request("POST", `/sessions/${sessionId}/cluster`, body);
  }

  project(
    sessionId: string,
    body: { space: Space; perplexity?: number; iterations?: number; seed?: number },
  ): Promise<{ status: string }> {
    return this.request("POST", `/sessions/${sessionId}/project`, body);
  }

  projection(sessionId: string): Promise<{ space: Space; points: ProjectionPoint[] }> {
    return this.request("GET", `/sessions/${sessionId}/projection`);
  }

  match(sessionId: string, body: MatchRequest): Promise<MatchResponse> {
    return this.request("POST", `/sessions/${sessionId}/match`, body);
  }

  graphDetail(sessionId: string, graphId: string): Promise<GraphPayload> {
    return this.request("GET", `/sessions/${sessionId}/graphs/${graphId}`);
  }

  parallelCoords(
    sessionId: string,
    graphIds: string[],
    bins = 20,
  ): Promise<ParallelCoordsResponse> {
    return this.request("POST", `/sessions/${sessionId}/parallel-coords`, { graphIds, bins });
  }

  scatter(sessionId: string, x: string, y: string): Promise<ScatterResponse> {
    return this.request(
      "GET",
      `/sessions/${sessionId}/scatter?x=${encodeURIComponent(x)}&y=${encodeURIComponent(y)}`,
    );
  }

  bench(
    sessionId: string,
    body: { strategies?: string[]; kValues?: number[]; targets?: number; seed?: number } = {},
  ): Promise<{ status: string }> {
    return this.request("POST", `/sessions/${sessionId}/bench`, body);
  }

  benchReport(sessionId: string): Promise<BenchReport> {
    return this.request("GET", `/sessions/${sessionId}/bench`);
  }

  /** Poll the status endpoint until the session's long operation finishes. */
  async waitIdle(sessionId: string, intervalMs = 150, timeoutMs = 120000): Promise<SessionStatus> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const status = await this.status(sessionId);
      if (!status.busy) return status;
      if (Date.now() > deadline) throw new ApiError(408, "Timeout", "session stayed busy");
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }
}
