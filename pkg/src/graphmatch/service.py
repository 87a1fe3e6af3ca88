"""HTTP facade over the matching pipeline, consumed by the web UI.

One session holds one corpus plus the artifacts derived from it. Long
operations (embed, project, bench) run on a worker thread, at most one per
session; clients poll the status endpoint. Replacing an upstream artifact
invalidates everything downstream of it, so a stale space can never answer a
match request.
"""

import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from . import pipeline
from .attributes import AttributeVector, attribute_matrix
from .errors import (
    Busy,
    DependencyError,
    GraphMatchError,
    NoKnownTokens,
    ParseError,
    TargetIsNoise,
    ValidationError,
)
from .evalbench import run_benchmark
from .graph import Corpus, graph_stats, load_corpus
from .matching import (
    SPACES,
    ClusterLabels,
    EmbeddingIndex,
    cluster,
    cluster_match,
    knn_match,
    project_tsne,
)
from .skipgram import EmbedConfig, SkipGramModel

API_PREFIX = "/api/v1"


@dataclass
class Session:
    corpus: Corpus
    lock: threading.Lock = field(default_factory=threading.Lock)
    busy_stage: str | None = None
    last_error: str | None = None
    sg_model: SkipGramModel | None = None
    attrs: list[AttributeVector] | None = None
    cca_model: Any = None
    indexes: dict[str, EmbeddingIndex] = field(default_factory=dict)
    cluster_labels: ClusterLabels | None = None
    projection: list | None = None
    projection_space: str | None = None
    bench_report: Any = None

    def artifact_summary(self) -> dict:
        return {
            "corpus": {"name": self.corpus.name, "graphs": len(self.corpus)},
            "embedding": self.sg_model is not None,
            "fusion": self.cca_model is not None,
            "indexes": sorted(self.indexes),
            "clusters": self.cluster_labels is not None,
            "projection": self.projection is not None,
            "bench": self.bench_report is not None,
        }

    def require_index(self, space: str) -> EmbeddingIndex:
        if space not in SPACES:
            raise HTTPException(400, f"unknown space {space!r}")
        if space not in self.indexes:
            stage = "structure embedding not trained" if space == "structure" else (
                "attribute vectors not computed" if space == "attribute"
                else "fusion model not fitted"
            )
            raise DependencyError(stage)
        return self.indexes[space]

    def invalidate_downstream(self, stage: str) -> None:
        """Drop artifacts derived from the stage being replaced."""
        if stage == "embed":
            self.cca_model = None
            self.indexes.pop("structure", None)
            self.indexes.pop("fused", None)
        if stage in ("embed", "fuse"):
            self.indexes.pop("fused", None)
        self.cluster_labels = None
        self.projection = None
        self.projection_space = None
        self.bench_report = None


def _graph_payload(session: Session, graph_id: str) -> dict:
    g = session.corpus[graph_id]
    payload = {
        "id": g.id,
        "directed": g.directed,
        "nodes": [{"id": n.id, "label": n.label, "attrs": n.attrs} for n in g.nodes],
        "edges": [
            {"s": e.source, "t": e.target, **({"w": e.weight} if e.weight is not None else {})}
            for e in g.edges
        ],
        "macroAttrs": g.macro_attrs,
        "stats": graph_stats(g),
    }
    if session.attrs is not None:
        vec = next(a for a in session.attrs if a.graph_id == graph_id)
        payload["attributeVector"] = dict(
            zip(session.corpus.schema.attribute_names, vec.values.tolist())
        )
    return payload


def _parse_sketch(record: dict, corpus: Corpus):
    """Sketches arrive in the corpus graph record format."""
    from .graph import _apply_label_source, _parse_graph

    g = _parse_graph(record)
    # endpoint check must precede degree labeling, label check must follow it
    known = {n.id for n in g.nodes}
    for e in g.edges:
        if e.source not in known or e.target not in known:
            raise ValidationError(f"sketch edge references unknown node {e.source!r} or {e.target!r}")
    _apply_label_source(g, corpus.schema)
    g.validate()
    return g


def create_app(preload_corpus=None) -> FastAPI:
    app = FastAPI(title="graphmatch")
    sessions: dict[str, Session] = {}

    def get_session(session_id: str) -> Session:
        if session_id not in sessions:
            raise HTTPException(404, f"no session {session_id!r}")
        return sessions[session_id]

    def start_long_op(session: Session, stage: str, fn) -> None:
        with session.lock:
            if session.busy_stage is not None:
                raise Busy(f"{session.busy_stage} already running")
            session.busy_stage = stage
            session.last_error = None

        def runner():
            try:
                fn()
            except Exception as exc:  # surfaced via /status
                session.last_error = f"{type(exc).__name__}: {exc}"
            finally:
                session.busy_stage = None

        threading.Thread(target=runner, daemon=True).start()

    @app.exception_handler(GraphMatchError)
    async def graphmatch_error(_req: Request, exc: GraphMatchError):
        status = 404 if isinstance(exc, NoKnownTokens) else 422
        if isinstance(exc, DependencyError):
            status = 409
        if isinstance(exc, Busy):
            status = 409
        if isinstance(exc, (ParseError, ValidationError)):
            status = 400
        if isinstance(exc, TargetIsNoise):
            status = 409
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.post(f"{API_PREFIX}/sessions")
    async def create_session(body: dict):
        text = body.get("corpusText")
        if not text:
            raise HTTPException(400, "body must carry corpusText")
        with tempfile.NamedTemporaryFile("w", suffix=".jsonl", delete=False) as fh:
            fh.write(text)
            path = fh.name
        corpus = load_corpus(path)
        session_id = uuid.uuid4().hex[:12]
        session = Session(corpus=corpus)
        session.attrs = pipeline.attribute_vectors(corpus)
        session.indexes["attribute"] = pipeline.attribute_index(session.attrs)
        sessions[session_id] = session
        return {"sessionId": session_id, "artifacts": session.artifact_summary()}

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/status")
    async def status(session_id: str):
        session = get_session(session_id)
        return {
            "busy": session.busy_stage is not None,
            "stage": session.busy_stage,
            "error": session.last_error,
            "artifacts": session.artifact_summary(),
        }

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/embed")
    async def run_embed(session_id: str, body: dict | None = None):
        session = get_session(session_id)
        body = body or {}
        try:
            cfg = EmbedConfig(
                dim=body.get("dim", 128),
                epochs=body.get("epochs", 50),
                seed=body.get("seed", 0),
                negatives=body.get("negatives", 5),
                max_degree=body.get("maxDegree", 2),
            )
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc

        def work():
            model = pipeline.train_embedding(session.corpus, cfg)
            session.invalidate_downstream("embed")
            session.sg_model = model
            session.indexes["structure"] = pipeline.structure_index(model)

        start_long_op(session, "embed", work)
        return {"status": "started", "stage": "embed"}

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/fuse")
    async def run_fuse(session_id: str, body: dict | None = None):
        session = get_session(session_id)
        body = body or {}
        if session.sg_model is None:
            raise DependencyError("structure embedding not trained")
        with session.lock:
            if session.busy_stage is not None:
                raise Busy(f"{session.busy_stage} already running")
            model = pipeline.fit_fusion(
                session.sg_model,
                session.attrs,
                m=body.get("m"),
                ridge=body.get("ridge"),
                weighted=body.get("weighted", False),
            )
            session.invalidate_downstream("fuse")
            session.cca_model = model
            session.indexes["fused"] = pipeline.fused_index(
                session.sg_model, session.attrs, model
            )
        return {
            "status": "done",
            "stage": "fuse",
            "m": model.m,
            "correlations": model.correlations.tolist(),
            "rankDeficient": model.rank_deficient,
        }

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/cluster")
    async def run_cluster(session_id: str, body: dict):
        session = get_session(session_id)
        index = session.require_index(body.get("space", "fused"))
        with session.lock:
            if session.busy_stage is not None:
                raise Busy(f"{session.busy_stage} already running")
            labels = cluster(index, body.get("method", "dbscan"), body.get("params", {}))
            session.cluster_labels = labels
        counts: dict[int, int] = {}
        for lab in labels.labels.values():
            counts[lab] = counts.get(lab, 0) + 1
        return {"status": "done", "stage": "cluster", "clusterSizes": counts}

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/project")
    async def run_project(session_id: str, body: dict | None = None):
        session = get_session(session_id)
        body = body or {}
        space = body.get("space", "fused")
        index = session.require_index(space)
        perplexity = body.get("perplexity", 30.0)
        iterations = body.get("iterations", 1000)
        seed = body.get("seed", 0)

        def work():
            points = project_tsne(
                index,
                perplexity=perplexity,
                iterations=iterations,
                seed=seed,
                cluster_labels=session.cluster_labels,
            )
            session.projection = points
            session.projection_space = space

        start_long_op(session, "project", work)
        return {"status": "started", "stage": "project"}

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/projection")
    async def get_projection(session_id: str):
        session = get_session(session_id)
        if session.projection is None:
            raise DependencyError("projection not computed")
        return {
            "space": session.projection_space,
            "points": [
                {"graphId": p.graph_id, "x": p.x, "y": p.y, "cluster": p.cluster_label}
                for p in session.projection
            ],
        }

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/bench")
    async def run_bench(session_id: str, body: dict | None = None):
        session = get_session(session_id)
        body = body or {}
        if session.sg_model is None:
            raise DependencyError("structure embedding not trained")
        strategies = body.get("strategies", ["Str", "Attr", "CCA"])
        k_values = body.get("kValues", [5, 10, 15])
        n_targets = body.get("targets", 10)
        seed = body.get("seed", 0)

        def work():
            session.bench_report = run_benchmark(
                session.corpus,
                session.sg_model.graph_vectors,
                session.attrs,
                strategies,
                k_values,
                n_targets,
                seed=seed,
            )

        start_long_op(session, "bench", work)
        return {"status": "started", "stage": "bench"}

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/bench")
    async def get_bench(session_id: str):
        session = get_session(session_id)
        if session.bench_report is None:
            raise DependencyError("benchmark not run")
        import json as _json

        return _json.loads(session.bench_report.to_json())

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/match")
    async def match(session_id: str, body: dict):
        session = get_session(session_id)
        space = body.get("space", "fused")
        method = body.get("method", "knn")
        k = int(body.get("k", 10))
        index = session.require_index(space)
        target = body.get("target")
        if target is None:
            raise HTTPException(400, "request must carry a target")

        attr_ranges = None
        if isinstance(target, str):
            if target not in session.corpus:
                raise HTTPException(404, f"unknown graph {target!r}")
            if method == "cluster":
                if session.cluster_labels is None:
                    raise DependencyError("clustering not run")
                result = cluster_match(session.cluster_labels, index, target)
            else:
                result = knn_match(index, target, k)
        else:
            sketch = target.get("sketch")
            attr_ranges = target.get("attrRanges")
            attr_point = None
            if attr_ranges:
                names = session.corpus.schema.attribute_names
                missing = [n for n in names if n not in attr_ranges]
                if missing:
                    raise HTTPException(400, f"attrRanges missing attributes {missing}")
                attr_point = np.array(
                    [(attr_ranges[n][0] + attr_ranges[n][1]) / 2 for n in names]
                )
            sketch_graph = _parse_sketch(sketch, session.corpus) if sketch else None
            vectors = pipeline.embed_custom_target(
                sketch_graph,
                attr_point,
                session.sg_model,
                session.attrs,
                session.cca_model,
                infer_seed=body.get("seed"),
            )
            result = knn_match(index, vectors.for_space(space), k)

        hits = result.hits
        if attr_ranges and body.get("filterByRanges"):
            names = session.corpus.schema.attribute_names
            by_id = {a.graph_id: a.values for a in session.attrs}
            lo = np.array([attr_ranges[n][0] for n in names])
            hi = np.array([attr_ranges[n][1] for n in names])
            hits = [
                (gid, d)
                for gid, d in hits
                if np.all(by_id[gid] >= lo) and np.all(by_id[gid] <= hi)
            ]

        return {
            "targetId": result.target_id,
            "space": result.space,
            "method": result.method,
            "k": result.k,
            "hits": [{"graphId": gid, "distance": d} for gid, d in hits],
            "graphs": {gid: _graph_payload(session, gid) for gid, _ in hits},
        }

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/graphs/{{graph_id}}")
    async def graph_detail(session_id: str, graph_id: str):
        session = get_session(session_id)
        if graph_id not in session.corpus:
            raise HTTPException(404, f"unknown graph {graph_id!r}")
        return _graph_payload(session, graph_id)

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/parallel-coords")
    async def parallel_coords(session_id: str, body: dict):
        session = get_session(session_id)
        graph_ids = body.get("graphIds", [])
        unknown = [gid for gid in graph_ids if gid not in session.corpus]
        if unknown:
            raise HTTPException(404, f"unknown graphs {unknown}")
        names = session.corpus.schema.attribute_names
        mat = attribute_matrix(session.attrs)
        by_id = {a.graph_id: a.values for a in session.attrs}
        bins = int(body.get("bins", 20))
        axes = []
        for j, name in enumerate(names):
            counts, edges = np.histogram(mat[:, j], bins=bins)
            axes.append(
                {
                    "name": name,
                    "min": float(mat[:, j].min()),
                    "max": float(mat[:, j].max()),
                    "histogram": {
                        "binEdges": edges.tolist(),
                        "counts": counts.tolist(),
                    },
                }
            )
        polylines = [
            {"graphId": gid, "values": by_id[gid].tolist()} for gid in graph_ids
        ]
        return {"axes": axes, "polylines": polylines}

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/scatter")
    async def scatter(session_id: str, x: str, y: str):
        from .matching import attribute_scatter

        session = get_session(session_id)
        rows = attribute_scatter(session.corpus, x, y)
        return {
            "x": x,
            "y": y,
            "points": [{"graphId": gid, "x": xv, "y": yv} for gid, xv, yv in rows],
        }

    @app.get(f"{API_PREFIX}/sessions")
    async def list_sessions():
        return {
            sid: s.artifact_summary() for sid, s in sessions.items()
        }

    if preload_corpus is not None:
        corpus = load_corpus(preload_corpus)
        session = Session(corpus=corpus)
        session.attrs = pipeline.attribute_vectors(corpus)
        session.indexes["attribute"] = pipeline.attribute_index(session.attrs)
        sessions["preloaded"] = session

    # serve the built web UI when present
    import pathlib

    dist = pathlib.Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(dist), html=True), name="ui")

    return app
