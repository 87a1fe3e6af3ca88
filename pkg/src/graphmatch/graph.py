"""In-memory graph data model, corpus container and line-delimited JSON ingestion.

A corpus file is JSON-lines: one header record carrying the attribute schema
and corpus name, followed by one record per graph. All numeric values must be
finite; validation failures name the offending graph.
"""

import json
import math
from collections import deque
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError

MICRO_AGGREGATORS = ("sum", "mean", "min", "max", "count")


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    attrs: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float | None = None


@dataclass
class Graph:
    """A small attributed graph, the unit of matching.

    Undirected edges are stored canonically (smaller endpoint id first) so
    duplicate detection does not depend on input order.
    """

    id: str
    nodes: list[Node]
    edges: list[Edge]
    directed: bool = False
    macro_attrs: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.directed:
            self.edges = [
                e if e.source <= e.target else Edge(e.target, e.source, e.weight)
                for e in self.edges
            ]

    @property
    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def adjacency(self) -> dict[str, list[str]]:
        """Undirected neighbor lists, sorted for determinism."""
        adj: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            adj[e.source].append(e.target)
            adj[e.target].append(e.source)
        for k in adj:
            adj[k].sort()
        return adj

    def out_adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            adj[e.source].append(e.target)
        return adj

    def validate(self, schema: "AttributeSchema | None" = None) -> None:
        ids = set()
        for n in self.nodes:
            if n.id in ids:
                raise ValidationError(f"graph {self.id}: duplicate node id {n.id!r}")
            ids.add(n.id)
            if not n.label:
                raise ValidationError(f"graph {self.id}: node {n.id!r} has empty label")
            for k, v in n.attrs.items():
                if not math.isfinite(v):
                    raise ValidationError(
                        f"graph {self.id}: node {n.id!r} attr {k!r} is not finite"
                    )
            if schema is not None:
                extra = set(n.attrs) - {name for name, _ in schema.micro}
                if extra:
                    raise ValidationError(
                        f"graph {self.id}: node {n.id!r} has attrs outside schema: {sorted(extra)}"
                    )
        seen = set()
        for e in self.edges:
            for end in (e.source, e.target):
                if end not in ids:
                    raise ValidationError(
                        f"graph {self.id}: edge references missing node {end!r}"
                    )
            if e.source == e.target:
                raise ValidationError(f"graph {self.id}: self-loop at {e.source!r}")
            key = (e.source, e.target) if self.directed else tuple(sorted((e.source, e.target)))
            if key in seen:
                raise ValidationError(f"graph {self.id}: duplicate edge {key}")
            seen.add(key)
            if e.weight is not None and (not math.isfinite(e.weight) or e.weight < 0):
                raise ValidationError(f"graph {self.id}: bad edge weight on {key}")
        for k, v in self.macro_attrs.items():
            if not math.isfinite(v):
                raise ValidationError(f"graph {self.id}: macro attr {k!r} is not finite")


@dataclass
class AttributeSchema:
    """Names the graph-level (macro) and node-aggregate (micro) attributes.

    ``label_source`` is either "degree" (seed WL labels from node degree) or
    "explicit" (labels taken verbatim from the corpus file).
    """

    macro: list[tuple[str, str]] = field(default_factory=list)  # (name, description)
    micro: list[tuple[str, str]] = field(default_factory=list)  # (name, aggregator)
    label_source: str = "degree"
    log_transform: list[str] = field(default_factory=list)  # per-attribute opt-in

    def __post_init__(self):
        names = [n for n, _ in self.macro] + [n for n, _ in self.micro]
        if len(set(names)) != len(names):
            raise ValidationError("attribute names must be unique across macro and micro")
        for name, agg in self.micro:
            if agg not in MICRO_AGGREGATORS:
                raise ValidationError(f"unknown aggregator {agg!r} for micro attr {name!r}")
        if self.label_source not in ("degree", "explicit"):
            raise ValidationError(f"unknown labelSource {self.label_source!r}")

    @property
    def attribute_names(self) -> list[str]:
        return [n for n, _ in self.macro] + [n for n, _ in self.micro]

    @property
    def n_attributes(self) -> int:
        return len(self.macro) + len(self.micro)

    def to_dict(self) -> dict:
        return {
            "macro": [{"name": n, "description": d} for n, d in self.macro],
            "micro": [{"name": n, "aggregator": a} for n, a in self.micro],
            "labelSource": self.label_source,
            "logTransform": list(self.log_transform),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AttributeSchema":
        return cls(
            macro=[(m["name"], m.get("description", "")) for m in d.get("macro", [])],
            micro=[(m["name"], m["aggregator"]) for m in d.get("micro", [])],
            label_source=d.get("labelSource", "degree"),
            log_transform=list(d.get("logTransform", [])),
        )


@dataclass
class Corpus:
    graphs: list[Graph]
    schema: AttributeSchema
    name: str = "corpus"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [g.id for g in self.graphs]
        if len(set(ids)) != len(ids):
            raise ValidationError("graph ids must be unique within a corpus")
        self._by_id = {g.id: g for g in self.graphs}

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, graph_id: str) -> Graph:
        return self._by_id[graph_id]

    def __contains__(self, graph_id: str) -> bool:
        return graph_id in self._by_id

    @property
    def graph_ids(self) -> list[str]:
        return [g.id for g in self.graphs]


def _apply_label_source(g: Graph, schema: AttributeSchema) -> Graph:
    if schema.label_source == "degree":
        adj = g.adjacency()
        g.nodes = [Node(n.id, str(len(adj[n.id])), n.attrs) for n in g.nodes]
    return g


def _parse_graph(rec: dict) -> Graph:
    try:
        nodes = [
            Node(str(n["id"]), str(n.get("label", "")), {k: float(v) for k, v in n.get("attrs", {}).items()})
            for n in rec["nodes"]
        ]
        edges = [
            Edge(str(e["s"]), str(e["t"]), None if e.get("w") is None else float(e["w"]))
            for e in rec.get("edges", [])
        ]
        return Graph(
            id=str(rec["id"]),
            nodes=nodes,
            edges=edges,
            directed=bool(rec.get("directed", False)),
            macro_attrs={k: float(v) for k, v in rec.get("macroAttrs", {}).items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed graph record ({exc})") from exc


def load_corpus(path, schema: AttributeSchema | None = None) -> Corpus:
    """Load and validate a JSON-lines corpus file.

    The header record supplies the schema; an explicit ``schema`` argument
    overrides it. Graph order is preserved.
    """
    graphs: list[Graph] = []
    header = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            if header is None:
                if "schema" not in rec:
                    raise ParseError(f"{path}: first record must carry the schema header")
                header = rec
                continue
            graphs.append(_parse_graph(rec))
    if header is None:
        raise ParseError(f"{path}: empty corpus file")
    schema = schema or AttributeSchema.from_dict(header["schema"])
    for g in graphs:
        g.validate(schema)
        _apply_label_source(g, schema)
    return Corpus(
        graphs=graphs,
        schema=schema,
        name=header.get("name", "corpus"),
        meta=header.get("meta", {}),
    )


def write_corpus(corpus: Corpus, path) -> None:
    """Write a corpus back out in the same JSON-lines format load_corpus reads."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {"schema": corpus.schema.to_dict(), "name": corpus.name}
        if corpus.meta:
            header["meta"] = corpus.meta
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for g in corpus.graphs:
            rec = {
                "id": g.id,
                "directed": g.directed,
                "nodes": [
                    {"id": n.id, "label": n.label, "attrs": n.attrs} for n in g.nodes
                ],
                "edges": [
                    {"s": e.source, "t": e.target, **({"w": e.weight} if e.weight is not None else {})}
                    for e in g.edges
                ],
                "macroAttrs": g.macro_attrs,
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _bfs_depths(adj: dict[str, list[str]], start: str) -> dict[str, int]:
    depth = {start: 0}
    q = deque([start])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in depth:
                depth[v] = depth[u] + 1
                q.append(v)
    return depth


def _diameter(g: Graph) -> int:
    """Longest shortest path within any connected component."""
    adj = g.adjacency()
    best = 0
    for n in g.node_ids:
        depths = _bfs_depths(adj, n)
        best = max(best, max(depths.values()))
    return best


def _dag_depth(g: Graph) -> int:
    """Longest directed path length from any root; falls back to diameter on cycles."""
    out = g.out_adjacency()
    indeg = {n: 0 for n in g.node_ids}
    for u, vs in out.items():
        for v in vs:
            indeg[v] += 1
    order = deque(sorted(n for n, d in indeg.items() if d == 0))
    dist = {n: 0 for n in order}
    seen = 0
    best = 0
    while order:
        u = order.popleft()
        seen += 1
        for v in out[u]:
            dist[v] = max(dist.get(v, 0), dist[u] + 1)
            best = max(best, dist[v])
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
    if seen < len(g.nodes):  # cycle: directed depth undefined
        return _diameter(g)
    return best


def graph_stats(g: Graph) -> dict:
    """Node/edge counts, depth (directed longest path or diameter) and degree histogram."""
    adj = g.adjacency()
    hist: dict[int, int] = {}
    for n in g.node_ids:
        d = len(adj[n])
        hist[d] = hist.get(d, 0) + 1
    depth = _dag_depth(g) if g.directed else _diameter(g)
    return {
        "nodeCount": len(g.nodes),
        "edgeCount": len(g.edges),
        "depth": depth,
        "degreeHistogram": hist,
    }


STRUCT_STAT_NAMES = ("nodeCount", "edgeCount", "depth")
