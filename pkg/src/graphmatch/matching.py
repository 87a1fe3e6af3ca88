"""Distance-based matching, clustering and 2D projection over embedding spaces.

Corpora here are small (10^3..10^4 graphs), so k-NN is an exact linear scan
and clustering works on full pairwise distances. Ties always break by graph id
so results are independent of corpus row order.
"""

from dataclasses import dataclass

import numpy as np

from .attributes import extract_attributes
from .errors import BadParams, EmptyIndex, PerplexityTooLarge, TargetIsNoise, UnknownAttribute
from .graph import STRUCT_STAT_NAMES, Corpus, graph_stats

SPACES = ("structure", "attribute", "fused")


@dataclass
class EmbeddingIndex:
    space: str
    matrix: np.ndarray  # M x dim
    graph_ids: list[str]

    def __post_init__(self):
        if self.matrix.shape[0] != len(self.graph_ids):
            raise ValueError("row count must match id count")
        self._row = {gid: i for i, gid in enumerate(self.graph_ids)}

    def row_of(self, graph_id: str) -> int | None:
        return self._row.get(graph_id)


@dataclass
class MatchResult:
    target_id: str  # corpus graph id or "custom"
    space: str
    k: int
    hits: list[tuple[str, float]]  # ascending distance, ties by id
    method: str = "knn"

    def to_dict(self) -> dict:
        return {
            "targetId": self.target_id,
            "space": self.space,
            "k": self.k,
            "method": self.method,
            "hits": [{"graphId": g, "distance": d} for g, d in self.hits],
        }


@dataclass
class ClusterLabels:
    method: str  # "dbscan" | "kmeans"
    params: dict
    labels: dict[str, int]  # graph id -> label; -1 = DBSCAN noise


@dataclass
class ProjectionPoint:
    graph_id: str
    x: float
    y: float
    cluster_label: int | None = None


def knn_match(index: EmbeddingIndex, target: np.ndarray | str, k: int) -> MatchResult:
    """Exact Euclidean k-NN; a corpus-member target is excluded from its own hits."""
    if index.matrix.shape[0] == 0:
        raise EmptyIndex("index has no rows")
    if k < 1:
        raise BadParams("k must be >= 1")
    target_id = "custom"
    if isinstance(target, str):
        row = index.row_of(target)
        if row is None:
            raise KeyError(f"graph {target!r} not in index")
        target_id = target
        vec = index.matrix[row]
    else:
        vec = np.asarray(target, dtype=float)
        if vec.shape != (index.matrix.shape[1],):
            raise BadParams(
                f"target dim {vec.shape} != index dim ({index.matrix.shape[1]},)"
            )
    dists = np.sqrt(np.sum((index.matrix - vec) ** 2, axis=1))
    ranked = sorted(
        (
            (float(d), gid)
            for gid, d in zip(index.graph_ids, dists)
            if gid != target_id
        ),
    )
    hits = [(gid, d) for d, gid in ranked[:k]]
    return MatchResult(target_id=target_id, space=index.space, k=k, hits=hits)


# ---------------------------------------------------------------------------
# clustering


def _kmeans_pp_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = [x[rng.integers(len(x))]]
    for _ in range(1, k):
        d2 = np.min(
            np.stack([np.sum((x - c) ** 2, axis=1) for c in centers]), axis=0
        )
        total = d2.sum()
        if total == 0:
            centers.append(x[rng.integers(len(x))])
            continue
        centers.append(x[np.searchsorted(np.cumsum(d2 / total), rng.random())])
    return np.stack(centers)


def kmeans(
    x: np.ndarray, k: int, seed: int = 0, max_iter: int = 300
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Lloyd iterations from a k-means++ start until the assignment fixpoint.

    Returns (labels, centers, per-step within-cluster-sum-of-squares trace).
    """
    if k < 1 or k > len(x):
        raise BadParams(f"k must be in [1, {len(x)}]")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(x, k, rng)
    labels = np.zeros(len(x), dtype=int)
    trace: list[float] = []
    for _ in range(max_iter):
        d2 = np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(d2, axis=1)
        trace.append(float(d2[np.arange(len(x)), new_labels].sum()))
        if np.array_equal(new_labels, labels) and trace[:-1]:
            break
        labels = new_labels
        for j in range(k):
            members = x[labels == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    return labels, centers, trace


def dbscan(x: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """Standard density-reachability clustering with Euclidean distance; -1 = noise."""
    if eps <= 0 or min_pts < 1:
        raise BadParams("eps must be > 0 and min_pts >= 1")
    n = len(x)
    d = np.sqrt(np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=2))
    neighbors = [np.flatnonzero(d[i] <= eps) for i in range(n)]
    core = np.array([len(nb) >= min_pts for nb in neighbors])
    labels = np.full(n, -1, dtype=int)
    cluster = 0
    for i in range(n):
        if labels[i] != -1 or not core[i]:
            continue
        labels[i] = cluster
        frontier = list(neighbors[i])
        while frontier:
            j = frontier.pop()
            if labels[j] == -1:
                labels[j] = cluster
                if core[j]:
                    frontier.extend(neighbors[j])
        cluster += 1
    return labels


def cluster(index: EmbeddingIndex, method: str, params: dict) -> ClusterLabels:
    """Cluster the index with DBSCAN (eps, minPts) or k-means (k, seed)."""
    if method == "dbscan":
        try:
            labels = dbscan(index.matrix, float(params["eps"]), int(params["minPts"]))
        except KeyError as exc:
            raise BadParams(f"dbscan requires eps and minPts ({exc})") from exc
    elif method == "kmeans":
        try:
            labels, _, _ = kmeans(
                index.matrix, int(params["k"]), seed=int(params.get("seed", 0))
            )
        except KeyError as exc:
            raise BadParams(f"kmeans requires k ({exc})") from exc
    else:
        raise BadParams(f"unknown clustering method {method!r}")
    return ClusterLabels(
        method=method,
        params=dict(params),
        labels={gid: int(lab) for gid, lab in zip(index.graph_ids, labels)},
    )


def cluster_match(
    labels: ClusterLabels, index: EmbeddingIndex, target_id: str
) -> MatchResult:
    """All same-cluster graphs, sorted by distance to the target."""
    if target_id not in labels.labels:
        raise KeyError(f"graph {target_id!r} has no cluster label")
    lab = labels.labels[target_id]
    if lab == -1:
        raise TargetIsNoise(f"graph {target_id!r} is DBSCAN noise")
    row = index.row_of(target_id)
    vec = index.matrix[row]
    members = [
        gid for gid, l in labels.labels.items() if l == lab and gid != target_id
    ]
    hits = sorted(
        (
            (float(np.linalg.norm(index.matrix[index.row_of(gid)] - vec)), gid)
            for gid in members
        ),
    )
    return MatchResult(
        target_id=target_id,
        space=index.space,
        k=len(hits),
        hits=[(gid, d) for d, gid in hits],
        method="cluster",
    )


# ---------------------------------------------------------------------------
# t-SNE projection


def _perplexity_probs(d2_row: np.ndarray, perplexity: float) -> np.ndarray:
    """Binary-search the Gaussian bandwidth matching the requested perplexity."""
    target = np.log(perplexity)
    beta_lo, beta_hi, beta = 0.0, np.inf, 1.0
    for _ in range(64):
        p = np.exp(-d2_row * beta)
        total = p.sum()
        if total <= 0:
            entropy = 0.0
            p = np.zeros_like(p)
        else:
            p = p / total
            nz = p > 0
            entropy = -np.sum(p[nz] * np.log(p[nz]))
        if abs(entropy - target) < 1e-7:
            break
        if entropy > target:
            beta_lo = beta
            beta = beta * 2 if beta_hi == np.inf else (beta + beta_hi) / 2
        else:
            beta_hi = beta
            beta = (beta + beta_lo) / 2
    return p


def tsne(
    x: np.ndarray,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
    learning_rate: float | None = None,
) -> tuple[np.ndarray, list[float]]:
    """Plain momentum-gradient t-SNE; returns (M x 2 layout, KL trace).

    Early exaggeration (12x) runs for the first quarter of the iterations with
    momentum 0.5, then momentum switches to 0.8.
    """
    n = len(x)
    if n < 4:
        raise BadParams("t-SNE needs at least 4 points")
    if perplexity >= (n - 1) / 3:
        raise PerplexityTooLarge(f"perplexity {perplexity} too large for {n} points")
    if learning_rate is None:
        learning_rate = max(n / 12.0, 50.0)

    d2 = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=2)
    cond = np.zeros((n, n))
    for i in range(n):
        row = np.delete(d2[i], i)
        p = _perplexity_probs(row, perplexity)
        cond[i, np.arange(n) != i] = p
    p_joint = (cond + cond.T) / (2 * n)
    p_joint = np.maximum(p_joint, 1e-12)

    rng = np.random.default_rng(seed)
    y = rng.normal(scale=1e-4, size=(n, 2))
    velocity = np.zeros_like(y)
    exaggeration_end = iterations // 4
    kl_trace: list[float] = []
    for it in range(iterations):
        p_eff = p_joint * 12.0 if it < exaggeration_end else p_joint
        dy2 = np.sum((y[:, None, :] - y[None, :, :]) ** 2, axis=2)
        num = 1.0 / (1.0 + dy2)
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / num.sum(), 1e-12)
        pq = (p_eff - q) * num
        grad = 4.0 * (np.diag(pq.sum(axis=1)) - pq) @ y
        momentum = 0.5 if it < exaggeration_end else 0.8
        velocity = momentum * velocity - learning_rate * grad
        y = y + velocity
        y = y - y.mean(axis=0)
        kl_trace.append(float(np.sum(p_joint * np.log(p_joint / q))))
    return y, kl_trace


def project_tsne(
    index: EmbeddingIndex,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
    cluster_labels: ClusterLabels | None = None,
) -> list[ProjectionPoint]:
    """2D t-SNE layout of the index, optionally annotated with cluster labels."""
    y, _ = tsne(index.matrix, perplexity=perplexity, iterations=iterations, seed=seed)
    points = []
    for gid, (px, py) in zip(index.graph_ids, y):
        lab = cluster_labels.labels.get(gid) if cluster_labels else None
        points.append(ProjectionPoint(gid, float(px), float(py), lab))
    return points


# ---------------------------------------------------------------------------


def attribute_scatter(
    corpus: Corpus, x_attr: str, y_attr: str
) -> list[tuple[str, float, float]]:
    """Raw attribute or structural-stat values for a 2D scatter, one point per graph."""
    names = corpus.schema.attribute_names

    def value(g, attr):
        if attr in STRUCT_STAT_NAMES:
            return float(graph_stats(g)[attr])
        if attr not in names:
            raise UnknownAttribute(f"{attr!r} is not a schema attribute or structural stat")
        vec = extract_attributes(g, corpus.schema)
        return float(vec.values[names.index(attr)])

    return [(g.id, value(g, x_attr), value(g, y_attr)) for g in corpus.graphs]
