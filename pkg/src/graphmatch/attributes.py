"""Per-graph attribute vectors (macro + aggregated micro) and corpus-wide standardization."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, MissingAttribute
from .graph import AttributeSchema, Graph


@dataclass
class AttributeVector:
    values: np.ndarray  # length N_A, schema order (macro then micro)
    graph_id: str


@dataclass
class NormalizationStats:
    means: np.ndarray
    stdevs: np.ndarray  # strictly positive; constant columns forced to 1

    def apply(self, values: np.ndarray) -> np.ndarray:
        return (values - self.means) / self.stdevs

    def to_dict(self) -> dict:
        return {"means": self.means.tolist(), "stdevs": self.stdevs.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationStats":
        return cls(np.asarray(d["means"], float), np.asarray(d["stdevs"], float))


_AGGS = {
    "sum": sum,
    "mean": lambda xs: sum(xs) / len(xs),
    "min": min,
    "max": max,
    "count": len,
}


def extract_attributes(g: Graph, schema: AttributeSchema) -> AttributeVector:
    """Macro values read from the graph record, micro values aggregated over nodes.

    Missing values are an error, never a silent zero.
    """
    out = []
    for name, _ in schema.macro:
        if name not in g.macro_attrs:
            raise MissingAttribute(f"graph {g.id}: macro attribute {name!r} missing")
        out.append(g.macro_attrs[name])
    for name, agg in schema.micro:
        if agg != "count" and not g.nodes:
            raise EmptyGraph(f"graph {g.id}: cannot aggregate {name!r} over zero nodes")
        vals = []
        for n in g.nodes:
            if name not in n.attrs:
                if agg == "count":
                    continue
                raise MissingAttribute(f"graph {g.id}: node {n.id!r} missing attribute {name!r}")
            vals.append(n.attrs[name])
        if agg == "count":
            out.append(float(len(vals)))
        elif not vals:
            raise EmptyGraph(f"graph {g.id}: cannot aggregate {name!r} over zero nodes")
        else:
            out.append(float(_AGGS[agg](vals)))
    values = np.asarray(out, dtype=float)
    if schema.log_transform:
        names = schema.attribute_names
        for attr in schema.log_transform:
            j = names.index(attr)
            values[j] = math.log1p(values[j])
    return AttributeVector(values=values, graph_id=g.id)


def attribute_matrix(vectors: list[AttributeVector]) -> np.ndarray:
    return np.vstack([v.values for v in vectors]) if vectors else np.empty((0, 0))


def fit_stats(matrix: np.ndarray) -> NormalizationStats:
    """Population (1/M) moments; constant columns keep stdev 1 so they map to zero."""
    means = matrix.mean(axis=0)
    stdevs = matrix.std(axis=0)  # population by default
    stdevs = np.where(stdevs > 0, stdevs, 1.0)
    return NormalizationStats(means=means, stdevs=stdevs)


def standardize(vectors: list[AttributeVector]) -> tuple[np.ndarray, NormalizationStats]:
    """Zero-mean unit-variance columns over the corpus; stats kept for query time."""
    if len(vectors) < 2:
        raise ValueError("standardization needs at least two vectors")
    matrix = attribute_matrix(vectors)
    stats = fit_stats(matrix)
    return stats.apply(matrix), stats
