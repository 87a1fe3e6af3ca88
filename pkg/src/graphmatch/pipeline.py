"""Shared plumbing between the CLI and the HTTP service: corpus -> vectors -> indexes."""

from dataclasses import dataclass

import numpy as np

from .attributes import AttributeVector, attribute_matrix, extract_attributes, fit_stats
from .cca import CCAModel, fit_cca, fuse_corpus, transform
from .errors import DependencyError
from .graph import Corpus, Graph
from .matching import EmbeddingIndex
from .skipgram import EmbedConfig, SkipGramModel, embed_new_graph, train
from .wl import build_context, build_vocabulary


def train_embedding(corpus: Corpus, cfg: EmbedConfig | None = None) -> SkipGramModel:
    cfg = cfg or EmbedConfig()
    contexts = [build_context(g, cfg.max_degree) for g in corpus.graphs]
    vocab = build_vocabulary(contexts)
    return train(contexts, vocab, cfg)


def attribute_vectors(corpus: Corpus) -> list[AttributeVector]:
    return [extract_attributes(g, corpus.schema) for g in corpus.graphs]


def fit_fusion(
    sg_model: SkipGramModel,
    attrs: list[AttributeVector],
    m: int | None = None,
    ridge: float | None = None,
    weighted: bool = False,
) -> CCAModel:
    return fit_cca(
        sg_model.graph_vectors, attribute_matrix(attrs), m=m, ridge=ridge, weighted=weighted
    )


def structure_index(sg_model: SkipGramModel) -> EmbeddingIndex:
    return EmbeddingIndex("structure", sg_model.graph_vectors.copy(), list(sg_model.graph_ids))


def attribute_index(attrs: list[AttributeVector]) -> EmbeddingIndex:
    mat = attribute_matrix(attrs)
    return EmbeddingIndex(
        "attribute", fit_stats(mat).apply(mat), [a.graph_id for a in attrs]
    )


def fused_index(
    sg_model: SkipGramModel, attrs: list[AttributeVector], cca_model: CCAModel
) -> EmbeddingIndex:
    fused = fuse_corpus(cca_model, sg_model.graph_vectors, attribute_matrix(attrs))
    return EmbeddingIndex("fused", fused, list(sg_model.graph_ids))


@dataclass
class CustomTargetVectors:
    """Embedding-space coordinates of a user-specified target, per space."""

    structure: np.ndarray | None
    attribute: np.ndarray | None
    fused: np.ndarray | None

    def for_space(self, space: str) -> np.ndarray:
        vec = getattr(self, space)
        if vec is None:
            raise DependencyError(f"custom target has no {space} coordinates")
        return vec


def embed_custom_target(
    sketch: Graph | None,
    attr_point: np.ndarray | None,
    sg_model: SkipGramModel | None,
    attrs: list[AttributeVector] | None,
    cca_model: CCAModel | None,
    infer_seed: int | None = None,
) -> CustomTargetVectors:
    """Place a sketched graph and/or slider attribute point into each available space.

    The sketch is embedded online against the frozen token vectors; the
    attribute point is standardized with corpus (or fitted CCA) stats, never
    refit.
    """
    s_vec = None
    if sketch is not None:
        if sg_model is None:
            raise DependencyError("structure embedding not trained")
        s_vec = embed_new_graph(sketch, sg_model, seed=infer_seed).values
    a_vec = None
    if attr_point is not None:
        if attrs is None:
            raise DependencyError("attribute vectors not computed")
        mat = attribute_matrix(attrs)
        a_vec = fit_stats(mat).apply(np.asarray(attr_point, dtype=float))
    fused_vec = None
    if cca_model is not None and s_vec is not None and attr_point is not None:
        fused_vec = transform(cca_model, s_vec, np.asarray(attr_point, dtype=float))
    return CustomTargetVectors(structure=s_vec, attribute=a_vec, fused=fused_vec)
