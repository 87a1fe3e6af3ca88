"""Attribute-structure fused graph matching toolkit."""

from .attributes import AttributeVector, NormalizationStats, extract_attributes, standardize
from .cca import CCAModel, fit_cca, fuse_corpus, transform
from .errors import GraphMatchError
from .evalbench import BenchReport, FamilySpec, attr_distance, ged, gen_synthetic, run_benchmark
from .graph import AttributeSchema, Corpus, Edge, Graph, Node, graph_stats, load_corpus, write_corpus
from .matching import EmbeddingIndex, MatchResult, cluster, cluster_match, knn_match, project_tsne
from .skipgram import EmbedConfig, SkipGramModel, StructureVector, embed_new_graph, train
from .wl import SubgraphToken, Vocabulary, build_context, build_vocabulary, get_wl_subgraph

__version__ = "0.1.0"

__all__ = [
    "AttributeSchema",
    "AttributeVector",
    "BenchReport",
    "CCAModel",
    "Corpus",
    "Edge",
    "EmbedConfig",
    "EmbeddingIndex",
    "FamilySpec",
    "Graph",
    "GraphMatchError",
    "MatchResult",
    "Node",
    "NormalizationStats",
    "SkipGramModel",
    "StructureVector",
    "SubgraphToken",
    "Vocabulary",
    "attr_distance",
    "build_context",
    "build_vocabulary",
    "cluster",
    "cluster_match",
    "embed_new_graph",
    "extract_attributes",
    "fit_cca",
    "fuse_corpus",
    "ged",
    "gen_synthetic",
    "get_wl_subgraph",
    "graph_stats",
    "knn_match",
    "load_corpus",
    "project_tsne",
    "run_benchmark",
    "standardize",
    "train",
    "transform",
    "write_corpus",
]
