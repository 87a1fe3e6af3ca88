"""Rooted-subgraph tokenization via iterative Weisfeiler-Lehman relabeling.

Each node contributes one token per degree 0..D; the degree-d token canonically
encodes the node's depth-d neighborhood given the seed labels. Tokens are
hashed to a fixed 64-bit digest so vocabulary keys stay short; neighbor tokens
are sorted before concatenation so traversal order never leaks into the result.
"""

import hashlib
from collections import Counter
from dataclasses import dataclass, field

from .errors import UnknownNode
from .graph import Graph

_SEP = "\x1f"


def _digest(s: str) -> str:
    return hashlib.blake2b(s.encode("utf-8"), digest_size=8).hexdigest()


@dataclass(frozen=True)
class SubgraphToken:
    token: str
    degree: int


@dataclass
class GraphContext:
    """The multiset of rooted-subgraph tokens extracted from one graph."""

    graph_id: str
    tokens: list[SubgraphToken]

    @property
    def size(self) -> int:
        return len(self.tokens)

    def multiset(self) -> Counter:
        return Counter(self.tokens)


def _wl_tables(g: Graph, max_degree: int) -> list[dict[str, str]]:
    """Token of every node at every degree 0..max_degree."""
    adj = g.adjacency()
    tables = [{n.id: _digest("0" + _SEP + n.label) for n in g.nodes}]
    for d in range(1, max_degree + 1):
        prev = tables[-1]
        cur = {}
        for n in g.node_ids:
            neigh = sorted(prev[v] for v in adj[n])
            cur[n] = _digest(_SEP.join([str(d), prev[n]] + neigh))
        tables.append(cur)
    return tables


def get_wl_subgraph(node_id: str, g: Graph, d: int) -> SubgraphToken:
    """Canonical token of the degree-d rooted subgraph around ``node_id``."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    if node_id not in set(g.node_ids):
        raise UnknownNode(f"graph {g.id}: no node {node_id!r}")
    tables = _wl_tables(g, d)
    return SubgraphToken(tables[d][node_id], d)


def build_context(g: Graph, max_degree: int) -> GraphContext:
    """All rooted-subgraph tokens of ``g`` up to ``max_degree``, one per node per degree."""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    tables = _wl_tables(g, max_degree)
    tokens = [
        SubgraphToken(tables[d][n], d)
        for n in g.node_ids
        for d in range(max_degree + 1)
    ]
    return GraphContext(graph_id=g.id, tokens=tokens)


@dataclass
class Vocabulary:
    index: dict[str, int] = field(default_factory=dict)
    frequency: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, token: str) -> bool:
        return token in self.index


def build_vocabulary(contexts: list[GraphContext]) -> Vocabulary:
    """Assign stable indexes (sorted token order) and corpus-wide frequencies."""
    if not contexts:
        raise ValueError("at least one context required")
    freq: Counter = Counter()
    for ctx in contexts:
        freq.update(t.token for t in ctx.tokens)
    vocab = Vocabulary()
    for i, tok in enumerate(sorted(freq)):
        vocab.index[tok] = i
        vocab.frequency[tok] = freq[tok]
    return vocab
