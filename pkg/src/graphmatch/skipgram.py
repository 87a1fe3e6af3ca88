"""Per-graph structure embeddings trained doc2vec-style over subgraph tokens.

Each training example is a (graph, token) pair: the graph vector is pulled
toward the output vectors of its own subgraph tokens and pushed away from
negative tokens drawn from the smoothed unigram distribution. Single-threaded
training with a fixed seed is bit-reproducible.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCorpus, NoKnownTokens
from .graph import Graph
from .wl import GraphContext, Vocabulary, build_context

MODEL_VERSION = 1


@dataclass
class EmbedConfig:
    dim: int = 128
    epochs: int = 50
    learning_rate: float = 0.025
    lr_floor: float = 0.0001
    negatives: int = 5
    noise_power: float = 0.75
    max_degree: int = 2  # WL degree used to build contexts
    seed: int = 0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("embedding dimension must be >= 2")
        if self.negatives < 1:
            raise ValueError("need at least one negative sample")
        if self.epochs < 1:
            raise ValueError("epochs must be positive")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "epochs": self.epochs,
            "learningRate": self.learning_rate,
            "lrFloor": self.lr_floor,
            "negatives": self.negatives,
            "noisePower": self.noise_power,
            "maxDegree": self.max_degree,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbedConfig":
        return cls(
            dim=d["dim"],
            epochs=d["epochs"],
            learning_rate=d["learningRate"],
            lr_floor=d["lrFloor"],
            negatives=d["negatives"],
            noise_power=d["noisePower"],
            max_degree=d.get("maxDegree", 2),
            seed=d["seed"],
        )


@dataclass
class StructureVector:
    values: np.ndarray
    graph_id: str


@dataclass
class SkipGramModel:
    graph_vectors: np.ndarray  # M x dim, corpus order
    token_vectors: np.ndarray  # V x dim
    noise_cdf: np.ndarray      # cumulative smoothed unigram distribution
    vocab: Vocabulary
    graph_ids: list[str]
    config: EmbedConfig
    loss_history: list[float] = field(default_factory=list)
    degenerate_vocab: bool = False

    def structure_vectors(self) -> list[StructureVector]:
        return [
            StructureVector(self.graph_vectors[i].copy(), gid)
            for i, gid in enumerate(self.graph_ids)
        ]

    def save(self, path) -> None:
        tokens = sorted(self.vocab.index, key=self.vocab.index.__getitem__)
        meta = json.dumps(
            {
                "version": MODEL_VERSION,
                "config": self.config.to_dict(),
                "graphIds": self.graph_ids,
                "tokens": tokens,
                "frequencies": [self.vocab.frequency[t] for t in tokens],
                "lossHistory": self.loss_history,
                "degenerateVocab": self.degenerate_vocab,
            },
            sort_keys=True,
        )
        np.savez(
            path,
            meta=np.frombuffer(meta.encode(), dtype=np.uint8),
            graph_vectors=self.graph_vectors,
            token_vectors=self.token_vectors,
            noise_cdf=self.noise_cdf,
        )

    @classmethod
    def load(cls, path) -> "SkipGramModel":
        data = np.load(path)
        meta = json.loads(bytes(data["meta"]).decode())
        if meta["version"] != MODEL_VERSION:
            raise ValueError(f"unsupported model version {meta['version']}")
        vocab = Vocabulary()
        for i, tok in enumerate(meta["tokens"]):
            vocab.index[tok] = i
            vocab.frequency[tok] = meta["frequencies"][i]
        gv, tv = data["graph_vectors"], data["token_vectors"]
        cfg = EmbedConfig.from_dict(meta["config"])
        if gv.shape[0] != len(meta["graphIds"]) or tv.shape[0] != len(vocab):
            raise ValueError("model matrices disagree with header dimensions")
        if gv.shape[1] != cfg.dim or tv.shape[1] != cfg.dim:
            raise ValueError("model matrices disagree with configured dimension")
        return cls(
            graph_vectors=gv,
            token_vectors=tv,
            noise_cdf=data["noise_cdf"],
            vocab=vocab,
            graph_ids=list(meta["graphIds"]),
            config=cfg,
            loss_history=list(meta["lossHistory"]),
            degenerate_vocab=meta["degenerateVocab"],
        )


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -30.0, 30.0)))


def _noise_cdf(vocab: Vocabulary, power: float) -> np.ndarray:
    freq = np.zeros(len(vocab))
    for tok, i in vocab.index.items():
        freq[i] = vocab.frequency[tok]
    weights = freq**power
    return np.cumsum(weights / weights.sum())


def _sgd_pass(
    vec_rows: np.ndarray,
    examples: np.ndarray,
    token_vectors: np.ndarray,
    noise_cdf: np.ndarray,
    cfg: EmbedConfig,
    rng: np.random.Generator,
    updates_done: int,
    total_updates: int,
    freeze_tokens: bool,
) -> tuple[float, int]:
    """One shuffled epoch of negative-sampling SGD; returns (mean loss, updates_done)."""
    order = rng.permutation(len(examples))
    loss_sum = 0.0
    span = cfg.learning_rate - cfg.lr_floor
    for idx in order:
        row, pos = examples[idx]
        lr = cfg.learning_rate - span * (updates_done / max(total_updates - 1, 1))
        negs = np.searchsorted(noise_cdf, rng.random(cfg.negatives))
        targets = np.concatenate(([pos], negs))
        v = vec_rows[row]
        u = token_vectors[targets]
        scores = u @ v
        p = _sigmoid(scores)
        loss_sum += -np.log(max(p[0], 1e-12)) - np.sum(np.log(np.maximum(1.0 - p[1:], 1e-12)))
        grad_scale = p.copy()
        grad_scale[0] -= 1.0
        vec_rows[row] = v - lr * (grad_scale @ u)
        if not freeze_tokens:
            np.add.at(token_vectors, targets, -lr * np.outer(grad_scale, v))
        updates_done += 1
    return loss_sum / len(examples), updates_done


def train(
    contexts: list[GraphContext],
    vocab: Vocabulary,
    cfg: EmbedConfig | None = None,
) -> SkipGramModel:
    """Train graph vectors against token output vectors by negative sampling.

    Per-epoch mean loss is recorded in ``loss_history``; with a fixed seed the
    result is deterministic.
    """
    cfg = cfg or EmbedConfig()
    if not contexts:
        raise EmptyCorpus("no graph contexts to train on")
    degenerate = len(vocab) < 2
    if degenerate:
        warnings.warn("single-token vocabulary: negative samples collide with positives")

    examples = np.array(
        [
            (row, vocab.index[t.token])
            for row, ctx in enumerate(contexts)
            for t in ctx.tokens
        ],
        dtype=np.int64,
    )
    rng = np.random.default_rng(cfg.seed)
    graph_vectors = rng.uniform(-0.5 / cfg.dim, 0.5 / cfg.dim, (len(contexts), cfg.dim))
    token_vectors = np.zeros((len(vocab), cfg.dim))
    noise_cdf = _noise_cdf(vocab, cfg.noise_power)

    total = cfg.epochs * len(examples)
    done = 0
    history = []
    for epoch in range(cfg.epochs):
        mean_loss, done = _sgd_pass(
            graph_vectors, examples, token_vectors, noise_cdf, cfg, rng,
            done, total, freeze_tokens=False,
        )
        history.append(mean_loss)

    return SkipGramModel(
        graph_vectors=graph_vectors,
        token_vectors=token_vectors,
        noise_cdf=noise_cdf,
        vocab=vocab,
        graph_ids=[c.graph_id for c in contexts],
        config=cfg,
        loss_history=history,
        degenerate_vocab=degenerate,
    )


def embed_new_graph(
    g: Graph,
    model: SkipGramModel,
    cfg: EmbedConfig | None = None,
    seed: int | None = None,
) -> StructureVector:
    """Infer a vector for an unseen graph against frozen token vectors.

    Tokens absent from the training vocabulary are skipped; a graph with no
    known token at all is rejected so the caller can warn the user.
    """
    cfg = cfg or model.config
    ctx = build_context(g, cfg.max_degree)
    known = [model.vocab.index[t.token] for t in ctx.tokens if t.token in model.vocab]
    if not known:
        raise NoKnownTokens(
            f"graph {g.id}: no subgraph token in common with the training corpus"
        )
    examples = np.array([(0, tok) for tok in known], dtype=np.int64)
    rng = np.random.default_rng(model.config.seed if seed is None else seed)
    vec = rng.uniform(-0.5 / cfg.dim, 0.5 / cfg.dim, (1, cfg.dim))
    total = cfg.epochs * len(examples)
    done = 0
    for epoch in range(cfg.epochs):
        _, done = _sgd_pass(
            vec, examples, model.token_vectors, model.noise_cdf, cfg, rng,
            done, total, freeze_tokens=True,
        )
    return StructureVector(values=vec[0], graph_id=g.id)
