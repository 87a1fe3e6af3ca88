"""Command-line interface mirroring the HTTP endpoints for headless use.

Artifacts flow through files: a JSON-lines corpus, npz model files, and
tab-separated reports. Report-producing commands (project, bench) also render
matplotlib figures next to the delimited output. All seeds are flags; every
flag can be overridden via GRAPHMATCH_* environment variables.
"""

import json
import pathlib
import sys

import click

from . import pipeline
from .cca import CCAModel
from .errors import GraphMatchError
from .evalbench import (
    STRATEGY_NAMES,
    FamilySpec,
    gen_synthetic,
    planted_corpus,
    run_benchmark,
)
from .graph import graph_stats, load_corpus, write_corpus
from .matching import SPACES, cluster, cluster_match, knn_match, project_tsne
from .skipgram import EmbedConfig, SkipGramModel


def _fail(exc: Exception) -> None:
    raise click.ClickException(str(exc))


def _load_spaces(corpus_path, model_path, cca_path=None):
    corpus = load_corpus(corpus_path)
    sg_model = SkipGramModel.load(model_path)
    attrs = pipeline.attribute_vectors(corpus)
    indexes = {
        "structure": pipeline.structure_index(sg_model),
        "attribute": pipeline.attribute_index(attrs),
    }
    if cca_path is not None:
        cca_model = CCAModel.load(cca_path)
        indexes["fused"] = pipeline.fused_index(sg_model, attrs, cca_model)
    return corpus, sg_model, attrs, indexes


def _pick_index(indexes, space):
    if space not in indexes:
        raise click.ClickException(
            f"space {space!r} unavailable; pass --cca for the fused space"
        )
    return indexes[space]


@click.group(context_settings={"auto_envvar_prefix": "GRAPHMATCH"})
def main():
    """Attribute-structure fused graph matching toolkit."""


@main.command()
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--per-family", default=30, show_default=True)
@click.option("--noise", default=0.1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option(
    "--families",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON list of {motif, attrCenter, count}; overrides the default three families",
)
def gen(out, per_family, noise, seed, families):
    """Generate a synthetic planted-family corpus."""
    try:
        if families:
            with open(families) as fh:
                specs = [
                    FamilySpec(f["motif"], f["attrCenter"], f["count"])
                    for f in json.load(fh)
                ]
            corpus = gen_synthetic(specs, noise=noise, seed=seed)
        else:
            corpus = planted_corpus(per_family=per_family, noise=noise, seed=seed)
        write_corpus(corpus, out)
    except GraphMatchError as exc:
        _fail(exc)
    click.echo(f"wrote {len(corpus)} graphs to {out}")


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
def ingest(corpus_path):
    """Validate a corpus file and print a summary."""
    try:
        corpus = load_corpus(corpus_path)
    except GraphMatchError as exc:
        _fail(exc)
    nodes = sum(len(g.nodes) for g in corpus.graphs)
    edges = sum(len(g.edges) for g in corpus.graphs)
    click.echo(
        f"{corpus.name}: {len(corpus)} graphs, {nodes} nodes, {edges} edges, "
        f"{corpus.schema.n_attributes} attributes"
    )


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--dim", default=128, show_default=True)
@click.option("--epochs", default=50, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--negatives", default=5, show_default=True)
@click.option("--degree", default=2, show_default=True, help="max WL subgraph degree")
def embed(corpus_path, out, dim, epochs, seed, negatives, degree):
    """Train per-graph structure embeddings."""
    try:
        corpus = load_corpus(corpus_path)
        cfg = EmbedConfig(
            dim=dim, epochs=epochs, seed=seed, negatives=negatives, max_degree=degree
        )
        model = pipeline.train_embedding(corpus, cfg)
        model.save(out)
    except GraphMatchError as exc:
        _fail(exc)
    click.echo(
        f"trained {model.graph_vectors.shape[0]}x{dim} embedding "
        f"(vocab {len(model.vocab)}, final loss {model.loss_history[-1]:.4f}) -> {out}"
    )


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--m", type=int, default=None, help="retained canonical pairs")
@click.option("--ridge", type=float, default=None, help="covariance regularization")
@click.option("--weighted", is_flag=True, help="scale fused components by their correlation")
def fuse(corpus_path, model_path, out, m, ridge, weighted):
    """Fit the cross-view fusion model."""
    try:
        corpus = load_corpus(corpus_path)
        sg_model = SkipGramModel.load(model_path)
        attrs = pipeline.attribute_vectors(corpus)
        cca_model = pipeline.fit_fusion(sg_model, attrs, m=m, ridge=ridge, weighted=weighted)
        cca_model.save(out)
    except GraphMatchError as exc:
        _fail(exc)
    gammas = ", ".join(f"{g:.4f}" for g in cca_model.correlations)
    flag = " (rank deficient)" if cca_model.rank_deficient else ""
    click.echo(f"fitted {cca_model.m} canonical pairs{flag}: [{gammas}] -> {out}")


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cca", "cca_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--space", type=click.Choice(SPACES), default="fused", show_default=True)
@click.option("--method", type=click.Choice(["knn", "cluster"]), default="knn", show_default=True)
@click.option("--k", default=10, show_default=True)
@click.option("--target", required=True, help="target graph id")
@click.option("--eps", type=float, default=0.5, help="DBSCAN eps (cluster method)")
@click.option("--minpts", type=int, default=4, help="DBSCAN minPts (cluster method)")
@click.option("--out", type=click.Path(dir_okay=False), help="hits file (default stdout)")
def match(corpus_path, model_path, cca_path, space, method, k, target, eps, minpts, out):
    """Retrieve graphs similar to a corpus target; one 'graphId<TAB>distance' per line."""
    try:
        corpus, _, _, indexes = _load_spaces(corpus_path, model_path, cca_path)
        index = _pick_index(indexes, space)
        if target not in corpus:
            raise click.ClickException(f"unknown target graph {target!r}")
        if method == "knn":
            result = knn_match(index, target, k)
        else:
            labels = cluster(index, "dbscan", {"eps": eps, "minPts": minpts})
            result = cluster_match(labels, index, target)
    except GraphMatchError as exc:
        _fail(exc)
    lines = [f"{gid}\t{dist:.6f}" for gid, dist in result.hits]
    text = "\n".join(lines) + "\n"
    if out:
        pathlib.Path(out).write_text(text)
        click.echo(f"{len(result.hits)} hits -> {out}")
    else:
        sys.stdout.write(text)


@main.command("cluster")
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cca", "cca_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--space", type=click.Choice(SPACES), default="fused", show_default=True)
@click.option("--method", type=click.Choice(["dbscan", "kmeans"]), default="dbscan", show_default=True)
@click.option("--eps", type=float, default=0.5, show_default=True)
@click.option("--minpts", type=int, default=4, show_default=True)
@click.option("--k", type=int, default=3, show_default=True, help="k-means cluster count")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="labels file (default stdout)")
def cluster_cmd(corpus_path, model_path, cca_path, space, method, eps, minpts, k, seed, out):
    """Cluster the corpus in an embedding space; one 'graphId<TAB>label' per line."""
    try:
        _, _, _, indexes = _load_spaces(corpus_path, model_path, cca_path)
        index = _pick_index(indexes, space)
        params = {"eps": eps, "minPts": minpts} if method == "dbscan" else {"k": k, "seed": seed}
        labels = cluster(index, method, params)
    except GraphMatchError as exc:
        _fail(exc)
    text = "\n".join(f"{gid}\t{lab}" for gid, lab in labels.labels.items()) + "\n"
    if out:
        pathlib.Path(out).write_text(text)
        click.echo(f"labels -> {out}")
    else:
        sys.stdout.write(text)


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cca", "cca_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--space", type=click.Choice(SPACES), default="fused", show_default=True)
@click.option("--perplexity", default=30.0, show_default=True)
@click.option("--iterations", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--figure", type=click.Path(dir_okay=False), help="also render a PNG scatter")
def project(corpus_path, model_path, cca_path, space, perplexity, iterations, seed, out, figure):
    """2D projection of an embedding space; 'graphId<TAB>x<TAB>y' per line."""
    try:
        _, _, _, indexes = _load_spaces(corpus_path, model_path, cca_path)
        index = _pick_index(indexes, space)
        points = project_tsne(
            index, perplexity=perplexity, iterations=iterations, seed=seed
        )
    except GraphMatchError as exc:
        _fail(exc)
    text = "\n".join(f"{p.graph_id}\t{p.x:.6f}\t{p.y:.6f}" for p in points) + "\n"
    pathlib.Path(out).write_text(text)
    click.echo(f"projection -> {out}")
    if figure:
        from .report import projection_figure

        projection_figure(points, figure, title=f"{space} space")
        click.echo(f"figure -> {figure}")


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--strategies", default="Str,Attr,CCA,DC,IDC", show_default=True)
@click.option("--k", "k_values", default="5,10,15", show_default=True)
@click.option("--targets", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--m", type=int, default=None)
@click.option("--ridge", type=float, default=None)
@click.option("--beam-width", default=64, show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
def bench(corpus_path, model_path, strategies, k_values, targets, seed, m, ridge, beam_width, out_dir):
    """Run the strategy comparison; writes report.json, report.tsv and figures."""
    names = [s.strip() for s in strategies.split(",") if s.strip()]
    bad = [s for s in names if s not in STRATEGY_NAMES]
    if bad:
        raise click.ClickException(f"unknown strategies {bad}; choose from {STRATEGY_NAMES}")
    ks = [int(v) for v in k_values.split(",") if v.strip()]
    try:
        corpus = load_corpus(corpus_path)
        sg_model = SkipGramModel.load(model_path)
        attrs = pipeline.attribute_vectors(corpus)
        kwargs = {} if ridge is None else {"ridge": ridge}
        report = run_benchmark(
            corpus,
            sg_model.graph_vectors,
            attrs,
            names,
            ks,
            targets,
            seed=seed,
            m=m,
            beam_width=beam_width,
            **kwargs,
        )
    except GraphMatchError as exc:
        _fail(exc)
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json() + "\n")
    (out / "report.tsv").write_text(report.to_tsv())
    from .report import bench_figure

    bench_figure(report, out / "report.png")
    click.echo(report.to_table())
    click.echo(f"report -> {out}/report.json, {out}/report.tsv, {out}/report.png")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False),
              help="preload a corpus into a session at startup")
def serve(host, port, corpus_path):
    """Start the HTTP service (and the bundled web UI, when built)."""
    import uvicorn

    from .service import create_app

    app = create_app(preload_corpus=corpus_path)
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("graph_id")
def stats(corpus_path, graph_id):
    """Print structural stats of one graph."""
    try:
        corpus = load_corpus(corpus_path)
        if graph_id not in corpus:
            raise click.ClickException(f"unknown graph {graph_id!r}")
        click.echo(json.dumps(graph_stats(corpus[graph_id]), sort_keys=True))
    except GraphMatchError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
