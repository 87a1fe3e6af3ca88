"""End-to-end acceptance gate: one test per headline guarantee.

Each test records a PASS/FAIL line (printed in the terminal summary) and
asserts its criterion at the stated tolerance, including the runtime budget.
"""

import itertools
import json
import time

import numpy as np
import scipy.linalg
from click.testing import CliRunner

from graphmatch import pipeline
from graphmatch.cca import fit_cca
from graphmatch.cli import main as cli_main
from graphmatch.evalbench import ged, planted_corpus, run_benchmark
from graphmatch.graph import Edge, Graph, Node
from graphmatch.matching import EmbeddingIndex, dbscan, kmeans, knn_match
from graphmatch.skipgram import EmbedConfig, embed_new_graph
from graphmatch.wl import build_context

from conftest import ACCEPTANCE_RESULTS, brute_ged, random_graph


def record(name, ok, detail=""):
    ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


def permuted(g, perm):
    mapping = {f"n{i}": f"p{perm[i]}" for i in range(len(g.nodes))}
    return Graph(
        id=g.id + "_perm",
        nodes=sorted(
            (Node(mapping[n.id], n.label, n.attrs) for n in g.nodes),
            key=lambda n: n.id,
        ),
        edges=[Edge(mapping[e.source], mapping[e.target]) for e in g.edges],
    )


def test_cca_oracle_equivalence():
    start = time.monotonic()
    ridge = 1e-6
    worst_gamma = worst_cross = 0.0
    for trial in range(20):
        rng = np.random.default_rng(trial)
        z = rng.normal(size=(50, 3))
        s = z @ rng.normal(size=(3, 8)) + 0.4 * rng.normal(size=(50, 8))
        a = z @ rng.normal(size=(3, 5)) + 0.4 * rng.normal(size=(50, 5))
        model = fit_cca(s, a, ridge=ridge)

        # oracle: generalized eigenproblem on the joint covariance blocks
        s_std = model.struct_stats.apply(s)
        a_std = model.attr_stats.apply(a)
        n = len(s)
        c_ss = s_std.T @ s_std / n + ridge * np.eye(8)
        c_aa = a_std.T @ a_std / n + ridge * np.eye(5)
        c_sa = s_std.T @ a_std / n
        lhs = np.block([[np.zeros((8, 8)), c_sa], [c_sa.T, np.zeros((5, 5))]])
        rhs = np.block([[c_ss, np.zeros((8, 5))], [np.zeros((5, 8)), c_aa]])
        w = np.sort(scipy.linalg.eigh(lhs, rhs, eigvals_only=True))[::-1]
        worst_gamma = max(worst_gamma, np.max(np.abs(model.correlations - w[: model.m])))

        # canonical-pair cross-correlation: scores are unit-variance under the
        # regularized metric, so their cross-covariance is the correlation matrix
        zs = s_std @ model.h_struct.T
        za = a_std @ model.h_attr.T
        cross = zs.T @ za / n
        worst_cross = max(
            worst_cross, np.max(np.abs(cross - np.diag(model.correlations)))
        )
    elapsed = time.monotonic() - start
    record(
        "CCA matches joint-covariance eigenproblem oracle",
        worst_gamma < 1e-8 and worst_cross < 1e-6 and elapsed < 5,
        f"max gamma dev {worst_gamma:.2e}, max cross dev {worst_cross:.2e}, {elapsed:.1f}s",
    )


def test_cca_analytic_cases():
    start = time.monotonic()
    rng = np.random.default_rng(0)

    s = rng.normal(size=(300, 1))
    a = 2.5 * s - 1.0
    dependent = fit_cca(s, a, ridge=1e-12).correlations[0]

    s = rng.normal(size=(5000, 4))
    a = rng.normal(size=(5000, 3))
    independent = fit_cca(s, a, ridge=1e-6).correlations.max()

    z = rng.normal(size=(150, 3))
    s = z @ rng.normal(size=(3, 5)) + 0.3 * rng.normal(size=(150, 5))
    a = z @ rng.normal(size=(3, 4)) + 0.3 * rng.normal(size=(150, 4))
    base = fit_cca(s, a, ridge=1e-4).correlations
    shifted = fit_cca(s * 37.0 - 11.0, a, ridge=1e-4).correlations
    affine_dev = np.max(np.abs(base - shifted))

    elapsed = time.monotonic() - start
    record(
        "CCA analytic cases (dependent, independent, affine)",
        abs(dependent - 1.0) < 1e-9
        and independent < 0.1
        and affine_dev < 1e-6
        and elapsed < 10,
        f"gamma1 {dependent:.12f}, max indep {independent:.3f}, "
        f"affine dev {affine_dev:.2e}, {elapsed:.1f}s",
    )


def test_wl_isomorphism_invariance():
    start = time.monotonic()
    rng = np.random.default_rng(1)
    checked = 0
    ok = True
    for _ in range(100):
        g = random_graph(rng, n_max=10)
        base = sorted(t.token for t in build_context(g, 2).tokens)
        for _ in range(10):
            h = permuted(g, rng.permutation(len(g.nodes)))
            ok = ok and sorted(t.token for t in build_context(h, 2).tokens) == base
            checked += 1
    elapsed = time.monotonic() - start
    record(
        "WL tokens invariant under node-id permutation",
        ok and elapsed < 5,
        f"{checked} permutations, {elapsed:.1f}s",
    )


def test_exact_ged_oracle_and_metric():
    start = time.monotonic()
    rng = np.random.default_rng(2)
    mismatches = 0
    for _ in range(200):
        g1 = random_graph(rng, "a", n_max=5, labels="abc")
        g2 = random_graph(rng, "b", n_max=5, labels="abc")
        d = ged(g1, g2)
        if d != brute_ged(g1, g2) or d != ged(g2, g1):
            mismatches += 1

    iso_ok = all(
        ged(g, permuted(g, rng.permutation(len(g.nodes)))) == 0.0
        for g in (random_graph(rng, n_max=6, labels="abc") for _ in range(20))
    )
    triangle_ok = True
    for _ in range(100):
        gs = [random_graph(rng, f"g{i}", n_max=4, labels="ab") for i in range(3)]
        if ged(gs[0], gs[2]) > ged(gs[0], gs[1]) + ged(gs[1], gs[2]):
            triangle_ok = False
    elapsed = time.monotonic() - start
    record(
        "exact edit distance matches bijection oracle and is a metric",
        mismatches == 0 and iso_ok and triangle_ok and elapsed < 60,
        f"200 oracle pairs, 100 triangle triples, {elapsed:.1f}s",
    )


def test_knn_and_clustering_oracles():
    start = time.monotonic()
    rng = np.random.default_rng(3)

    knn_ok = True
    for _ in range(50):
        mat = rng.normal(size=(40, 6))
        target = rng.normal(size=6)
        idx = EmbeddingIndex("structure", mat, [f"g{i:02d}" for i in range(40)])
        hits = knn_match(idx, target, 8).hits
        oracle = sorted(
            (float(np.sqrt(np.sum((row - target) ** 2))), f"g{i:02d}")
            for i, row in enumerate(mat)
        )[:8]
        knn_ok = knn_ok and hits == [(g, d) for d, g in oracle]

    kmeans_ok = True
    for seed in range(5):
        x = rng.normal(size=(80, 4))
        _, _, trace = kmeans(x, 5, seed=seed)
        kmeans_ok = kmeans_ok and all(
            b <= a + 1e-9 for a, b in zip(trace, trace[1:])
        )

    sigma = 0.5
    blob1 = rng.normal(0.0, sigma, size=(30, 3))
    blob2 = rng.normal(10 * sigma, sigma, size=(30, 3))
    labels = dbscan(np.vstack([blob1, blob2]), eps=3 * sigma, min_pts=4)
    dbscan_ok = (
        len(set(labels[:30])) == 1
        and len(set(labels[30:])) == 1
        and labels[0] != labels[30]
        and -1 not in labels
    )
    elapsed = time.monotonic() - start
    record(
        "k-NN full-sort oracle, k-means descent, DBSCAN blob recovery",
        knn_ok and kmeans_ok and dbscan_ok and elapsed < 10,
        f"{elapsed:.1f}s",
    )


def test_benchmark_balance_pattern():
    """Fused retrieval must sit between the single-view extremes on both metrics."""
    start = time.monotonic()
    k_values = [5, 10, 15]
    passes = {k: 0 for k in k_values}
    cells: dict = {
        k: {s: {"strSim": [], "attrSim": []} for s in ("Str", "Attr", "CCA")}
        for k in k_values
    }
    n_seeds = 10
    for seed in range(n_seeds):
        corpus = planted_corpus(per_family=30, noise=0.1, seed=seed)
        sg_model = pipeline.train_embedding(corpus, EmbedConfig(seed=seed))
        attrs = pipeline.attribute_vectors(corpus)
        report = run_benchmark(
            corpus,
            sg_model.graph_vectors,
            attrs,
            ["Str", "Attr", "CCA"],
            k_values,
            n_targets=10,
            seed=seed,
        )
        for k in k_values:
            for s in ("Str", "Attr", "CCA"):
                for key in ("strSim", "attrSim"):
                    cells[k][s][key].append(report.cell(k, s)[key])
            if (
                report.cell(k, "CCA")["strSim"] < report.cell(k, "Attr")["strSim"]
                and report.cell(k, "CCA")["attrSim"] < report.cell(k, "Str")["attrSim"]
            ):
                passes[k] += 1

    median_ok = all(
        np.median(cells[k]["CCA"]["strSim"]) < np.median(cells[k]["Attr"]["strSim"])
        and np.median(cells[k]["CCA"]["attrSim"]) < np.median(cells[k]["Str"]["attrSim"])
        for k in k_values
    )
    seats_ok = all(passes[k] >= 8 for k in k_values)
    elapsed = time.monotonic() - start
    record(
        "fused retrieval balances structure and attribute similarity",
        median_ok and seats_ok and elapsed < 600,
        f"per-k seed passes {[passes[k] for k in k_values]}/{n_seeds}, {elapsed:.0f}s",
    )


def test_embedding_discrimination():
    start = time.monotonic()
    accuracies = []
    last_model = last_corpus = None
    for seed in range(5):
        corpus = planted_corpus(per_family=30, noise=0.1, seed=seed)
        sg_model = pipeline.train_embedding(corpus, EmbedConfig(seed=seed))
        fam = corpus.meta["familyLabels"]
        index = pipeline.structure_index(sg_model)
        correct = sum(
            fam[knn_match(index, gid, 1).hits[0][0]] == fam[gid]
            for gid in corpus.graph_ids
        )
        accuracies.append(correct / len(corpus))
        last_model, last_corpus = sg_model, corpus
    median_acc = float(np.median(accuracies))

    original = last_corpus.graphs[0]
    twin = Graph(
        id="twin",
        nodes=[Node(n.id, n.label, dict(n.attrs)) for n in original.nodes],
        edges=list(original.edges),
    )
    twin_vec = embed_new_graph(twin, last_model).values
    twin_dist = float(np.linalg.norm(last_model.graph_vectors[0] - twin_vec))
    pair_dists = [
        float(np.linalg.norm(a - b))
        for a, b in itertools.combinations(last_model.graph_vectors, 2)
    ]
    median_pair = float(np.median(pair_dists))
    elapsed = time.monotonic() - start
    record(
        "structure embedding separates planted families",
        median_acc >= 0.9 and twin_dist < median_pair and elapsed < 180,
        f"median 1-NN accuracy {median_acc:.3f}, twin dist {twin_dist:.2f} "
        f"vs median pair {median_pair:.2f}, {elapsed:.0f}s",
    )


def test_pipeline_determinism(tmp_path):
    runner = CliRunner()
    artifacts = []
    for run in ("one", "two"):
        d = tmp_path / run
        d.mkdir()
        corpus, model, cca = d / "c.jsonl", d / "m.npz", d / "f.npz"
        proj, hits, bench_dir = d / "proj.tsv", d / "hits.tsv", d / "bench"
        steps = [
            ["gen", "--out", str(corpus), "--per-family", "5", "--seed", "4"],
            ["ingest", str(corpus)],
            ["embed", str(corpus), "--out", str(model), "--dim", "16",
             "--epochs", "10", "--seed", "4"],
            ["fuse", str(corpus), str(model), "--out", str(cca),
             "--ridge", "0.5", "--m", "1"],
            ["project", str(corpus), str(model), "--cca", str(cca),
             "--perplexity", "4", "--iterations", "100", "--seed", "4",
             "--out", str(proj)],
            ["match", str(corpus), str(model), "--cca", str(cca),
             "--target", "f0g0", "--k", "5", "--out", str(hits)],
            ["bench", str(corpus), str(model), "--strategies", "Str,Attr,CCA",
             "--k", "2,3", "--targets", "3", "--seed", "4",
             "--out-dir", str(bench_dir)],
        ]
        for args in steps:
            result = runner.invoke(cli_main, args)
            assert result.exit_code == 0, f"{args[0]}: {result.output}"
        artifacts.append(
            {
                "corpus": corpus.read_bytes(),
                "projection": proj.read_bytes(),
                "hits": hits.read_bytes(),
                "benchJson": (bench_dir / "report.json").read_bytes(),
                "benchTsv": (bench_dir / "report.tsv").read_bytes(),
            }
        )
    same = {name: artifacts[0][name] == artifacts[1][name] for name in artifacts[0]}
    record(
        "seeded CLI pipeline is byte-reproducible",
        all(same.values()),
        "identical: " + ", ".join(sorted(same)) if all(same.values())
        else "differs: " + ", ".join(n for n, ok in same.items() if not ok),
    )

    # the JSON report must parse and carry the strategies it claims
    report = json.loads(artifacts[0]["benchJson"])
    assert report["strategies"] == ["Str", "Attr", "CCA"]
