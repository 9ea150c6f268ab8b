"""Command-line interface.

Subcommands cover the full pipeline: synthetic generation
(`generate-block`, `generate-gmm`), embedding (`knn`), scoring (`rank`),
evaluation (`metrics`), clustering (`cluster`), and the config-driven
experiment runners (`sweep`, `select-cluster`).

Exit codes: 0 on success, 1 if any sweep cell or method was aborted,
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import fileio
from .centrality import rank_descending
from .cluster import louvain
from .embed import knn_graph
from .graph import symmetrize
from .metrics import auroc_core_prioritization, icef_curve, total_balancedness, verify_mcpc
from .pipeline import (
    ConfigError,
    ExperimentConfig,
    MethodSpec,
    default_methods,
    ingest_labeled_vectors,
    run_gamma_sweep,
    run_select_and_cluster,
)
from .relative import default_t
from .synth import (
    ModelError,
    gmm_two_community_spec,
    sample_block_model,
    sample_concentric_gmm,
    table1_spec,
)


def _add_common(sub):
    sub.add_argument("--seed", type=int, default=0, help="master random seed")
    sub.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    sub.add_argument("--out-dir", default="results", help="output directory")
    sub.add_argument("--config", default=None, help="JSON experiment config")


def build_parser():
    parser = argparse.ArgumentParser(prog="corerank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate-block", help="sample a core/periphery block-model graph")
    _add_common(gen)
    gen.add_argument("--gamma", type=float, default=0.0)
    gen.add_argument("--n", type=int, default=4000)
    gen.add_argument("--k", type=int, default=20)
    gen.add_argument("--no-row-normalize", action="store_true",
                     help="keep the literal block matrix rows even if they do not sum to 1")
    gen.add_argument("--spec", default=None, help="full BlockModelSpec JSON (overrides flags)")

    gmm = sub.add_parser("generate-gmm", help="sample a concentric Gaussian mixture")
    _add_common(gmm)
    gmm.add_argument("--gamma", type=float, default=1.0)
    gmm.add_argument("--d", type=int, default=20)
    gmm.add_argument("--block-count", type=int, default=2000)
    gmm.add_argument("--header", action="store_true", help="write a header row on points.csv")
    gmm.add_argument("--spec", default=None, help="full GmmSpec JSON (overrides flags)")

    knn = sub.add_parser("knn", help="build the exact k-nearest-neighbor graph of a point CSV")
    _add_common(knn)
    knn.add_argument("--input", required=True)
    knn.add_argument("--k", type=int, default=20)
    knn.add_argument("--output-edges", required=True)
    knn.add_argument("--header", action="store_true", help="input CSV has a header row")

    rank = sub.add_parser("rank", help="score and rank the vertices of a graph")
    _add_common(rank)
    rank.add_argument("--edges", required=True)
    rank.add_argument("--method", required=True,
                      choices=["degree", "pagerank", "katz", "onion", "nrank", "n2rank", "rnrank"])
    rank.add_argument("--damping", type=float, default=None)
    rank.add_argument("--alpha", type=float, default=None)
    rank.add_argument("--t", type=int, default=None)
    rank.add_argument("--output-scores", required=True)

    met = sub.add_parser("metrics", help="structure report and selection curves for a ranking")
    _add_common(met)
    met.add_argument("--edges", required=True)
    met.add_argument("--labels", required=True)
    met.add_argument("--scores", default=None, help="scores CSV from `rank`")

    clu = sub.add_parser("cluster", help="Louvain communities of the symmetrized graph")
    _add_common(clu)
    clu.add_argument("--edges", required=True)
    clu.add_argument("--resolution", type=float, default=1.0)
    clu.add_argument("--output", required=True)

    swp = sub.add_parser("sweep", help="gamma sweep driven by a JSON config")
    _add_common(swp)

    sel = sub.add_parser("select-cluster", help="rank, select the top fraction, cluster, report")
    _add_common(sel)

    return parser


def _cmd_generate_block(args):
    if args.spec:
        spec = fileio.block_spec_from_dict(fileio.read_json(args.spec))
    else:
        spec = table1_spec(args.gamma, n=args.n, k=args.k, seed=args.seed,
                           row_normalize=not args.no_row_normalize)
    G, gt = sample_block_model(spec)
    out = fileio.ensure_dir(args.out_dir)
    fileio.write_edge_list(out / "edges.tsv", G)
    fileio.write_labels(out / "labels.csv", gt)
    fileio.write_json(out / "block_spec.json", fileio.block_spec_to_dict(spec))
    print(f"wrote {G.n} vertices, {G.num_edges} edges to {out}")
    return 0


def _cmd_generate_gmm(args):
    if args.spec:
        spec = fileio.gmm_spec_from_dict(fileio.read_json(args.spec))
    else:
        spec = gmm_two_community_spec(args.gamma, d=args.d, block_count=args.block_count,
                                      seed=args.seed)
    points, gt = sample_concentric_gmm(spec)
    out = fileio.ensure_dir(args.out_dir)
    fileio.write_points(out / "points.csv", points, header=args.header)
    fileio.write_labels(out / "labels.csv", gt)
    fileio.write_json(out / "gmm_spec.json", fileio.gmm_spec_to_dict(spec))
    print(f"wrote {points.shape[0]} points of dimension {points.shape[1]} to {out}")
    return 0


def _cmd_knn(args):
    points = fileio.read_points(args.input, has_header=args.header)
    G = knn_graph(points, args.k)
    fileio.write_edge_list(args.output_edges, G)
    print(f"wrote {G.num_edges} edges to {args.output_edges}")
    return 0


def _cmd_rank(args):
    G = fileio.read_edge_list(args.edges)
    params = {}
    if args.damping is not None:
        params["damping"] = args.damping
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.t is not None:
        params["t"] = args.t
    method = MethodSpec(args.method, params)
    scores, order = method.score(G, default_t(G.n))
    fileio.write_scores(args.output_scores, scores, order)
    print(f"wrote scores for {G.n} vertices to {args.output_scores}")
    return 0


def _cmd_metrics(args):
    G = fileio.read_edge_list(args.edges)
    gt = fileio.read_labels(args.labels, n=G.n)
    out = fileio.ensure_dir(args.out_dir)
    rows = []
    if gt.is_core is not None:
        report = verify_mcpc(G, gt)
        fileio.write_json(out / "mcpc.json", report.to_dict())
        rows.append(("cc_alpha", None, report.alpha, "graph"))
        rows.append(("cc_beta", None, report.beta, "graph"))
    if args.scores:
        scores = fileio.read_scores(args.scores)
        order = rank_descending(scores)
        if gt.is_core is not None:
            rows.append(("auroc", None, auroc_core_prioritization(scores, gt), "scores"))
            rows.append(("total_balancedness", None, total_balancedness(order, gt), "scores"))
        grid = [round(i / 100, 2) for i in range(1, 101)]
        for c, value in icef_curve(G, order, gt.community, grid):
            rows.append(("icef", c, value, "scores"))
    with open(out / "metrics.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "c", "value", "method"])
        for metric, c, value, method in rows:
            writer.writerow([metric, fileio.fmt_value(c), fileio.fmt_value(value), method])
    print(f"wrote {out / 'metrics.csv'}")
    return 0


def _cmd_cluster(args):
    G = fileio.read_edge_list(args.edges)
    labels = louvain(symmetrize(G), seed=args.seed, resolution=args.resolution)
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vertex", "community"])
        for v, c in enumerate(labels.tolist()):
            writer.writerow([v, c])
    print(f"wrote {int(labels.max()) + 1} communities to {args.output}")
    return 0


def _load_config(args, need_gammas=False):
    if not args.config:
        raise ConfigError("this subcommand needs --config")
    data = fileio.read_json(args.config)
    gammas = data.pop("gammas", None)
    if need_gammas and gammas is None:
        raise ConfigError("sweep config needs a 'gammas' list")
    if "methods" not in data:
        data["methods"] = [
            {"name": m.name, **m.params} for m in default_methods()
        ]
    config = ExperimentConfig.from_dict(data)
    if args.out_dir != "results":
        config.out_dir = args.out_dir
    if args.threads != 1:
        config.threads = args.threads
    return config, gammas


def _cmd_sweep(args):
    config, gammas = _load_config(args, need_gammas=True)
    path, rows, errors = run_gamma_sweep(config, gammas)
    print(f"wrote {len(rows)} rows to {path}" + (f" ({errors} cells aborted)" if errors else ""))
    return 1 if errors else 0


def _cmd_select_cluster(args):
    config, _ = _load_config(args)
    path, rows, errors = run_select_and_cluster(config)
    print(f"wrote {len(rows)} method rows to {path}" + (f" ({errors} aborted)" if errors else ""))
    return 1 if errors else 0


_COMMANDS = {
    "generate-block": _cmd_generate_block,
    "generate-gmm": _cmd_generate_gmm,
    "knn": _cmd_knn,
    "rank": _cmd_rank,
    "metrics": _cmd_metrics,
    "cluster": _cmd_cluster,
    "sweep": _cmd_sweep,
    "select-cluster": _cmd_select_cluster,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ModelError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
