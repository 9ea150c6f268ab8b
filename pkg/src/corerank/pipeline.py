"""Config-driven experiment runner: gamma sweeps over the synthetic
generators and the rank / select / cluster reports.

A sweep is a grid of independent cells (source instance x seed x method).
Cells are pure functions of their coordinates, so they may run in a
thread pool; rows are gathered and sorted before writing, which keeps the
output byte-identical for any worker count. A failing cell is logged and
skipped rather than aborting the sweep.
"""

from __future__ import annotations

import csv
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fileio
from .centrality import (
    degree_centrality,
    katz,
    onion_decomposition,
    pagerank,
    rank_descending,
)
from .cluster import louvain, nmi, purity
from .embed import knn_graph, log_normalize, pca_project
from .graph import induced_subgraph, symmetrize
from .metrics import (
    auroc_core_prioritization,
    core_concentration,
    icef,
    icef_curve,
    preservation_ratio,
    top_count,
    total_balancedness,
    verify_mcpc,
)
from .relative import default_t, meta_rank
from .synth import (
    gmm_two_community_spec,
    sample_block_model,
    sample_concentric_gmm,
    table1_spec,
)

# iteration cap handed to pagerank/katz inside sweeps; the op-level default
# (1000) is too small for damping 0.99 at tol 1e-10
SWEEP_MAX_ITER = 100_000

METRIC_NAMES = (
    "auroc",
    "balancedness",
    "total_balancedness",
    "pr",
    "icef",
    "purity",
    "nmi",
    "cc_alpha",
    "cc_beta",
    "runtime_ms",
)


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class MethodSpec:
    """A ranking method plus its parameters, e.g. pagerank with a damping."""

    name: str
    params: dict = field(default_factory=dict)

    KNOWN = ("degree", "pagerank", "katz", "onion", "nrank", "n2rank", "rnrank")

    @classmethod
    def parse(cls, item):
        if isinstance(item, str):
            item = {"name": item}
        if "name" not in item:
            raise ConfigError(f"method entry {item!r} lacks a name")
        name = item["name"]
        if name not in cls.KNOWN:
            raise ConfigError(f"unknown method {name!r}; known: {cls.KNOWN}")
        params = {k: v for k, v in item.items() if k != "name"}
        return cls(name, params)

    @property
    def label(self):
        if self.name == "pagerank":
            return f"pagerank_{self.params.get('damping', 0.85):g}"
        if self.name in ("nrank", "n2rank", "rnrank") and "t" in self.params:
            return f"{self.name}_t{self.params['t']}"
        return self.name

    def score(self, G, t_default):
        """Compute scores and the ranking for this method."""
        p = self.params
        if self.name == "degree":
            scores = degree_centrality(G)
        elif self.name == "pagerank":
            scores = pagerank(
                G,
                damping=p.get("damping", 0.85),
                tol=p.get("tol", 1e-10),
                max_iter=p.get("max_iter", SWEEP_MAX_ITER),
            )
        elif self.name == "katz":
            scores = katz(G, alpha=p.get("alpha"), max_iter=p.get("max_iter", SWEEP_MAX_ITER))
        elif self.name == "onion":
            scores = onion_decomposition(G)
            # peel layers are coarse; order ties by degree, then index
            return scores, rank_descending(scores, tie_breaker=degree_centrality(G))
        else:
            t = int(p.get("t", t_default))
            hops = {"nrank": (1, 0), "n2rank": (2, 0), "rnrank": (1, 1)}[self.name]
            scores = meta_rank(G, t, hops[0], hops[1])
        return scores, rank_descending(scores)


def default_methods():
    """The standard comparison set: the traditional baselines plus the
    relative-centrality family."""
    return [
        MethodSpec("degree"),
        MethodSpec("pagerank", {"damping": 0.5}),
        MethodSpec("pagerank", {"damping": 0.85}),
        MethodSpec("pagerank", {"damping": 0.99}),
        MethodSpec("katz"),
        MethodSpec("onion"),
        MethodSpec("nrank"),
        MethodSpec("n2rank"),
        MethodSpec("rnrank"),
    ]


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment: a source, the ranking
    methods, the selection grid, seeds, and the output directory."""

    source: dict
    methods: list
    c_grid: list = field(default_factory=lambda: [round(i / 100, 2) for i in range(1, 101)])
    c: float = 0.2
    seeds: list = field(default_factory=lambda: list(range(10)))
    out_dir: str = "results"
    threads: int = 1
    louvain_seed: int = 0
    resolution: float = 1.0

    def __post_init__(self):
        if not self.methods:
            raise ConfigError("config needs at least one method")
        self.methods = [m if isinstance(m, MethodSpec) else MethodSpec.parse(m) for m in self.methods]
        for c in list(self.c_grid) + [self.c]:
            if not 0 < c <= 1:
                raise ConfigError(f"selection fraction c={c} outside (0, 1]")
        if not isinstance(self.source, dict) or "kind" not in self.source:
            raise ConfigError("source must be a mapping with a 'kind'")

    @classmethod
    def from_dict(cls, data):
        known = {
            "source", "methods", "c_grid", "c", "seeds", "out_dir",
            "threads", "louvain_seed", "resolution",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "source" not in data or "methods" not in data:
            raise ConfigError("config needs 'source' and 'methods'")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        return cls.from_dict(fileio.read_json(path))


def _materialize(source, gamma, seed):
    """Instantiate one source cell. Returns (graph, ground truth, t_default)."""
    kind = source["kind"]
    if kind == "block-model":
        spec = table1_spec(
            gamma,
            n=int(source.get("n", 4000)),
            k=int(source.get("k", 20)),
            seed=seed,
            row_normalize=bool(source.get("row_normalize", True)),
        )
        G, gt = sample_block_model(spec)
        return G, gt, default_t(G.n, knn_like=False)
    if kind == "gmm":
        spec = gmm_two_community_spec(
            gamma,
            d=int(source.get("d", 20)),
            block_count=int(source.get("block_count", 2000)),
            seed=seed,
        )
        points, gt = sample_concentric_gmm(spec)
        G = knn_graph(points, int(source.get("knn_k", 20)))
        return G, gt, default_t(G.n, knn_like=True)
    raise ConfigError(f"source kind {kind!r} cannot be swept over gamma")


def _sweep_cell(config, gamma, seed):
    """Result rows for one (gamma, seed) pair.

    Returns (rows, runtime_rows); wall-clock measurements go to a separate
    file so the main results CSV stays byte-identical across reruns.
    """
    rows = []
    runtimes = []
    source_id = f"{gamma:g}"
    G, gt, t_default = _materialize(config.source, gamma, seed)
    report = verify_mcpc(G, gt)
    rows.append((source_id, "graph", seed, "cc_alpha", None, report.alpha))
    rows.append((source_id, "graph", seed, "cc_beta", None, report.beta))
    for method in config.methods:
        start = time.perf_counter()
        scores, order = method.score(G, t_default)
        elapsed_ms = (time.perf_counter() - start) * 1e3
        runtimes.append((source_id, method.label, seed, "runtime_ms", None, elapsed_ms))
        rows.append(
            (source_id, method.label, seed, "auroc", None, auroc_core_prioritization(scores, gt))
        )
        rows.append(
            (source_id, method.label, seed, "total_balancedness", None, total_balancedness(order, gt))
        )
        for c, value in icef_curve(G, order, gt.community, config.c_grid):
            rows.append((source_id, method.label, seed, "icef", c, value))
    return rows, runtimes


def run_gamma_sweep(config: ExperimentConfig, gammas, csv_name="sweep.csv"):
    """Generate, rank, and score one graph per (gamma, seed); write one CSV.

    Returns (csv_path, rows, error_count). A failed cell is reported on
    stderr and excluded; the sweep continues.
    """
    out_dir = fileio.ensure_dir(config.out_dir)
    cells = [(g, s) for g in gammas for s in config.seeds]
    rows = []
    runtimes = []
    errors = 0

    def run(cell):
        return _sweep_cell(config, cell[0], cell[1])

    if config.threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(lambda cell: _try_cell(run, cell), cells))
    else:
        results = [_try_cell(run, cell) for cell in cells]
    for cell, result in zip(cells, results):
        if result is None:
            errors += 1
        else:
            rows.extend(result[0])
            runtimes.extend(result[1])
    rows.sort(key=_row_key)
    runtimes.sort(key=_row_key)
    path = out_dir / csv_name
    fileio.write_results(path, rows)
    fileio.write_results(out_dir / "runtimes.csv", runtimes)
    return path, rows, errors


def _try_cell(fn, cell):
    try:
        return fn(cell)
    except Exception as exc:  # noqa: BLE001 - cell isolation is the point
        print(f"cell {cell} failed: {exc}", file=sys.stderr)
        return None


def _row_key(row):
    source, method, seed, metric, c, _ = row
    return (str(source), str(method), seed if seed is not None else -1, metric, c if c is not None else -1.0)


def ingest_labeled_vectors(path, label_path, log_norm=False, scale=10000.0,
                           pca_dim=None, seed=0, has_header=False):
    """Read a labeled vector CSV pair and apply the requested preprocessing.

    Returns (points, GroundTruth); the labels file must cover every row.
    """
    points = fileio.read_points(path, has_header=has_header)
    if points.size == 0:
        raise ConfigError(f"{path}: no data rows")
    gt = fileio.read_labels(label_path, n=points.shape[0])
    if log_norm:
        points = log_normalize(points, scale=scale)
    if pca_dim is not None:
        points = pca_project(points, int(pca_dim), seed=seed)
    return points, gt


def _select_source(config, seed):
    """Materialize the single source of a select/cluster run."""
    src = config.source
    kind = src["kind"]
    if kind in ("block-model", "gmm"):
        gamma = float(src.get("gamma", 0.0 if kind == "block-model" else 1.0))
        return _materialize(src, gamma, seed)
    if kind == "edge-list":
        G = fileio.read_edge_list(src["edges"])
        gt = fileio.read_labels(src["labels"], n=G.n)
        return G, gt, default_t(G.n, knn_like=True)
    if kind == "vectors":
        points, gt = ingest_labeled_vectors(
            src["vectors"],
            src["labels"],
            log_norm=bool(src.get("log_normalize", False)),
            scale=float(src.get("scale", 10000.0)),
            pca_dim=src.get("pca"),
            seed=seed,
            has_header=bool(src.get("header", False)),
        )
        G = knn_graph(points, int(src.get("knn_k", 20)))
        return G, gt, default_t(G.n, knn_like=True)
    raise ConfigError(f"unknown source kind {kind!r}")


def run_select_and_cluster(config: ExperimentConfig, csv_name="select_cluster.csv"):
    """Rank, take the top c fraction, and score the selection per method.

    The report carries one `original` row (whole graph: preservation ratio
    1 by construction) and one row per method with the selection's
    preservation ratio, induced-subgraph ICEF, and Louvain purity/NMI on
    the induced subgraph. A companion CSV compares each community's
    concentration with that of its selected part.
    """
    out_dir = fileio.ensure_dir(config.out_dir)
    seed = config.seeds[0] if config.seeds else 0
    G, gt, t_default = _select_source(config, seed)
    labels = gt.community
    sym = symmetrize(G)
    full_pred = louvain(sym, seed=config.louvain_seed, resolution=config.resolution)
    rows = [
        {
            "method": "original",
            "pr": 1.0,
            "icef": icef(G, labels),
            "purity": purity(full_pred, labels),
            "nmi": nmi(full_pred, labels),
        }
    ]
    cc_rows = []
    m = top_count(config.c, G.n)
    errors = 0
    for method in config.methods:
        try:
            _, order = method.score(G, t_default)
            selected = np.sort(order[:m])
            sub, old_ids = induced_subgraph(G, selected)
            sub_labels = labels[old_ids]
            sub_pred = louvain(
                symmetrize(sub), seed=config.louvain_seed, resolution=config.resolution
            )
            rows.append(
                {
                    "method": method.label,
                    "pr": preservation_ratio(selected, gt),
                    "icef": icef(sub, sub_labels),
                    "purity": purity(sub_pred, sub_labels),
                    "nmi": nmi(sub_pred, sub_labels),
                }
            )
            sel_mask = np.zeros(G.n, dtype=bool)
            sel_mask[selected] = True
            for ell in gt.community_labels():
                comm = gt.community_mask(ell)
                part = comm & sel_mask
                cc_whole = core_concentration(G, comm)
                cc_sel = core_concentration(G, part) if part.any() else None
                cc_rows.append((method.label, ell, cc_whole, cc_sel))
        except Exception as exc:  # noqa: BLE001 - per-method isolation
            errors += 1
            print(f"method {method.label} failed: {exc}", file=sys.stderr)
    path = out_dir / csv_name
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "pr", "icef", "purity", "nmi"])
        for r in rows:
            writer.writerow(
                [r["method"]] + [fileio.fmt_value(r[k]) for k in ("pr", "icef", "purity", "nmi")]
            )
    cc_path = out_dir / "community_cc.csv"
    with open(cc_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "community", "cc_whole", "cc_selected"])
        for r in cc_rows:
            writer.writerow([r[0], r[1], fileio.fmt_value(r[2]), fileio.fmt_value(r[3])])
    return path, rows, errors
