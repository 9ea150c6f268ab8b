"""Quantitative instruments: core concentration, structure verification,
ranking quality (prioritization and balance), selection quality
(preservation ratio, intra-community edge fraction).

Conventions used throughout:
  * top-set sizes are round-half-up of c*n;
  * balancedness of an empty core selection is 1 (nothing is unbalanced yet);
  * concentration is undefined for sets without outgoing edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .graph import DirectedGraph, edge_count_between, induced_subgraph, vertex_mask
from .synth import GroundTruth


def top_count(c, n) -> int:
    """Size of the top c-fraction selection: round-half-up of c*n."""
    return int(np.floor(c * n + 0.5))


def core_concentration(G: DirectedGraph, S) -> float:
    """(in-edges to S from outside minus out-edges leaving S) / out-edges of S.

    High for dense sets that attract edges; always in
    [-1, E(S_complement, V) / E(S, V)].
    """
    mask = vertex_mask(G.n, S)
    e_sv = edge_count_between(G, mask, np.ones(G.n, dtype=bool))
    if e_sv == 0:
        raise ValueError("concentration undefined: set has no outgoing edges")
    e_in = edge_count_between(G, ~mask, mask)
    e_out = edge_count_between(G, mask, ~mask)
    return (e_in - e_out) / e_sv


@dataclass
class McpcReport:
    """Structure verification summary for a labeled core/periphery graph.

    alpha is the worst core-over-periphery concentration margin across all
    ordered (core community, periphery community) pairs; alpha_within
    restricts the comparison to each community's own periphery. beta is
    the largest core-to-core edge share relative to the community-level
    share, 0 when there is a single community.
    """

    community_structure_ok: dict
    alpha: float
    alpha_within: float
    beta: float
    block_cc: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "community_structure_ok": {str(k): v for k, v in self.community_structure_ok.items()},
            "alpha": self.alpha,
            "alpha_within": self.alpha_within,
            "beta": self.beta,
            "block_cc": {f"{ell},{int(core)}": v for (ell, core), v in self.block_cc.items()},
        }


def verify_mcpc(G: DirectedGraph, gt: GroundTruth) -> McpcReport:
    """Check the three structure conditions against ground-truth blocks.

    Every block must have outgoing edges, otherwise its concentration is
    undefined and a ValueError is raised.
    """
    if gt.is_core is None:
        raise ValueError("structure verification needs core/periphery labels")
    labels = sorted(np.unique(gt.community).tolist())
    full = np.ones(G.n, dtype=bool)

    block_cc = {}
    for ell in labels:
        for core in (True, False):
            mask = gt.block_mask(ell, core)
            if not mask.any():
                continue
            if edge_count_between(G, mask, full) == 0:
                raise ValueError(f"block ({ell}, core={core}) has no outgoing edges")
            block_cc[(ell, core)] = core_concentration(G, mask)

    community_ok = {}
    comm_out = {}
    comm_cross = {}
    for ell in labels:
        m = gt.community_mask(ell)
        intra = edge_count_between(G, m, m)
        inter = edge_count_between(G, m, ~m)
        community_ok[ell] = bool(intra >= inter)
        comm_out[ell] = intra + inter
        for ell2 in labels:
            if ell2 != ell:
                comm_cross[(ell, ell2)] = edge_count_between(G, m, gt.community_mask(ell2))

    core_labels = [ell for ell in labels if (ell, True) in block_cc]
    peri_labels = [ell for ell in labels if (ell, False) in block_cc]
    if core_labels and peri_labels:
        alpha = min(
            block_cc[(a, True)] - block_cc[(b, False)] for a in core_labels for b in peri_labels
        )
    else:
        alpha = float("nan")
    within = [
        block_cc[(ell, True)] - block_cc[(ell, False)]
        for ell in core_labels
        if ell in peri_labels
    ]
    alpha_within = min(within) if within else float("nan")

    beta = 0.0
    for a in core_labels:
        core_a = gt.block_mask(a, True)
        core_out = edge_count_between(G, core_a, full)
        for b in core_labels:
            if a == b:
                continue
            cross_comm = comm_cross[(a, b)]
            if cross_comm == 0 or core_out == 0:
                continue
            core_share = edge_count_between(G, core_a, gt.block_mask(b, True)) / core_out
            comm_share = cross_comm / comm_out[a]
            beta = max(beta, core_share / comm_share)

    return McpcReport(community_ok, alpha, alpha_within, beta, block_cc)


def auroc_core_prioritization(scores, gt: GroundTruth) -> float:
    """Probability that a random core vertex outscores a random periphery
    vertex, ties counted half (midrank AUROC)."""
    if gt.is_core is None:
        raise ValueError("AUROC needs core/periphery labels")
    s = np.asarray(scores, dtype=float)
    pos = gt.is_core
    n_pos = int(pos.sum())
    n_neg = s.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUROC needs both core and periphery vertices")
    ranks = rankdata(s)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


def _core_counts_in_prefix(ranking, gt: GroundTruth):
    """Per-prefix cumulative core-membership counts, one column per core block."""
    order = np.asarray(ranking, dtype=np.int64)
    n = order.size
    core_labels = gt.core_labels()
    sizes = np.array([gt.block_mask(ell, True).sum() for ell in core_labels], dtype=float)
    hits = np.zeros((n, len(core_labels)))
    for j, ell in enumerate(core_labels):
        hits[:, j] = gt.block_mask(ell, True)[order]
    return np.cumsum(hits, axis=0), sizes, core_labels


def balancedness_at(ranking, gt: GroundTruth, c) -> float:
    """Min-over-max of per-core selected fractions among the top c*n vertices.

    1.0 by convention when no core vertex has been selected yet.
    """
    n = len(ranking)
    m = top_count(c, n)
    if m < 1:
        raise ValueError(f"top set for c={c} is empty")
    cum, sizes, core_labels = _core_counts_in_prefix(ranking, gt)
    if not core_labels:
        raise ValueError("no community has core vertices")
    frac = cum[m - 1] / sizes
    mx = frac.max()
    return 1.0 if mx == 0 else float(frac.min() / mx)


def total_balancedness(ranking, gt: GroundTruth) -> float:
    """Mean balancedness over all prefixes c = 1/n, 2/n, ..., 1."""
    cum, sizes, core_labels = _core_counts_in_prefix(ranking, gt)
    if not core_labels:
        raise ValueError("no community has core vertices")
    frac = cum / sizes
    mn = frac.min(axis=1)
    mx = frac.max(axis=1)
    vals = np.where(mx == 0, 1.0, np.divide(mn, mx, out=np.ones_like(mn), where=mx > 0))
    return float(vals.mean())


def preservation_ratio(S, gt: GroundTruth) -> float:
    """Averaged, capped per-community selection fractions of S.

    Each community contributes min(selected fraction of the community,
    |S|/|V|); the sum is rescaled so a proportionally representative S
    scores 1. Values lie in [1/z, 1].
    """
    mask = vertex_mask(gt.n, S)
    size = int(mask.sum())
    if size == 0:
        raise ValueError("preservation ratio undefined for an empty set")
    n = gt.n
    z = gt.num_communities
    share = size / n
    total = 0.0
    for ell in gt.community_labels():
        comm = gt.community_mask(ell)
        total += min(mask[comm].sum() / comm.sum(), share)
    return float(n / (z * size) * total)


def icef(G: DirectedGraph, community_labels) -> float:
    """Fraction of edges whose endpoints share a community label."""
    if G.num_edges == 0:
        raise ValueError("intra-community edge fraction undefined without edges")
    labels = np.asarray(community_labels)
    src, dst = G.edge_sources(), G.out_indices
    return float(np.count_nonzero(labels[src] == labels[dst]) / G.num_edges)


def icef_curve(G: DirectedGraph, ranking, community_labels, grid):
    """ICEF of the subgraph induced by each top c*n prefix.

    Returns a list of (c, value) with value None where the prefix induces
    no edges.
    """
    order = np.asarray(ranking, dtype=np.int64)
    labels = np.asarray(community_labels)
    src, dst = G.edge_sources(), G.out_indices
    same = labels[src] == labels[dst]
    out = []
    for c in grid:
        m = top_count(c, G.n)
        sel = np.zeros(G.n, dtype=bool)
        sel[order[:m]] = True
        inside = sel[src] & sel[dst]
        total = int(inside.sum())
        out.append((c, None if total == 0 else float(np.count_nonzero(same & inside) / total)))
    return out
