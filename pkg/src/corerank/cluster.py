"""Downstream clustering (Louvain) and agreement scores (purity, NMI).

Louvain is the standard two-phase procedure: greedy local moves until
modularity stops improving, then aggregation of communities into
super-nodes, repeated until a level yields no gain. Node visit order is
shuffled by the seed, and everything else is deterministic, so a fixed
seed reproduces the partition exactly.
"""

from __future__ import annotations

import numpy as np

from .graph import DirectedGraph


def _local_move(indptr, indices, weights, self_w, degrees, total_w, rng, resolution):
    """Greedy modularity moves on one aggregation level.

    Works in stacked-arc space: `weights` hold both directions of each
    undirected edge, `self_w` the full self-arc weight, and `degrees` the
    row sums including self-arcs. Returns (node-to-community array,
    whether anything moved).
    """
    n = len(self_w)
    node2com = np.arange(n)
    com_tot = degrees.copy()
    moved_any = False
    improved = True
    while improved:
        improved = False
        for u in rng.permutation(n):
            cu = node2com[u]
            # accumulate arc weight from u toward each neighboring community
            link = {}
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if v == u:
                    continue
                cv = node2com[v]
                link[cv] = link.get(cv, 0.0) + weights[e]
            com_tot[cu] -= degrees[u]
            best_com = cu
            best_gain = link.get(cu, 0.0) - resolution * degrees[u] * com_tot[cu] / total_w
            for cv, w in link.items():
                if cv == cu:
                    continue
                gain = w - resolution * degrees[u] * com_tot[cv] / total_w
                if gain > best_gain + 1e-12:
                    best_gain = gain
                    best_com = cv
            node2com[u] = best_com
            com_tot[best_com] += degrees[u]
            if best_com != cu:
                improved = True
                moved_any = True
    return node2com, moved_any


def _relabel(assignment):
    """Map community ids to 0..K-1 in order of first appearance."""
    seen = {}
    out = np.empty(len(assignment), dtype=np.int64)
    for i, c in enumerate(assignment):
        if c not in seen:
            seen[c] = len(seen)
        out[i] = seen[c]
    return out, len(seen)


def _aggregate(indptr, indices, weights, self_w, node2com, n_com):
    """Collapse communities into super-nodes, summing arc weights."""
    agg = [{} for _ in range(n_com)]
    new_self = np.zeros(n_com)
    for u in range(len(self_w)):
        cu = node2com[u]
        new_self[cu] += self_w[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if v == u:
                continue
            cv = node2com[v]
            if cv == cu:
                new_self[cu] += weights[e]
            else:
                agg[cu][cv] = agg[cu].get(cv, 0.0) + weights[e]
    new_indptr = [0]
    new_indices = []
    new_weights = []
    for cu in range(n_com):
        for cv in sorted(agg[cu]):
            new_indices.append(cv)
            new_weights.append(agg[cu][cv])
        new_indptr.append(len(new_indices))
    return (
        np.array(new_indptr, dtype=np.int64),
        np.array(new_indices, dtype=np.int64),
        np.array(new_weights),
        new_self,
    )


def _modularity(indptr, indices, weights, self_w, node2com, total_w, resolution):
    n_com = int(node2com.max()) + 1
    sigma_in = np.zeros(n_com)
    sigma_tot = np.zeros(n_com)
    for u in range(len(self_w)):
        cu = node2com[u]
        sigma_in[cu] += self_w[u]
        sigma_tot[cu] += self_w[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if v == u:
                continue
            sigma_tot[cu] += weights[e]
            if node2com[v] == cu:
                sigma_in[cu] += weights[e]
    return float((sigma_in / total_w - resolution * (sigma_tot / total_w) ** 2).sum())


def louvain(G: DirectedGraph, seed=0, resolution=1.0) -> np.ndarray:
    """Louvain community detection on a symmetrized graph.

    Expects both directions of every edge to be present (see
    :func:`corerank.graph.symmetrize`). Returns 0-based contiguous labels,
    deterministic given the seed.
    """
    if G.num_edges == 0:
        raise ValueError("louvain needs at least one edge")
    rng = np.random.Generator(np.random.PCG64(seed))
    indptr = G.out_indptr.copy()
    indices = G.out_indices.copy()
    weights = np.ones(G.num_edges)
    self_w = np.zeros(G.n)
    total_w = float(G.num_edges)  # both arc directions counted, equals 2m
    membership = np.arange(G.n)
    degrees = np.diff(indptr).astype(float)
    last_q = -np.inf
    while True:
        node2com, moved = _local_move(
            indptr, indices, weights, self_w, degrees, total_w, rng, resolution
        )
        if not moved:
            break
        node2com, n_com = _relabel(node2com)
        q = _modularity(indptr, indices, weights, self_w, node2com, total_w, resolution)
        assert q >= last_q - 1e-9, "modularity decreased across a pass"
        last_q = q
        membership = node2com[membership]
        indptr, indices, weights, self_w = _aggregate(
            indptr, indices, weights, self_w, node2com, n_com
        )
        degrees = np.zeros(len(self_w))
        for u in range(len(self_w)):
            degrees[u] = self_w[u] + weights[indptr[u]:indptr[u + 1]].sum()
        if n_com == 1:
            break
    labels, _ = _relabel(membership)
    return labels


def _contingency(pred, true):
    pred = np.asarray(pred)
    true = np.asarray(true)
    if pred.shape != true.shape:
        raise ValueError(f"label length mismatch: {pred.shape} vs {true.shape}")
    if pred.size == 0:
        raise ValueError("empty labelings")
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(true, return_inverse=True)
    table = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, ti), 1)
    return table


def purity(pred_labels, true_labels) -> float:
    """Fraction of points whose predicted cluster's majority truth matches them."""
    table = _contingency(pred_labels, true_labels)
    return float(table.max(axis=1).sum() / table.sum())


def nmi(pred_labels, true_labels, normalization="arithmetic") -> float:
    """Normalized mutual information between two labelings.

    Normalizer is the arithmetic mean of the entropies by default
    (min/geometric/max also supported). Two constant labelings count as
    identical (1.0); a constant labeling against a varied one scores 0.
    """
    table = _contingency(pred_labels, true_labels).astype(float)
    n = table.sum()
    joint = table / n
    p_pred = joint.sum(axis=1)
    p_true = joint.sum(axis=0)
    nz = joint > 0
    mi = float((joint[nz] * np.log(joint[nz] / np.outer(p_pred, p_true)[nz])).sum())
    h_pred = float(-(p_pred[p_pred > 0] * np.log(p_pred[p_pred > 0])).sum())
    h_true = float(-(p_true[p_true > 0] * np.log(p_true[p_true > 0])).sum())
    if normalization == "arithmetic":
        denom = (h_pred + h_true) / 2
    elif normalization == "geometric":
        denom = np.sqrt(h_pred * h_true)
    elif normalization == "min":
        denom = min(h_pred, h_true)
    elif normalization == "max":
        denom = max(h_pred, h_true)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    if denom == 0:
        return 1.0 if h_pred == h_true == 0 else 0.0
    return float(max(0.0, min(1.0, mi / denom)))
