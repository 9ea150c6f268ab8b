"""Baseline centrality scorers and the shared ranking primitive.

All scorers return a non-negative per-vertex score array; ordering is the
only thing consumers rely on, via :func:`rank_descending`. Matrix-vector
products go through scipy CSR kernels, which reduce in a fixed order, so
repeated runs produce bit-identical scores.
"""

from __future__ import annotations

import numpy as np

from .graph import DirectedGraph, symmetrize


class ConvergenceError(RuntimeError):
    """Iterative scorer failed to converge; carries the last residual."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = float(residual)


def t_step_score(G: DirectedGraph, t) -> np.ndarray:
    """Initial centrality: column sums of A^t, i.e. t-step in-flow.

    Computed as t products s <- A^T s from the all-ones vector, with s
    renormalized to unit sum after each product; only ratios and order
    matter downstream. At t=1 this ranks identically to in-degree.
    """
    t = int(t)
    if t < 1:
        raise ValueError("t must be >= 1")
    AT = G.in_csr()
    s = np.ones(G.n)
    for _ in range(t):
        s = AT @ s
        total = s.sum()
        if total > 0:
            s /= total
    return s


def degree_centrality(G: DirectedGraph) -> np.ndarray:
    """Total degree, in plus out."""
    return (G.in_degrees() + G.out_degrees()).astype(float)


def pagerank(G: DirectedGraph, damping=0.85, tol=1e-10, max_iter=1000) -> np.ndarray:
    """Uniform-teleport PageRank with dangling mass spread uniformly.

    Scores sum to 1; converged when the L1 change drops below tol, else
    ConvergenceError.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie in (0, 1)")
    n = G.n
    if n == 0:
        return np.empty(0)
    AT = G.in_csr()
    outdeg = G.out_degrees().astype(float)
    dangling = outdeg == 0
    inv_out = np.zeros(n)
    inv_out[~dangling] = 1.0 / outdeg[~dangling]
    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    residual = np.inf
    for _ in range(int(max_iter)):
        spread = x * inv_out
        new = damping * (AT @ spread) + damping * x[dangling].sum() / n + teleport
        residual = np.abs(new - x).sum()
        x = new
        if residual < tol:
            return x
    raise ConvergenceError(f"pagerank did not converge in {max_iter} iterations", residual)


def katz(G: DirectedGraph, alpha=None, max_iter=1000, tol=1e-10) -> np.ndarray:
    """Katz centrality: sum over path lengths t >= 1 of alpha^t column sums of A^t.

    Defaults alpha to 0.5 / max out-degree, which keeps the series
    convergent on bounded-out-degree graphs. Residual growth over 10
    consecutive iterations is treated as divergence.
    """
    n = G.n
    if n == 0:
        return np.empty(0)
    k_max = int(G.out_degrees().max()) if n else 0
    if alpha is None:
        if k_max == 0:
            return np.zeros(n)
        alpha = 0.5 / k_max
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    AT = G.in_csr()
    ones = np.ones(n)
    x = np.zeros(n)
    last = np.inf
    growth = 0
    for _ in range(int(max_iter)):
        new = alpha * (AT @ (x + ones))
        residual = np.abs(new - x).sum()
        x = new
        if residual < tol:
            return x
        if residual > last:
            growth += 1
            if growth >= 10:
                raise ConvergenceError("katz series diverges; reduce alpha", residual)
        else:
            growth = 0
        last = residual
    raise ConvergenceError(f"katz did not converge in {max_iter} iterations", last)


def onion_decomposition(G: DirectedGraph) -> np.ndarray:
    """Layer indices from staged degree peeling of the symmetrized graph.

    Peeling proceeds in rounds: every vertex whose remaining degree is at
    or below the current core threshold is removed as one layer, and the
    threshold rises only once no such vertex is left. Higher layer means
    more central. The rounds-within-a-stage rule (rather than peeling the
    exact minimum degree each round) keeps layers coarse enough that a
    layer is a meaningful plateau; ties inside one are left to the
    ranking stage (degree, then index).
    """
    n = G.n
    if n == 0:
        return np.empty(0)
    U = symmetrize(G)
    indptr, indices = U.out_indptr, U.out_indices
    deg = U.out_degrees().astype(np.int64)
    layer = np.zeros(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    current = 0
    remaining = n
    threshold = int(deg.min()) if n else 0
    while remaining:
        peel = active & (deg <= threshold)
        if not peel.any():
            threshold = int(deg[active].min())
            continue
        current += 1
        layer[peel] = current
        peeled = np.flatnonzero(peel)
        nbrs = np.concatenate([indices[indptr[v]:indptr[v + 1]] for v in peeled])
        if nbrs.size:
            deg -= np.bincount(nbrs, minlength=n)
        active &= ~peel
        remaining -= peeled.size
    return layer.astype(float)


def rank_descending(scores, tie_breaker=None) -> np.ndarray:
    """Permutation of vertices by descending score; ties by ascending index.

    An optional tie_breaker array is consulted (descending) before the
    index rule, used e.g. to order peeling layers by degree.
    """
    s = np.asarray(scores, dtype=float)
    if np.isnan(s).any():
        raise ValueError(f"NaN score at vertex {int(np.flatnonzero(np.isnan(s))[0])}")
    if tie_breaker is None:
        return np.argsort(-s, kind="stable")
    tb = np.asarray(tie_breaker, dtype=float)
    return np.lexsort((np.arange(s.size), -tb, -s))
