"""Relative centrality: rescoring vertices against their higher-scoring
neighborhoods.

The idea: a global centrality score separates dense regions from sparse
ones but also separates dense regions from each other, which biases any
top-of-the-ranking selection toward the densest region. Dividing each
vertex's score by the average over its higher-scoring p-hop neighbors
(plus itself) yields a score in [0, 1] that is close to 1 deep inside
any dense region, regardless of how dense that region is relative to
others.

The general form is parameterized by (t, p, q): a t-step in-flow
initialization, a p-hop reference neighborhood, and q extra rescoring
passes. Named instantiations:

    n_rank(G, t)  = meta_rank(G, t, 1, 0)
    n2_rank(G, t) = meta_rank(G, t, 2, 0)
    rn_rank(G, t) = meta_rank(G, t, 1, 1)
"""

from __future__ import annotations

import numpy as np

from .centrality import t_step_score
from .graph import DirectedGraph, p_hop_adjacency


def _relative_pass(hood, scores):
    """One rescoring pass against a precomputed neighborhood CSR."""
    n = hood.shape[0]
    row = np.repeat(np.arange(n, dtype=np.int64), np.diff(hood.indptr))
    neighbor = scores[hood.indices]
    higher = neighbor > scores[row]
    hi_sum = np.bincount(row[higher], weights=neighbor[higher], minlength=n)
    hi_cnt = np.bincount(row[higher], minlength=n)
    mean = (hi_sum + scores) / (hi_cnt + 1.0)
    # zero score with zero reference mean stays zero
    return np.divide(scores, mean, out=np.zeros(n), where=mean > 0)


def relative_step(G: DirectedGraph, scores, p=1, hood=None) -> np.ndarray:
    """One relative-centrality step.

    For each vertex v, take the vertices in its 1..p-hop out-neighborhood
    with strictly higher score, add v itself, and divide v's score by the
    average over that set. Outputs lie in [0, 1]; local maxima get exactly
    1. Only ratios and comparisons of scores enter, so any positive
    rescaling of the input leaves the output unchanged.
    """
    s = np.asarray(scores, dtype=float)
    if s.shape != (G.n,):
        raise ValueError(f"scores must have length n={G.n}")
    if not np.isfinite(s).all() or (s < 0).any():
        raise ValueError("scores must be finite and non-negative")
    if hood is None:
        hood = p_hop_adjacency(G, p)
    return _relative_pass(hood, s)


def meta_rank(G: DirectedGraph, t, p, q) -> np.ndarray:
    """Relative centrality with t-step initialization, p-hop references,
    and q extra rescoring passes (1 + q passes total)."""
    if t < 1 or p < 1 or q < 0:
        raise ValueError("need t >= 1, p >= 1, q >= 0")
    hood = p_hop_adjacency(G, p)
    s = t_step_score(G, t)
    for _ in range(int(q) + 1):
        s = _relative_pass(hood, s)
    return s


def n_rank(G: DirectedGraph, t=1) -> np.ndarray:
    return meta_rank(G, t, 1, 0)


def n2_rank(G: DirectedGraph, t=1) -> np.ndarray:
    return meta_rank(G, t, 2, 0)


def rn_rank(G: DirectedGraph, t=1) -> np.ndarray:
    return meta_rank(G, t, 1, 1)


def default_t(n, knn_like=True):
    """Conventional initialization depth: ceil(ln n) for embedding-style
    graphs, 1 for block-model graphs."""
    if not knn_like:
        return 1
    return max(1, int(np.ceil(np.log(max(n, 2)))))
