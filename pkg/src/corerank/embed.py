"""Vector datasets to directed k-NN graphs, plus the generic preprocessing
chain for raw count-like data (row scaling, log1p, principal-component
projection).

Nearest neighbors are exact and brute force. The largest inputs in scope
are a few tens of thousands of rows, well within an exact-search budget,
and exactness keeps the graphs deterministic: distances are compared with
ties broken by the smaller point index.
"""

from __future__ import annotations

import warnings

import numpy as np

from .graph import DirectedGraph, build_graph


def check_points(points) -> np.ndarray:
    """Validate a point matrix: 2-d, finite entries."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d matrix")
    if not np.isfinite(pts).all():
        raise ValueError("points contain NaN or Inf entries")
    return pts


def knn_graph(points, k) -> DirectedGraph:
    """Directed graph with an edge from each point to its k nearest others.

    Euclidean distance, ties broken by smaller point index; every vertex
    has out-degree exactly k.
    """
    pts = check_points(points)
    n = pts.shape[0]
    k = int(k)
    if not 1 <= k < n:
        raise ValueError(f"k={k} must satisfy 1 <= k < n={n}")
    sq = np.einsum("ij,ij->i", pts, pts)
    dst = np.empty((n, k), dtype=np.int64)
    chunk = max(1, min(n, int(8_000_000 // max(n, 1))))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        # squared distances; the argsort below is stable, so exact ties
        # resolve to the smaller index
        d = sq[lo:hi, None] + sq[None, :] - 2.0 * (pts[lo:hi] @ pts.T)
        d[np.arange(hi - lo), np.arange(lo, hi)] = np.inf
        dst[lo:hi] = np.argsort(d, axis=1, kind="stable")[:, :k]
    src = np.repeat(np.arange(n, dtype=np.int64), k)
    return build_graph(n, (src, dst.ravel()))


def log_normalize(points, scale=10000.0) -> np.ndarray:
    """Scale each row to sum `scale`, then apply log(1 + x) entrywise.

    Rows summing to zero are left as zeros with a warning. Negative
    entries are rejected, the transform expects count-like data.
    """
    pts = check_points(points)
    if (pts < 0).any():
        r, c = np.argwhere(pts < 0)[0]
        raise ValueError(f"negative entry at row {r}, column {c}; expected count-like data")
    sums = pts.sum(axis=1)
    zero = sums == 0
    if zero.any():
        warnings.warn(f"{int(zero.sum())} zero-sum rows left as zeros", stacklevel=2)
    out = np.zeros_like(pts)
    nz = ~zero
    out[nz] = pts[nz] * (scale / sums[nz, None])
    return np.log1p(out)


def pca_project(points, target_dim, seed=0) -> np.ndarray:
    """Mean-center and project onto the top target_dim principal components.

    Component signs are fixed by making the largest-magnitude loading of
    each component positive, so the projection is reproducible. For wide
    inputs (d > 2000) a seeded randomized range finder stands in for the
    full eigendecomposition.
    """
    pts = check_points(points)
    n, d = pts.shape
    target_dim = int(target_dim)
    if not 1 <= target_dim <= min(n, d):
        raise ValueError(f"target_dim={target_dim} must be in [1, min(n, d)={min(n, d)}]")
    centered = pts - pts.mean(axis=0)
    if d <= 2000:
        cov = (centered.T @ centered) / max(n - 1, 1)
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals, kind="stable")[::-1][:target_dim]
        comps = eigvecs[:, order]
    else:
        rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
        probe = rng.standard_normal((d, target_dim + 10))
        basis, _ = np.linalg.qr(centered.T @ (centered @ probe))
        reduced = centered @ basis
        eigvals, eigvecs = np.linalg.eigh((reduced.T @ reduced) / max(n - 1, 1))
        order = np.argsort(eigvals, kind="stable")[::-1][:target_dim]
        comps = basis @ eigvecs[:, order]
    # deterministic sign: largest |loading| per component is positive
    flip = comps[np.abs(comps).argmax(axis=0), np.arange(comps.shape[1])] < 0
    comps[:, flip] *= -1.0
    return centered @ comps


def preprocess_vectors(points, target_dim=50, scale=10000.0, seed=0) -> np.ndarray:
    """Full preprocessing chain: row scaling, log1p, PCA to target_dim."""
    return pca_project(log_normalize(points, scale=scale), target_dim, seed=seed)
