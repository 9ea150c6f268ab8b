"""Immutable directed graph in CSR form.

The graph keeps two adjacency views, one over out-edges and one over
in-edges (the transpose), both with sorted neighbor lists so that set
operations and hop expansion are deterministic. Self-loops and duplicate
edges are rejected/collapsed at build time; after construction the
structure is read-only and safe to share across threads.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Raised for invalid edges, vertex sets, or graph arguments."""


def _as_edge_arrays(edges):
    """Coerce an edge list (pairs, (m,2) array, or (src, dst) arrays) to two int64 arrays."""
    if isinstance(edges, tuple) and len(edges) == 2 and not np.isscalar(edges[0]):
        src = np.asarray(edges[0], dtype=np.int64)
        dst = np.asarray(edges[1], dtype=np.int64)
        if src.shape != dst.shape:
            raise GraphError("src and dst arrays must have equal length")
        return src.ravel(), dst.ravel()
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError("edges must be (src, dst) pairs")
    return arr[:, 0].copy(), arr[:, 1].copy()


class DirectedGraph:
    """CSR adjacency over vertices 0..n-1, with out- and in-edge views.

    Construct via :func:`build_graph`; the constructor assumes already
    validated, deduplicated, sorted inputs.
    """

    def __init__(self, n, out_indptr, out_indices, in_indptr, in_indices):
        self.n = int(n)
        self.out_indptr = out_indptr
        self.out_indices = out_indices
        self.in_indptr = in_indptr
        self.in_indices = in_indices
        self.num_edges = int(len(out_indices))
        self._out_csr = None
        self._in_csr = None
        self._edge_src = None

    def out_degrees(self):
        return np.diff(self.out_indptr)

    def in_degrees(self):
        return np.diff(self.in_indptr)

    def out_neighbors(self, v):
        return self.out_indices[self.out_indptr[v]:self.out_indptr[v + 1]]

    def in_neighbors(self, v):
        return self.in_indices[self.in_indptr[v]:self.in_indptr[v + 1]]

    def out_csr(self):
        """scipy CSR of the adjacency matrix A (A[i, j] = 1 iff i -> j)."""
        if self._out_csr is None:
            self._out_csr = sp.csr_matrix(
                (np.ones(self.num_edges), self.out_indices, self.out_indptr),
                shape=(self.n, self.n),
            )
        return self._out_csr

    def in_csr(self):
        """scipy CSR of the transpose A^T (row i lists the in-neighbors of i)."""
        if self._in_csr is None:
            self._in_csr = sp.csr_matrix(
                (np.ones(self.num_edges), self.in_indices, self.in_indptr),
                shape=(self.n, self.n),
            )
        return self._in_csr

    def edge_sources(self):
        """Per-edge source vertex, aligned with out_indices."""
        if self._edge_src is None:
            self._edge_src = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degrees())
        return self._edge_src

    def edge_list(self):
        """All edges as (src, dst) int64 arrays in CSR order."""
        return self.edge_sources().copy(), self.out_indices.copy()

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, edges={self.num_edges})"


def _csr_from_sorted(n, src, dst):
    """Build (indptr, indices) from edge arrays sorted by (src, dst)."""
    counts = np.bincount(src, minlength=n)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return indptr, dst.astype(np.int64)


def build_graph(n, edges) -> DirectedGraph:
    """Build a DirectedGraph from an edge list.

    Duplicate edges are collapsed. Self-loops or out-of-range endpoints
    raise GraphError naming the offending edge.
    """
    n = int(n)
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    src, dst = _as_edge_arrays(edges)
    if src.size:
        bad = (src < 0) | (src >= n) | (dst < 0) | (dst >= n)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise GraphError(f"edge ({src[i]}, {dst[i]}) out of range for n={n}")
        loops = src == dst
        if loops.any():
            i = int(np.flatnonzero(loops)[0])
            raise GraphError(f"self-loop ({src[i]}, {dst[i]}) not allowed")
        # collapse duplicates and sort by (src, dst) in one pass
        codes = np.unique(src * np.int64(n) + dst)
        src = codes // n
        dst = codes % n
    out_indptr, out_indices = _csr_from_sorted(n, src, dst)
    # transpose view: sort by (dst, src)
    order = np.lexsort((src, dst))
    in_indptr, in_indices = _csr_from_sorted(n, dst[order], src[order])
    return DirectedGraph(n, out_indptr, out_indices, in_indptr, in_indices)


def vertex_mask(n, vertices) -> np.ndarray:
    """Normalize a vertex set (bool mask or index array) to a bool mask of length n."""
    arr = np.asarray(vertices)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise GraphError(f"mask length {arr.shape} does not match n={n}")
        return arr
    arr = arr.astype(np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise GraphError("vertex index out of range")
    mask = np.zeros(n, dtype=bool)
    mask[arr] = True
    return mask


def edge_count_between(G: DirectedGraph, S, T) -> int:
    """Number of edges starting in S and ending in T (sets may overlap)."""
    ms = vertex_mask(G.n, S)
    mt = vertex_mask(G.n, T)
    if G.num_edges == 0:
        return 0
    return int(np.count_nonzero(ms[G.edge_sources()] & mt[G.out_indices]))


def p_hop_out_neighborhood(G: DirectedGraph, v, p) -> np.ndarray:
    """Vertices reachable from v by a directed path of length 1..p, excluding v.

    Returned as a sorted index array.
    """
    v = int(v)
    if not 0 <= v < G.n:
        raise GraphError(f"vertex {v} out of range")
    if p < 1:
        raise GraphError("p must be >= 1")
    seen = np.zeros(G.n, dtype=bool)
    frontier = G.out_neighbors(v)
    seen[frontier] = True
    for _ in range(int(p) - 1):
        if frontier.size == 0:
            break
        nxt = np.concatenate([G.out_neighbors(u) for u in frontier]) if frontier.size else frontier
        nxt = np.unique(nxt)
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    seen[v] = False
    return np.flatnonzero(seen)


def p_hop_adjacency(G: DirectedGraph, p) -> sp.csr_matrix:
    """Boolean CSR whose row v lists the 1..p-hop out-neighborhood of v (v excluded).

    p=1 is the adjacency itself. Higher p is computed with sparse boolean
    products; indices come out sorted, so downstream reductions are
    deterministic.
    """
    if p < 1:
        raise GraphError("p must be >= 1")
    A = G.out_csr()
    if p == 1:
        return A
    reach = A.copy()
    acc = A.copy()
    for _ in range(int(p) - 1):
        reach = reach @ A
        reach.data[:] = 1.0  # path counts are irrelevant, keep it binary
        acc = acc + reach
    coo = acc.tocoo()
    keep = coo.row != coo.col
    out = sp.csr_matrix(
        (np.ones(int(keep.sum())), (coo.row[keep], coo.col[keep])), shape=acc.shape
    )
    out.sort_indices()
    return out


def symmetrize(G: DirectedGraph) -> DirectedGraph:
    """Undirected version: edge {u, v} present iff u->v or v->u, stored as both arcs."""
    src, dst = G.edge_list()
    return build_graph(G.n, (np.concatenate([src, dst]), np.concatenate([dst, src])))


def induced_subgraph(G: DirectedGraph, S):
    """Subgraph on vertex set S, relabeled 0..|S|-1 in ascending original order.

    Returns (subgraph, old_ids) where old_ids[new] = original index.
    """
    mask = vertex_mask(G.n, S)
    old_ids = np.flatnonzero(mask)
    if old_ids.size == 0:
        raise GraphError("induced subgraph of an empty vertex set")
    new_id = np.full(G.n, -1, dtype=np.int64)
    new_id[old_ids] = np.arange(old_ids.size)
    src, dst = G.edge_list()
    keep = mask[src] & mask[dst]
    sub = build_graph(old_ids.size, (new_id[src[keep]], new_id[dst[keep]]))
    return sub, old_ids
