import numpy as np
import pytest

from corerank.graph import (
    GraphError,
    build_graph,
    edge_count_between,
    induced_subgraph,
    p_hop_adjacency,
    p_hop_out_neighborhood,
    symmetrize,
)

import oracles


def test_build_basic_degrees():
    G = build_graph(3, [(0, 1), (2, 1), (1, 0)])
    assert G.out_degrees().tolist() == [1, 1, 1]
    assert G.in_degrees().tolist() == [1, 2, 0]
    assert G.num_edges == 3


def test_build_empty():
    G = build_graph(2, [])
    assert G.num_edges == 0
    assert G.n == 2


def test_build_rejects_self_loop():
    with pytest.raises(GraphError, match=r"self-loop \(0, 0\)"):
        build_graph(2, [(0, 0)])


def test_build_rejects_out_of_range():
    with pytest.raises(GraphError, match=r"\(0, 5\)"):
        build_graph(3, [(0, 5)])
    with pytest.raises(GraphError):
        build_graph(3, [(-1, 0)])


def test_build_collapses_duplicates():
    G = build_graph(3, [(0, 1), (0, 1), (1, 2), (0, 1)])
    assert G.num_edges == 2
    assert G.out_neighbors(0).tolist() == [1]


def test_adjacency_sorted():
    G = build_graph(5, [(0, 4), (0, 1), (0, 3), (2, 0)])
    assert G.out_neighbors(0).tolist() == [1, 3, 4]
    assert G.in_neighbors(0).tolist() == [2]


def test_edge_count_between_examples():
    G = build_graph(3, [(0, 1), (2, 1), (1, 0)])
    assert edge_count_between(G, [1], [0, 2]) == 1
    assert edge_count_between(G, [], [0, 1, 2]) == 0
    assert edge_count_between(G, [0, 1, 2], [0, 1, 2]) == G.num_edges


def test_edge_count_between_oracle():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(2, 50))
        edges = oracles.random_digraph_edges(rng, n, 0.15)
        G = build_graph(n, edges)
        for _ in range(8):
            S = rng.choice(n, size=int(rng.integers(0, n)), replace=False)
            T = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
            assert edge_count_between(G, S, T) == oracles.brute_edge_count(set(edges), S, T)


def test_transpose_consistency():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(1, 40))
        G = build_graph(n, oracles.random_digraph_edges(rng, n, 0.2))
        assert G.out_degrees().sum() == G.in_degrees().sum() == G.num_edges
        # every out edge appears as an in edge
        src, dst = G.edge_list()
        rebuilt = sorted(zip(dst.tolist(), src.tolist()))
        listed = []
        for v in range(n):
            listed.extend((v, u) for u in G.in_neighbors(v).tolist())
        assert sorted(listed) == rebuilt


def test_hops_path_graph():
    G = build_graph(3, [(0, 1), (1, 2)])
    assert p_hop_out_neighborhood(G, 0, 1).tolist() == [1]
    assert p_hop_out_neighborhood(G, 0, 2).tolist() == [1, 2]


def test_hops_isolated_vertex():
    G = build_graph(3, [(0, 1)])
    for p in (1, 2, 5):
        assert p_hop_out_neighborhood(G, 2, p).size == 0


def test_hops_exclude_origin_on_cycles():
    G = build_graph(3, [(0, 1), (1, 2), (2, 0)])
    assert p_hop_out_neighborhood(G, 0, 3).tolist() == [1, 2]


def test_p_hop_adjacency_matches_per_vertex():
    rng = np.random.default_rng(11)
    for p in (1, 2, 3):
        n = 30
        G = build_graph(n, oracles.random_digraph_edges(rng, n, 0.08))
        H = p_hop_adjacency(G, p)
        for v in range(n):
            row = H.indices[H.indptr[v]:H.indptr[v + 1]]
            assert sorted(row.tolist()) == p_hop_out_neighborhood(G, v, p).tolist()


def test_symmetrize_single_edge():
    G = symmetrize(build_graph(2, [(0, 1)]))
    assert edge_count_between(G, [0], [1]) == 1
    assert edge_count_between(G, [1], [0]) == 1


def test_symmetrize_idempotent():
    G = build_graph(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    S = symmetrize(G)
    assert S.num_edges == G.num_edges
    assert np.array_equal(S.out_indices, G.out_indices)


def test_symmetrize_mutual_pair():
    G = symmetrize(build_graph(2, [(0, 1), (1, 0)]))
    assert G.num_edges == 2
    assert len(oracles.undirected_edges(list(zip(*G.edge_list())))) == 1


def test_induced_identity():
    G = build_graph(4, [(0, 1), (1, 2), (3, 0)])
    sub, old = induced_subgraph(G, [0, 1, 2, 3])
    assert old.tolist() == [0, 1, 2, 3]
    assert np.array_equal(sub.out_indptr, G.out_indptr)
    assert np.array_equal(sub.out_indices, G.out_indices)


def test_induced_triangle():
    G = build_graph(3, [(0, 1), (1, 2), (2, 0)])
    sub, old = induced_subgraph(G, [0, 1])
    assert old.tolist() == [0, 1]
    assert sub.num_edges == 1
    assert sub.out_neighbors(0).tolist() == [1]


def test_induced_single_vertex():
    G = build_graph(3, [(0, 1), (1, 2), (2, 0)])
    sub, old = induced_subgraph(G, [1])
    assert sub.n == 1 and sub.num_edges == 0


def test_induced_empty_errors():
    G = build_graph(3, [(0, 1)])
    with pytest.raises(GraphError):
        induced_subgraph(G, [])


def test_induced_and_symmetrize_commute():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        G = build_graph(n, oracles.random_digraph_edges(rng, n, 0.2))
        S = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
        a, _ = induced_subgraph(symmetrize(G), S)
        b = symmetrize(induced_subgraph(G, S)[0])
        assert np.array_equal(a.out_indptr, b.out_indptr)
        assert np.array_equal(a.out_indices, b.out_indices)
