import numpy as np
import pytest

from corerank.centrality import degree_centrality, rank_descending
from corerank.graph import build_graph, edge_count_between
from corerank.metrics import (
    auroc_core_prioritization,
    balancedness_at,
    core_concentration,
    icef,
    icef_curve,
    preservation_ratio,
    top_count,
    total_balancedness,
    verify_mcpc,
)
from corerank.synth import GroundTruth, sample_block_model, table1_spec

import oracles


def test_cc_whole_vertex_set_is_zero():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    assert core_concentration(G, [0, 1, 2, 3]) == 0.0


def test_cc_hand_example():
    G = build_graph(3, [(0, 1), (2, 1), (1, 0)])
    assert core_concentration(G, [1]) == 1.0


def test_cc_lower_bound_attained():
    G = build_graph(3, [(0, 1), (0, 2)])
    assert core_concentration(G, [0]) == -1.0


def test_cc_undefined_without_out_edges():
    G = build_graph(3, [(0, 1)])
    with pytest.raises(ValueError, match="outgoing"):
        core_concentration(G, [1])


def test_eq1_identity_exact_on_random_graphs():
    rng = np.random.default_rng(0)
    for _ in range(30):
        n = int(rng.integers(2, 60))
        edges = oracles.random_digraph_edges(rng, n, 0.2)
        G = build_graph(n, edges)
        full = np.ones(n, dtype=bool)
        for _ in range(5):
            S = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
            e_sv = edge_count_between(G, S, full)
            if e_sv == 0:
                continue
            e_vs = edge_count_between(G, full, S)
            # E(V,S) = (1 + CC(S)) * E(S,V): integer form
            mask = np.zeros(n, dtype=bool)
            mask[S] = True
            gain = edge_count_between(G, ~mask, mask) - edge_count_between(G, mask, ~mask)
            assert e_vs == e_sv + gain
            assert core_concentration(G, S) * e_sv == pytest.approx(gain, abs=1e-9)


def two_disjoint_communities():
    # each community: a dense 3-core plus a single periphery vertex feeding it
    edges = []
    for base in (0, 4):
        core = [base, base + 1, base + 2]
        edges += [(u, v) for u in core for v in core if u != v]
        edges.append((base + 3, base))
    G = build_graph(8, edges)
    gt = GroundTruth(
        community=[0, 0, 0, 0, 1, 1, 1, 1],
        is_core=[True, True, True, False, True, True, True, False],
    )
    return G, gt


def test_verify_mcpc_disjoint_communities():
    G, gt = two_disjoint_communities()
    report = verify_mcpc(G, gt)
    assert all(report.community_structure_ok.values())
    assert report.alpha > 0
    assert report.beta == 0.0


def test_verify_mcpc_symmetric_blocks_alpha_nonpositive():
    # directed 8-cycle split into four 2-vertex blocks: every block has CC 0
    G = build_graph(8, [(i, (i + 1) % 8) for i in range(8)])
    gt = GroundTruth(
        community=[0, 0, 0, 0, 1, 1, 1, 1],
        is_core=[True, True, False, False, True, True, False, False],
    )
    report = verify_mcpc(G, gt)
    assert report.alpha <= 0
    assert set(report.block_cc.values()) == {0.0}


def test_verify_mcpc_requires_out_edges():
    G = build_graph(4, [(0, 1), (1, 0), (2, 0)])
    gt = GroundTruth(community=[0, 0, 1, 1], is_core=[True, False, True, False])
    with pytest.raises(ValueError, match="no outgoing edges"):
        verify_mcpc(G, gt)


def test_auroc_examples():
    gt = GroundTruth(community=[0, 1, 0, 1], is_core=[True, True, False, False])
    assert auroc_core_prioritization(np.array([3.0, 2.0, 1.0, 0.0]), gt) == 1.0
    assert auroc_core_prioritization(np.array([3.0, 1.0, 2.0, 0.0]), gt) == 0.75
    assert auroc_core_prioritization(np.ones(4), gt) == 0.5


def test_auroc_matches_pairwise_oracle():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(4, 40))
        scores = rng.integers(0, 6, size=n).astype(float)  # many ties
        is_core = rng.random(n) < 0.4
        if is_core.all() or not is_core.any():
            continue
        gt = GroundTruth(np.zeros(n, dtype=int), is_core)
        assert auroc_core_prioritization(scores, gt) == pytest.approx(
            oracles.brute_auroc(scores, is_core)
        )


def test_auroc_monotone_transform_invariance():
    rng = np.random.default_rng(2)
    transforms = [
        lambda x: 3.0 * x + 1.0,
        np.exp,
        lambda x: x**3,
        lambda x: np.log1p(x - x.min()),
    ]
    for i in range(1000):
        n = int(rng.integers(4, 30))
        scores = rng.random(n)
        is_core = rng.random(n) < 0.5
        if is_core.all() or not is_core.any():
            continue
        gt = GroundTruth(np.zeros(n, dtype=int), is_core)
        base = auroc_core_prioritization(scores, gt)
        f = transforms[i % len(transforms)]
        assert auroc_core_prioritization(f(scores), gt) == pytest.approx(base, abs=1e-9)


def test_auroc_single_class_errors():
    gt = GroundTruth(community=[0, 0], is_core=[True, True])
    with pytest.raises(ValueError):
        auroc_core_prioritization(np.array([1.0, 2.0]), gt)


def make_two_core_gt(core_size=10, periphery=20):
    n = 2 * core_size + periphery
    community = np.array([0] * core_size + [1] * core_size + [0] * periphery)
    is_core = np.array([True] * (2 * core_size) + [False] * periphery)
    return GroundTruth(community, is_core), n, core_size


def test_balancedness_equal_fractions():
    gt, n, m = make_two_core_gt()
    # top 10 vertices: 5 from each core
    order = np.concatenate([np.arange(5), np.arange(m, m + 5), np.arange(5, m),
                            np.arange(m + 5, 2 * m), np.arange(2 * m, n)])
    assert balancedness_at(order, gt, 10 / n) == 1.0


def test_balancedness_skewed():
    gt, n, m = make_two_core_gt()
    order = np.concatenate([np.arange(2), np.arange(m, m + 8), np.arange(2, m),
                            np.arange(m + 8, 2 * m), np.arange(2 * m, n)])
    assert balancedness_at(order, gt, 10 / n) == pytest.approx(0.25)


def test_balancedness_empty_selection_convention():
    gt, n, m = make_two_core_gt()
    # periphery first: the small prefixes hold no core vertex
    order = np.concatenate([np.arange(2 * m, n), np.arange(2 * m)])
    assert balancedness_at(order, gt, 1 / n) == 1.0


def test_total_balancedness_two_vertex_case():
    gt = GroundTruth(community=[0, 1], is_core=[True, True])
    assert total_balancedness(np.array([0, 1]), gt) == 0.5


def test_total_balancedness_matches_prefix_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(4, 30))
        community = rng.integers(0, 3, size=n)
        is_core = rng.random(n) < 0.5
        if not is_core.any():
            is_core[0] = True
        gt = GroundTruth(community, is_core)
        order = rng.permutation(n)
        expected = np.mean(
            [oracles.brute_balancedness_prefix(order, community, is_core, i)
             for i in range(1, n + 1)]
        )
        assert total_balancedness(order, gt) == pytest.approx(expected)


def test_total_balancedness_interleaved_cores():
    # cores of size 3 each, interleaved at the top of the ranking
    community = np.array([0, 0, 0, 1, 1, 1] + [0] * 14)
    is_core = np.array([True] * 6 + [False] * 14)
    gt = GroundTruth(community, is_core)
    order = np.array([0, 3, 1, 4, 2, 5] + list(range(6, 20)))
    n = 20
    total = total_balancedness(order, gt)
    assert total >= 1 - 2 / n
    # even prefixes hold equal core fractions
    for i in (2, 4, 6, 10, 20):
        assert oracles.brute_balancedness_prefix(order, community, is_core, i) == 1.0


def test_total_balancedness_one_core_first_then_last():
    # all of core A at the top, all of core B at the very bottom
    m = 10
    n = 4 * m
    community = np.array([0] * m + [1] * m + [0] * (2 * m))
    is_core = np.array([True] * (2 * m) + [False] * (2 * m))
    gt = GroundTruth(community, is_core)
    order = np.concatenate([np.arange(m), np.arange(2 * m, n), np.arange(m, 2 * m)])
    assert total_balancedness(order, gt) < 0.6


def test_preservation_ratio_full_set():
    gt = GroundTruth(community=[0] * 50 + [1] * 50)
    assert preservation_ratio(np.arange(100), gt) == 1.0


def test_preservation_ratio_balanced_selection():
    gt = GroundTruth(community=[0] * 50 + [1] * 50)
    S = np.concatenate([np.arange(10), np.arange(50, 60)])
    assert preservation_ratio(S, gt) == pytest.approx(1.0)


def test_preservation_ratio_one_sided_selection():
    gt = GroundTruth(community=[0] * 50 + [1] * 50)
    assert preservation_ratio(np.arange(20), gt) == pytest.approx(0.5)


def test_preservation_ratio_empty_errors():
    gt = GroundTruth(community=[0, 1])
    with pytest.raises(ValueError):
        preservation_ratio(np.array([], dtype=int), gt)


def test_preservation_ratio_range():
    rng = np.random.default_rng(4)
    for _ in range(30):
        n = int(rng.integers(4, 50))
        z = int(rng.integers(1, 4))
        community = rng.integers(0, z, size=n)
        community[:z] = np.arange(z)  # every label occurs
        gt = GroundTruth(community)
        S = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
        pr = preservation_ratio(S, gt)
        assert 1 / gt.num_communities - 1e-12 <= pr <= 1 + 1e-12


def test_icef_examples():
    labels = [0, 0, 1, 1]
    G = build_graph(4, [(0, 1), (1, 0), (2, 3)])
    assert icef(G, labels) == 1.0
    G2 = build_graph(4, [(0, 1), (1, 0), (2, 3), (0, 2)])
    assert icef(G2, labels) == 0.75
    G3 = build_graph(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert icef(G3, labels) == 0.0
    with pytest.raises(ValueError):
        icef(build_graph(2, []), [0, 1])


def test_icef_curve_full_prefix_matches_icef():
    rng = np.random.default_rng(5)
    G = build_graph(30, oracles.random_digraph_edges(rng, 30, 0.2))
    labels = rng.integers(0, 3, size=30)
    order = rng.permutation(30)
    curve = dict(icef_curve(G, order, labels, [0.5, 1.0]))
    assert curve[1.0] == pytest.approx(icef(G, labels))


def test_icef_curve_missing_values():
    G = build_graph(4, [(2, 3), (3, 2)])
    order = np.array([0, 1, 2, 3])
    curve = dict(icef_curve(G, order, [0, 0, 1, 1], [0.5, 1.0]))
    assert curve[0.5] is None
    assert curve[1.0] == 1.0


def test_icef_curve_flat_on_unstructured_graph():
    # community-free random graph + random ranking: curve flat within noise
    rng = np.random.default_rng(6)
    diffs = []
    for seed in range(10):
        local = np.random.default_rng(seed)
        n = 400
        G = build_graph(n, oracles.random_digraph_edges(local, n, 0.05))
        labels = local.integers(0, 2, size=n)
        order = local.permutation(n)
        curve = dict(icef_curve(G, order, labels, [0.3, 0.6, 1.0]))
        diffs.append(max(abs(curve[c] - curve[1.0]) for c in (0.3, 0.6)))
    assert np.median(diffs) < 0.05


def test_icef_improves_under_degree_ranking_on_block_model():
    G, gt = sample_block_model(table1_spec(0.0, n=4000, k=20, seed=0))
    order = rank_descending(degree_centrality(G))
    curve = dict(icef_curve(G, order, gt.community, [0.2, 1.0]))
    assert curve[0.2] > curve[1.0]


def test_top_count_rounds_half_up():
    assert top_count(0.5, 5) == 3
    assert top_count(0.2, 10) == 2
    assert top_count(0.25, 10) == 3
    assert top_count(1.0, 7) == 7
