"""corerank: detection and balanced ranking of core vertices in directed
graphs whose communities split into dense cores and sparse peripheries.

The package bundles the graph representation, two synthetic generators
(a core/periphery block model and a concentric Gaussian mixture), exact
k-NN embedding, baseline centralities, the relative-centrality ranking
family, the evaluation metric suite, Louvain clustering, and a
config-driven experiment CLI.
"""

from .centrality import (
    ConvergenceError,
    degree_centrality,
    katz,
    onion_decomposition,
    pagerank,
    rank_descending,
    t_step_score,
)
from .cluster import louvain, nmi, purity
from .embed import knn_graph, log_normalize, pca_project, preprocess_vectors
from .graph import (
    DirectedGraph,
    GraphError,
    build_graph,
    edge_count_between,
    induced_subgraph,
    p_hop_out_neighborhood,
    symmetrize,
)
from .metrics import (
    McpcReport,
    auroc_core_prioritization,
    balancedness_at,
    core_concentration,
    icef,
    icef_curve,
    preservation_ratio,
    total_balancedness,
    verify_mcpc,
)
from .relative import default_t, meta_rank, n2_rank, n_rank, relative_step, rn_rank
from .synth import (
    BlockModelSpec,
    GmmSpec,
    GroundTruth,
    ModelError,
    gmm_two_community_spec,
    sample_block_model,
    sample_concentric_gmm,
    table1_probabilities,
    table1_spec,
)

__version__ = "0.1.0"

__all__ = [
    "BlockModelSpec",
    "ConvergenceError",
    "DirectedGraph",
    "GmmSpec",
    "GraphError",
    "GroundTruth",
    "McpcReport",
    "ModelError",
    "auroc_core_prioritization",
    "balancedness_at",
    "build_graph",
    "core_concentration",
    "degree_centrality",
    "default_t",
    "edge_count_between",
    "gmm_two_community_spec",
    "icef",
    "icef_curve",
    "induced_subgraph",
    "katz",
    "knn_graph",
    "log_normalize",
    "louvain",
    "meta_rank",
    "n2_rank",
    "n_rank",
    "nmi",
    "onion_decomposition",
    "p_hop_out_neighborhood",
    "pagerank",
    "pca_project",
    "preprocess_vectors",
    "preservation_ratio",
    "purity",
    "rank_descending",
    "relative_step",
    "rn_rank",
    "sample_block_model",
    "sample_concentric_gmm",
    "symmetrize",
    "t_step_score",
    "table1_probabilities",
    "table1_spec",
    "total_balancedness",
    "verify_mcpc",
]
