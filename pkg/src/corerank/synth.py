"""Synthetic data sources: the core/periphery block model and the concentric GMM.

Both samplers draw from counter-based per-unit random streams (one stream
per source vertex for the block model, one per block for the GMM), keyed
by (seed, unit index). Output therefore depends only on the spec, never
on scheduling or thread count.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import DirectedGraph, build_graph


class ModelError(ValueError):
    """Raised when a generator spec is invalid or infeasible."""


def _stream(seed, index):
    """Independent Generator for unit `index` under the master seed."""
    key = np.array([np.uint64(seed), np.uint64(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass
class GroundTruth:
    """Per-vertex community label plus, when known, the core/periphery flag.

    ``community[v]`` is in [0, z); ``is_core`` is None for data where the
    split is not annotated (real vector datasets).
    """

    community: np.ndarray
    is_core: np.ndarray | None = None

    def __post_init__(self):
        self.community = np.asarray(self.community, dtype=np.int64)
        if self.n and self.community.min() < 0:
            raise ModelError("community labels must be non-negative")
        if self.is_core is not None:
            self.is_core = np.asarray(self.is_core, dtype=bool)
            if self.is_core.shape != self.community.shape:
                raise ModelError("community and is_core must have equal length")

    @property
    def n(self):
        return self.community.size

    @property
    def num_communities(self):
        return int(np.unique(self.community).size)

    def community_labels(self):
        return np.unique(self.community)

    def community_mask(self, label) -> np.ndarray:
        return self.community == label

    def block_mask(self, label, core) -> np.ndarray:
        if self.is_core is None:
            raise ModelError("ground truth carries no core/periphery split")
        return (self.community == label) & (self.is_core == bool(core))

    def core_labels(self):
        """Communities that contain at least one core vertex."""
        if self.is_core is None:
            raise ModelError("ground truth carries no core/periphery split")
        return sorted(np.unique(self.community[self.is_core]).tolist())


@dataclass
class BlockModelSpec:
    """Block sizes, row-stochastic block matrix, target out-degree, seed.

    ``block_sizes`` is an ordered list of (community, is_core, size); the
    probability matrix rows/columns follow the same order.
    """

    block_sizes: list
    P: np.ndarray
    k: int
    seed: int = 0

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=float)
        b = len(self.block_sizes)
        if self.P.shape != (b, b):
            raise ModelError(f"P must be {b}x{b} for {b} blocks")
        if any(int(s) < 1 for _, _, s in self.block_sizes):
            raise ModelError("all block sizes must be >= 1")
        if ((self.P < 0) | (self.P > 1)).any():
            raise ModelError("P entries must lie in [0, 1]")
        if self.k < 1:
            raise ModelError("target out-degree k must be >= 1")

    @property
    def n(self):
        return int(sum(s for _, _, s in self.block_sizes))

    def sizes(self) -> np.ndarray:
        return np.array([s for _, _, s in self.block_sizes], dtype=np.int64)

    def ground_truth(self) -> GroundTruth:
        community = np.concatenate(
            [np.full(int(s), int(c), dtype=np.int64) for c, _, s in self.block_sizes]
        )
        is_core = np.concatenate(
            [np.full(int(s), bool(core)) for _, core, s in self.block_sizes]
        )
        return GroundTruth(community, is_core)

    def validate_probabilities(self):
        """Check that every per-pair edge probability k/|block| * P is <= 1."""
        sizes = self.sizes()
        probs = self.k / sizes[None, :] * self.P
        bad = np.argwhere(probs > 1.0)
        if bad.size:
            i, j = bad[0]
            raise ModelError(
                f"edge probability {probs[i, j]:.4f} > 1 for block pair "
                f"({self.block_sizes[i][:2]}, {self.block_sizes[j][:2]})"
            )


# Block probability family used throughout the two-community experiments,
# in block order (V01, V00, V10, V11) = (core 0, periphery 0, periphery 1,
# core 1). Rows are printed with sums 1, 1, 1.2 and 0.975 - 0.125*gamma;
# row_normalize=True (the default) rescales the deviating rows so every
# row is stochastic, row_normalize=False keeps the literal values.
TABLE1_BLOCK_ORDER = ((0, True), (0, False), (1, False), (1, True))


def table1_probabilities(gamma, row_normalize=True) -> np.ndarray:
    """The gamma-parameterized 4x4 block matrix of the two-community family."""
    if not 0.0 <= gamma <= 0.2:
        raise ModelError(f"gamma={gamma} outside [0, 0.2]")
    P = np.array(
        [
            [0.8 + gamma, 3 * (0.2 - gamma) / 8, 3 * (0.2 - gamma) / 8, (0.2 - gamma) / 4],
            [0.4 + gamma, (0.6 - gamma) / 3, (0.6 - gamma) / 3, (0.6 - gamma) / 3],
            [0.2, 0.2, 0.2, 0.6],
            [(0.2 + gamma) / 4, (0.2 + gamma) / 4, 3 * (0.2 + gamma) / 8, 0.8 - gamma],
        ]
    )
    if row_normalize:
        sums = P.sum(axis=1)
        fix = np.abs(sums - 1.0) > 1e-9
        P[fix] /= sums[fix, None]
    return P


def table1_spec(gamma, n=4000, k=20, seed=0, row_normalize=True) -> BlockModelSpec:
    """BlockModelSpec for the two-community family with equal block sizes n/4."""
    if n % 4:
        raise ModelError("n must be divisible by 4 for equal blocks")
    sizes = [(c, core, n // 4) for c, core in TABLE1_BLOCK_ORDER]
    return BlockModelSpec(sizes, table1_probabilities(gamma, row_normalize), k, seed)


def _sample_targets(rng, count, m):
    """m distinct integers from range(count), deterministic given the stream."""
    if m >= count:
        return np.arange(count, dtype=np.int64)
    if m > count // 2:
        return np.sort(rng.permutation(count)[:m]).astype(np.int64)
    picks = np.unique(rng.integers(0, count, size=m))
    while picks.size < m:
        extra = rng.integers(0, count, size=m - picks.size)
        picks = np.unique(np.concatenate([picks, extra]))
    return picks.astype(np.int64)


def sample_block_model(spec: BlockModelSpec):
    """Sample a directed graph from the block model.

    Each ordered pair (i, j) with i in block b and j in block b' carries an
    edge independently with probability k/|b'| * P[b, b']. Sampling iterates
    source vertices, drawing a Binomial(|b'|, p) count per target block and
    then that many distinct targets, which keeps the work near O(n*k).

    Returns (DirectedGraph, GroundTruth).
    """
    spec.validate_probabilities()
    sizes = spec.sizes()
    n_blocks = len(sizes)
    starts = np.concatenate([[0], np.cumsum(sizes)])[:-1]
    n = spec.n
    block_of = np.repeat(np.arange(n_blocks), sizes)
    src_parts = []
    dst_parts = []
    for i in range(n):
        rng = _stream(spec.seed, i)
        bi = block_of[i]
        local_self = i - starts[bi]
        for b in range(n_blocks):
            p = spec.k / sizes[b] * spec.P[bi, b]
            if p <= 0.0:
                continue
            count = int(sizes[b]) - (1 if b == bi else 0)
            if count <= 0:
                continue
            m = int(rng.binomial(count, p))
            if m == 0:
                continue
            picks = _sample_targets(rng, count, m)
            if b == bi:
                picks = picks + (picks >= local_self)
            src_parts.append(np.full(picks.size, i, dtype=np.int64))
            dst_parts.append(starts[b] + picks)
    if src_parts:
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
    else:
        src = np.empty(0, np.int64)
        dst = np.empty(0, np.int64)
    return build_graph(n, (src, dst)), spec.ground_truth()


@dataclass
class GmmSpec:
    """Concentric Gaussian mixture: per community, a tight core and a wider
    periphery drawn from isotropic Gaussians sharing the community center.

    ``centers`` has one row per community; ``core_sigma``/``periphery_sigma``
    and ``core_count``/``periphery_count`` are per-community.
    """

    centers: np.ndarray
    core_sigma: np.ndarray
    periphery_sigma: np.ndarray
    core_count: np.ndarray
    periphery_count: np.ndarray
    seed: int = 0

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        self.core_sigma = np.asarray(self.core_sigma, dtype=float).ravel()
        self.periphery_sigma = np.asarray(self.periphery_sigma, dtype=float).ravel()
        self.core_count = np.asarray(self.core_count, dtype=np.int64).ravel()
        self.periphery_count = np.asarray(self.periphery_count, dtype=np.int64).ravel()
        z = self.centers.shape[0]
        for name, arr in (
            ("core_sigma", self.core_sigma),
            ("periphery_sigma", self.periphery_sigma),
            ("core_count", self.core_count),
            ("periphery_count", self.periphery_count),
        ):
            if arr.size != z:
                raise ModelError(f"{name} must have one entry per community ({z})")
        if (self.core_count < 1).any() or (self.periphery_count < 1).any():
            raise ModelError("all block counts must be >= 1")
        if (self.core_sigma < 0).any() or (self.periphery_sigma < 0).any():
            raise ModelError("standard deviations must be non-negative")
        loose = self.periphery_sigma < 1.1 * self.core_sigma
        if loose.any():
            warnings.warn(
                "periphery sigma below 1.1x core sigma for communities "
                f"{np.flatnonzero(loose).tolist()}; cores may not be separable",
                stacklevel=2,
            )

    @property
    def dimension(self):
        return self.centers.shape[1]

    @property
    def num_communities(self):
        return self.centers.shape[0]

    @property
    def n(self):
        return int(self.core_count.sum() + self.periphery_count.sum())


def gmm_two_community_spec(gamma, d=20, block_count=2000, seed=0) -> GmmSpec:
    """Default two-community instantiation: centers 0 and 0.3*ones, core/periphery
    sigmas (0.1, 0.3) for the first community and gamma times that for the second."""
    centers = np.vstack([np.zeros(d), 0.3 * np.ones(d)])
    return GmmSpec(
        centers=centers,
        core_sigma=np.array([0.1, gamma * 0.1]),
        periphery_sigma=np.array([0.3, gamma * 0.3]),
        core_count=np.array([block_count, block_count]),
        periphery_count=np.array([block_count, block_count]),
        seed=seed,
    )


def sample_concentric_gmm(spec: GmmSpec):
    """Sample the mixture. Rows are block-major (community 0 core, community 0
    periphery, community 1 core, ...) then index-major within a block.

    Returns (points, GroundTruth).
    """
    parts = []
    communities = []
    cores = []
    block_index = 0
    for ell in range(spec.num_communities):
        for is_core, sigma, count in (
            (True, spec.core_sigma[ell], spec.core_count[ell]),
            (False, spec.periphery_sigma[ell], spec.periphery_count[ell]),
        ):
            rng = _stream(spec.seed, block_index)
            block_index += 1
            pts = spec.centers[ell] + sigma * rng.standard_normal((int(count), spec.dimension))
            parts.append(pts)
            communities.append(np.full(int(count), ell, dtype=np.int64))
            cores.append(np.full(int(count), is_core))
    points = np.vstack(parts)
    gt = GroundTruth(np.concatenate(communities), np.concatenate(cores))
    return points, gt
