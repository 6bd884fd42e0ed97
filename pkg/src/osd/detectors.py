"""Baseline anomaly scorers: LOF, isolation forest, k-NN distance.

All three return one finite score per object, aligned to dataset row
order, with larger meaning more outlying.  Neighbor-based detectors reuse
the exact k-NN machinery (and its tie rule) from knngraph.
"""

from __future__ import annotations

import math

import numpy as np

from .dataset import Dataset
from .errors import ConfigError
from .knngraph import build

__all__ = ["lof_scores", "iforest_scores", "knn_dist_scores"]


def lof_scores(ds: Dataset, n_neighbors: int = 20) -> np.ndarray:
    """Local outlier factor: mean ratio of neighbor density to own density.

    Classical formulation: reachability distance reach(a, b) =
    max(kdist(b), d(a, b)), local reachability density lrd(a) =
    1 / mean_b reach(a, b), score(a) = mean_b lrd(b) / lrd(a).
    Mean reachability is floored at 1e-12 of the dataset diameter so
    coincident duplicates cannot produce infinities.
    """
    if not 1 <= n_neighbors <= ds.count - 1:
        raise ConfigError(
            f"n_neighbors must be in [1, {ds.count - 1}], got {n_neighbors}"
        )
    g = build(ds, n_neighbors)
    idx = g.neighbor_idx
    dist = g.neighbor_dist
    kdist = dist[:, -1]

    reach = np.maximum(kdist[idx], dist)
    mean_reach = reach.mean(axis=1)
    floor = 1e-12 * (ds.diameter() or 1.0)
    mean_reach = np.maximum(mean_reach, floor)
    # lrd(b)/lrd(a) == mean_reach(a)/mean_reach(b)
    return (mean_reach[:, None] / mean_reach[idx]).mean(axis=1)


def knn_dist_scores(ds: Dataset, k: int) -> np.ndarray:
    """Distance to the k-th nearest neighbor, the simplest global baseline."""
    if not 1 <= k <= ds.count - 1:
        raise ConfigError(f"k must be in [1, {ds.count - 1}], got {k}")
    return build(ds, k).neighbor_dist[:, -1].copy()


# --- isolation forest -------------------------------------------------------

_HARMONIC_CACHE = [0.0]  # _HARMONIC_CACHE[m] == sum(1/i for i in 1..m)


def _harmonic(m: int) -> float:
    while len(_HARMONIC_CACHE) <= m:
        _HARMONIC_CACHE.append(_HARMONIC_CACHE[-1] + 1.0 / len(_HARMONIC_CACHE))
    return _HARMONIC_CACHE[m]


def average_path_length(n: int) -> float:
    """Expected unsuccessful-search path length c(n) = 2H(n-1) - 2(n-1)/n."""
    if n <= 1:
        return 0.0
    return 2.0 * _harmonic(n - 1) - 2.0 * (n - 1) / n


class _TreeBuilder:
    """Grows one isolation tree into flat arrays for vectorized traversal."""

    def __init__(self, data: np.ndarray, rng: np.random.Generator, height_limit: int):
        self.data = data
        self.rng = rng
        self.limit = height_limit
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.leaf_path: list[float] = []

    def grow(self, idx: np.ndarray, depth: int) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.leaf_path.append(0.0)

        size = len(idx)
        if size <= 1 or depth >= self.limit:
            self.leaf_path[node] = depth + average_path_length(size)
            return node
        sub = self.data[idx]
        lo = sub.min(axis=0)
        hi = sub.max(axis=0)
        splittable = np.flatnonzero(hi > lo)
        if splittable.size == 0:  # all remaining points coincide
            self.leaf_path[node] = depth + average_path_length(size)
            return node

        feat = int(self.rng.choice(splittable))
        s = float(self.rng.uniform(lo[feat], hi[feat]))
        mask = sub[:, feat] < s
        self.feature[node] = feat
        self.threshold[node] = s
        self.left[node] = self.grow(idx[mask], depth + 1)
        self.right[node] = self.grow(idx[~mask], depth + 1)
        return node

    def arrays(self) -> tuple[np.ndarray, ...]:
        return (
            np.array(self.feature, dtype=np.int64),
            np.array(self.threshold),
            np.array(self.left, dtype=np.int64),
            np.array(self.right, dtype=np.int64),
            np.array(self.leaf_path),
        )


def _tree_paths(tree: tuple[np.ndarray, ...], pts: np.ndarray) -> np.ndarray:
    """Path length of every point through one flattened tree."""
    feature, threshold, left, right, leaf_path = tree
    node = np.zeros(len(pts), dtype=np.int64)
    out = np.zeros(len(pts))
    active = np.arange(len(pts))
    while active.size:
        cur = node[active]
        feat = feature[cur]
        at_leaf = feat < 0
        done = active[at_leaf]
        out[done] = leaf_path[node[done]]
        active = active[~at_leaf]
        if not active.size:
            break
        cur = cur[~at_leaf]
        go_left = pts[active, feature[cur]] < threshold[cur]
        node[active] = np.where(go_left, left[cur], right[cur])
    return out


def iforest_scores(
    ds: Dataset,
    n_trees: int = 100,
    subsample: int | None = None,
    seed: int = 0,
) -> np.ndarray:
    """Isolation-forest scores 2^(-E[h] / c(subsample)), in (0, 1).

    Deterministic for a fixed seed: each tree draws from its own generator
    spawned from one seed sequence, so tree count changes do not reshuffle
    earlier trees.
    """
    n = ds.count
    if subsample is None:
        subsample = min(256, n)
    if n_trees < 1:
        raise ConfigError(f"n_trees must be >= 1, got {n_trees}")
    if not 2 <= subsample <= n:
        raise ConfigError(f"subsample must be in [2, {n}], got {subsample}")

    pts = ds.points
    height_limit = math.ceil(math.log2(subsample))
    paths = np.zeros(n)
    for child in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child)
        sample = rng.choice(n, size=subsample, replace=False)
        builder = _TreeBuilder(pts, rng, height_limit)
        builder.grow(sample, 0)
        paths += _tree_paths(builder.arrays(), pts)
    mean_path = paths / n_trees
    return 2.0 ** (-mean_path / average_path_length(subsample))
