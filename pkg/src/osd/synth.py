"""Seeded generators for cluster-plus-outlier benchmarks.

Used by the property tests and the robustness experiments; everything is
a pure function of its seed.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, Labels
from .errors import ConfigError

__all__ = ["gen_clusters_outliers", "gen_imbalance_series"]

_MAX_TRIES = 10_000


def _place_centers(
    rng: np.random.Generator, n_clusters: int, dim: int, separation: float
) -> np.ndarray:
    """Uniform centers in a box, rejected until pairwise >= separation."""
    side = separation * max(2.0, 2.0 * n_clusters ** (1.0 / dim))
    centers: list[np.ndarray] = []
    for _ in range(_MAX_TRIES):
        cand = rng.uniform(0.0, side, size=dim)
        if all(np.linalg.norm(cand - c) >= separation for c in centers):
            centers.append(cand)
            if len(centers) == n_clusters:
                return np.array(centers)
    raise RuntimeError(
        f"could not place {n_clusters} centers {separation} apart "
        f"in {_MAX_TRIES} tries"
    )


def _draw_outliers(
    rng: np.random.Generator,
    n_outliers: int,
    bbox_lo: np.ndarray,
    bbox_hi: np.ndarray,
    centers: np.ndarray,
    keepout: np.ndarray,
) -> np.ndarray:
    """Uniform box draws, rejected within each center's keepout radius."""
    out = np.empty((n_outliers, len(bbox_lo)))
    for i in range(n_outliers):
        for _ in range(_MAX_TRIES):
            cand = rng.uniform(bbox_lo, bbox_hi)
            if np.all(np.linalg.norm(centers - cand, axis=1) >= keepout):
                out[i] = cand
                break
        else:
            raise RuntimeError(f"outlier {i}: rejection failed {_MAX_TRIES} times")
    return out


def gen_clusters_outliers(
    n_clusters: int,
    pts_per_cluster: int,
    n_outliers: int,
    dim: int,
    separation: float,
    seed: int,
) -> tuple[Dataset, Labels]:
    """Unit-spread Gaussian clusters plus uniform box outliers.

    Cluster centers are pairwise at least ``separation`` apart; outliers
    are drawn over the cluster points' bounding box and rejected within
    separation/4 of any center.  Rows are ordered cluster by cluster with
    outliers last; labels mark outliers with 1.
    """
    if n_clusters < 1 or pts_per_cluster < 1 or n_outliers < 0:
        raise ConfigError("counts must be positive (outliers may be 0)")
    if separation <= 0:
        raise ConfigError(f"separation must be positive, got {separation}")
    rng = np.random.default_rng(seed)
    centers = _place_centers(rng, n_clusters, dim, separation)
    clusters = [
        c + rng.standard_normal((pts_per_cluster, dim)) for c in centers
    ]
    normal = np.vstack(clusters)
    parts = [normal]
    if n_outliers > 0:
        keepout = np.full(n_clusters, separation / 4.0)
        parts.append(
            _draw_outliers(
                rng, n_outliers, normal.min(axis=0), normal.max(axis=0),
                centers, keepout,
            )
        )
    pts = np.vstack(parts)
    flags = np.zeros(len(pts), dtype=np.int8)
    flags[len(normal):] = 1
    return Dataset(pts), Labels(flags)


def gen_imbalance_series(
    levels: list[float],
    seed: int,
    dim: int = 2,
    pts_per_cluster: int = 150,
    outlier_frac: float = 0.05,
) -> list[tuple[Dataset, Labels]]:
    """Two-cluster datasets whose cluster density ratio sweeps over levels.

    Density scales as spread^-dim, so a level-L dataset keeps one cluster
    at unit spread and widens the other by L^(1/dim).  Each dataset adds
    ``outlier_frac`` uniform outliers over the cluster bounding box,
    rejected within 5 spreads of either center.  One derived seed per
    level keeps every dataset reproducible independently of the others.
    """
    for lv in levels:
        if lv < 1:
            raise ConfigError(f"imbalance level must be >= 1, got {lv}")
    out: list[tuple[Dataset, Labels]] = []
    for lv, child in zip(levels, np.random.SeedSequence(seed).spawn(len(levels))):
        rng = np.random.default_rng(child)
        spread = float(lv) ** (1.0 / dim)
        sep = 20.0 * (1.0 + spread)
        centers = np.zeros((2, dim))
        centers[1, 0] = sep
        dense = centers[0] + rng.standard_normal((pts_per_cluster, dim))
        sparse = centers[1] + spread * rng.standard_normal((pts_per_cluster, dim))
        normal = np.vstack([dense, sparse])
        n_out = max(1, round(outlier_frac * len(normal)))
        outliers = _draw_outliers(
            rng, n_out, normal.min(axis=0), normal.max(axis=0),
            centers, np.array([5.0, 5.0 * spread]),
        )
        pts = np.vstack([normal, outliers])
        flags = np.zeros(len(pts), dtype=np.int8)
        flags[len(normal):] = 1
        out.append((Dataset(pts), Labels(flags)))
    return out
