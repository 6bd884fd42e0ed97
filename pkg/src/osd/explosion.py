"""One-shot outward relocation of object-blocks away from a virtual bomb.

Each block is summarized by a particle (its centroid, weighing the block's
object count).  A virtual bomb placed at the particles' mean exerts an
inverse-distance force on every particle; impulse-momentum bookkeeping with
friction 0.5 collapses the ensuing motion into a single displacement
F*F * T^2 / M^2 per block, applied rigidly to all of the block's objects.
Small blocks therefore fly far while heavy blocks barely move.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .blocks import BlockPartition
from .dataset import Dataset
from .errors import ConfigError
from .knngraph import KnnGraph, build

__all__ = [
    "Particle",
    "ExplosionParams",
    "particles_of",
    "bomb_position",
    "constant_g",
    "shock_force",
    "displacement",
    "explode",
]

SIGN_MODES = ("corrected", "literal")
DIRECTION_MODES = ("corrected", "literal")


@dataclass(frozen=True)
class Particle:
    """A block's centroid with the block's object count as its mass."""

    position: np.ndarray
    mass: int
    block_id: int


@dataclass(frozen=True)
class ExplosionParams:
    """Knobs for the explosion and repulsion passes.

    sign_mode controls how the componentwise square in the displacement
    law treats signs: "corrected" (default) keeps each component's sign so
    blocks move away from the bomb; "literal" squares verbatim, discarding
    signs.  direction_mode plays the same role for the repulsion force
    orientation.  epsilon guards the inverse-distance singularities and
    defaults to 1e-12 times the dataset's bounding-box diagonal.
    """

    k: int
    T: float = 1.0
    mu: float = 0.5
    sign_mode: str = "corrected"
    direction_mode: str = "corrected"
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.T <= 0:
            raise ConfigError(f"T must be positive, got {self.T}")
        if self.sign_mode not in SIGN_MODES:
            raise ConfigError(f"sign_mode must be one of {SIGN_MODES}")
        if self.direction_mode not in DIRECTION_MODES:
            raise ConfigError(f"direction_mode must be one of {DIRECTION_MODES}")

    def resolve_epsilon(self, ds: Dataset) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return 1e-12 * ds.diameter()


def particles_of(ds: Dataset, partition: BlockPartition) -> list[Particle]:
    """One particle per block: centroid position, object count as mass."""
    pts = ds.points
    return [
        Particle(pts[members].mean(axis=0), int(partition.masses[b]), b)
        for b, members in enumerate(partition.blocks)
    ]


def bomb_position(particles: list[Particle]) -> np.ndarray:
    """Unweighted mean of particle positions (masses play no role here)."""
    return np.mean([p.position for p in particles], axis=0)


def constant_g(ds: Dataset, g: KnnGraph) -> float:
    """Force-scale constant: mean k-th-nearest-neighbor distance."""
    return float(g.neighbor_dist[:, -1].mean())


def shock_force(
    particle: Particle, theta: np.ndarray, g_const: float, eps: float
) -> np.ndarray:
    """Inverse-distance force on a particle, directed away from the bomb.

    F = G * (B - theta) / ||B - theta||^2, zero within eps of the bomb.
    """
    diff = particle.position - theta
    r2 = float(np.sum(diff * diff))
    if r2 <= eps * eps or r2 == 0.0:
        return np.zeros_like(diff)
    return g_const * diff / r2


def displacement(
    f: np.ndarray, T: float, mass: int, sign_mode: str = "corrected"
) -> np.ndarray:
    """Block displacement from a force: componentwise F*F * T^2 / M^2.

    "literal" squares each component verbatim (always nonnegative);
    "corrected" reapplies the component signs so motion points along F.
    Both agree whenever F has no negative component.
    """
    mag = f * f * (T * T) / (mass * mass)
    if sign_mode == "literal":
        return mag
    if sign_mode == "corrected":
        return np.sign(f) * mag
    raise ConfigError(f"sign_mode must be one of {SIGN_MODES}")


def explode(
    ds: Dataset,
    partition: BlockPartition,
    params: ExplosionParams,
    g_const: float | None = None,
    graph: KnnGraph | None = None,
    theta: np.ndarray | None = None,
) -> tuple[Dataset, list[Particle]]:
    """Translate every block by its displacement; return (moved dataset, particles).

    g_const is normally precomputed by the caller (pipelines already hold
    the k-NN graph); without it the graph is built here with params.k.
    theta overrides the bomb position (used by the random-bomb ablation).
    Masses and within-block geometry are preserved exactly.
    """
    if g_const is None:
        g_const = constant_g(ds, graph if graph is not None else build(ds, params.k))
    if g_const <= 0.0:
        warnings.warn("degenerate scale: G = 0, substituting G = 1", stacklevel=2)
        g_const = 1.0

    particles = particles_of(ds, partition)
    if theta is None:
        theta = bomb_position(particles)
    eps = params.resolve_epsilon(ds)

    new_pts = ds.points.copy()
    moved: list[Particle] = []
    for p in particles:
        f = shock_force(p, theta, g_const, eps)
        s = displacement(f, params.T, p.mass, params.sign_mode)
        new_pts[partition.blocks[p.block_id]] += s
        moved.append(replace(p, position=p.position + s))
    return Dataset(new_pts), moved
