"""Layout constraints as non-negative violation measures.

h1  pairwise overlap area between parts           (mm²)
h2  overlap area between parts and exclusion zones (mm²)
h3  part area lying outside the container          (mm²)
g1  centroid distance to the target beyond delta   (mm)
g3  fuel/energy centroid distance shortfall        (mm)

A layout is feasible when the weighted total is at most ``FEASIBILITY_TOL``.
By default areas are divided by the container area and distances by the
container radius before summing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .catalog import KINDS, LayoutInstance
from .geometry import ContainerDisk, PlacedShape, outside_area, pair_overlap
from .physics import centroid_frame_inertia, centroid_of

__all__ = [
    "FEASIBILITY_TOL",
    "ConstraintConfig",
    "Violations",
    "overlap_constraint",
    "exclusion_constraint",
    "containment_constraint",
    "centroid_constraint",
    "functional_constraint",
    "evaluate_all",
]

FEASIBILITY_TOL = 1e-9
FUEL = KINDS.index("fuel")
ENERGY = KINDS.index("energy")


@dataclass(frozen=True)
class ConstraintConfig:
    delta: float
    d_min: float = 300.0
    exclusion_zones: tuple[PlacedShape, ...] = ()
    target_centroid: tuple[float, float] = (0.0, 0.0)
    area_weight: float = 1.0
    distance_weight: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.d_min < 0:
            raise ValueError(f"d_min must be non-negative, got {self.d_min}")

    @classmethod
    def for_container(cls, container: ContainerDisk, *, delta_fraction: float = 0.01, normalize: bool = True, **kw):
        """Defaults tied to the container: delta = 1% of its radius, unit-normalizing weights."""
        if normalize:
            kw.setdefault("area_weight", 1.0 / container.area)
            kw.setdefault("distance_weight", 1.0 / container.outer_radius)
        return cls(delta=delta_fraction * container.outer_radius, **kw)

    @property
    def zone_arrays(self) -> tuple[np.ndarray, ...]:
        z = self.exclusion_zones
        return (
            np.array([s.kind for s in z], dtype=np.int64),
            np.array([s.center[0] for s in z], dtype=np.float64),
            np.array([s.center[1] for s in z], dtype=np.float64),
            np.array([s.radius for s in z], dtype=np.float64),
            np.array([s.half_extents[0] for s in z], dtype=np.float64),
            np.array([s.half_extents[1] for s in z], dtype=np.float64),
            np.array([s.orientation for s in z], dtype=np.float64),
        )


@dataclass(frozen=True)
class Violations:
    h1_overlap: float = 0.0
    h2_exclusion: float = 0.0
    h3_containment: float = 0.0
    g1_centroid: float = 0.0
    g3_functional: float = 0.0
    area_weight: float = field(default=1.0, repr=False)
    distance_weight: float = field(default=1.0, repr=False)

    FIELDS = ("h1_overlap", "h2_exclusion", "h3_containment", "g1_centroid", "g3_functional")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in self.FIELDS)

    @property
    def total(self) -> float:
        return weighted_total(*self.as_tuple(), self.area_weight, self.distance_weight)

    @property
    def feasible(self) -> bool:
        return self.total <= FEASIBILITY_TOL


@njit(cache=True)
def weighted_total(h1, h2, h3, g1, g3, wa, wd):
    return wa * (h1 + h2 + h3) + wd * (g1 + g3)


@njit(cache=True)
def overlap_sum(kind, x, y, r, hx, hy, ang, n):
    acc = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            acc += pair_overlap(
                kind[i], x[i], y[i], r[i], hx[i], hy[i], ang[i],
                kind[j], x[j], y[j], r[j], hx[j], hy[j], ang[j],
            )
    return acc


@njit(cache=True)
def exclusion_sum(kind, x, y, r, hx, hy, ang, n, zk, zx, zy, zr, zhx, zhy, za):
    acc = 0.0
    for i in range(n):
        for j in range(zk.shape[0]):
            acc += pair_overlap(
                kind[i], x[i], y[i], r[i], hx[i], hy[i], ang[i],
                zk[j], zx[j], zy[j], zr[j], zhx[j], zhy[j], za[j],
            )
    return acc


@njit(cache=True)
def containment_sum(kind, x, y, r, hx, hy, ang, n, big_r):
    acc = 0.0
    for i in range(n):
        acc += outside_area(kind[i], x[i], y[i], r[i], hx[i], hy[i], ang[i], big_r)
    return acc


@njit(cache=True)
def centroid_excess(x, y, mass, n, tx, ty, delta):
    xc, yc, _ = centroid_of(x, y, mass, n)
    return max(math.hypot(xc - tx, yc - ty) - delta, 0.0)


@njit(cache=True)
def functional_sum(x, y, cls, n, d_min):
    acc = 0.0
    for i in range(n):
        if cls[i] != ENERGY:
            continue
        for j in range(n):
            if cls[j] != FUEL:
                continue
            acc += max(d_min - math.hypot(x[i] - x[j], y[i] - y[j]), 0.0)
    return acc


@njit(cache=True)
def evaluate_packed(kind, x, y, r, hx, hy, ang, mass, cls, n,
                    big_r, zk, zx, zy, zr, zhx, zhy, za, tx, ty, delta, d_min):
    """Objective and the five violation measures of ``n`` packed parts."""
    ix, iy, iz = centroid_frame_inertia(kind, x, y, r, hx, hy, ang, mass, n)
    h1 = overlap_sum(kind, x, y, r, hx, hy, ang, n)
    h2 = exclusion_sum(kind, x, y, r, hx, hy, ang, n, zk, zx, zy, zr, zhx, zhy, za)
    h3 = containment_sum(kind, x, y, r, hx, hy, ang, n, big_r)
    g1 = centroid_excess(x, y, mass, n, tx, ty, delta)
    g3 = functional_sum(x, y, cls, n, d_min)
    return ix + iy + iz, h1, h2, h3, g1, g3


def overlap_constraint(layout: LayoutInstance) -> float:
    kind, x, y, r, hx, hy, ang, _, _ = layout.arrays()
    return float(overlap_sum(kind, x, y, r, hx, hy, ang, len(layout)))


def exclusion_constraint(layout: LayoutInstance, zones) -> float:
    zones = tuple(zones)
    if not zones or len(layout) == 0:
        return 0.0
    kind, x, y, r, hx, hy, ang, _, _ = layout.arrays()
    za = ConstraintConfig(delta=1.0, exclusion_zones=zones).zone_arrays
    return float(exclusion_sum(kind, x, y, r, hx, hy, ang, len(layout), *za))


def containment_constraint(layout: LayoutInstance, container: ContainerDisk) -> float:
    if len(layout) == 0:
        return 0.0
    moved = layout.moved(-container.center[0], -container.center[1])
    kind, x, y, r, hx, hy, ang, _, _ = moved.arrays()
    return float(containment_sum(kind, x, y, r, hx, hy, ang, len(layout), container.outer_radius))


def centroid_constraint(layout: LayoutInstance, cfg: ConstraintConfig) -> float:
    if len(layout) == 0:
        raise ValueError("layout is empty")
    _, x, y, _, _, _, _, mass, _ = layout.arrays()
    tx, ty = cfg.target_centroid
    return float(centroid_excess(x, y, mass, len(layout), tx, ty, cfg.delta))


def functional_constraint(layout: LayoutInstance, cfg: ConstraintConfig) -> float:
    if len(layout) == 0:
        return 0.0
    _, x, y, _, _, _, _, _, cls = layout.arrays()
    return float(functional_sum(x, y, cls, len(layout), cfg.d_min))


def evaluate_all(layout: LayoutInstance, cfg: ConstraintConfig, container: ContainerDisk) -> Violations:
    return Violations(
        overlap_constraint(layout),
        exclusion_constraint(layout, cfg.exclusion_zones),
        containment_constraint(layout, container),
        centroid_constraint(layout, cfg),
        functional_constraint(layout, cfg),
        area_weight=cfg.area_weight,
        distance_weight=cfg.distance_weight,
    )
