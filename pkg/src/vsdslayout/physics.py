"""Planar inertia of a layout about its own mass centroid.

Components are thin bodies lying in the plate plane (c_z = 0): disks for
cylinders, plates for cuboids. Units are kg and mm, inertias kg·mm².
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .catalog import LayoutInstance
from .geometry import DISK, PlacedShape

__all__ = [
    "InertiaTriple",
    "Centroid",
    "local_inertia",
    "global_inertia",
    "system_centroid",
    "total_inertia",
    "inertia_components",
]


@dataclass(frozen=True)
class InertiaTriple:
    ix: float
    iy: float
    iz: float

    def __iter__(self):
        return iter((self.ix, self.iy, self.iz))


@dataclass(frozen=True)
class Centroid:
    x: float
    y: float
    z: float
    mass: float


@njit(cache=True)
def local_terms(kind, r, hx, hy, m):
    if kind == DISK:
        ix = m * r * r / 4.0
        return ix, ix, 2.0 * ix
    a = 2.0 * hx
    b = 2.0 * hy
    ix = m * b * b / 12.0
    iy = m * a * a / 12.0
    return ix, iy, ix + iy


@njit(cache=True)
def global_terms(ix_loc, iy_loc, iz_loc, m, cx, cy, alpha):
    c2 = math.cos(alpha) ** 2
    s2 = math.sin(alpha) ** 2
    ix = ix_loc * c2 + iy_loc * s2 + m * cy * cy
    iy = iy_loc * c2 + ix_loc * s2 + m * cx * cx
    iz = iz_loc + m * (cx * cx + cy * cy)
    return ix, iy, iz


@njit(cache=True)
def centroid_of(x, y, mass, n):
    m = 0.0
    sx = 0.0
    sy = 0.0
    for i in range(n):
        m += mass[i]
        sx += mass[i] * x[i]
        sy += mass[i] * y[i]
    return sx / m, sy / m, m


@njit(cache=True)
def centroid_frame_inertia(kind, x, y, r, hx, hy, ang, mass, n):
    """Huygens-corrected (I_x', I_y', I_z') of ``n`` packed shapes."""
    sx = 0.0
    sy = 0.0
    sz = 0.0
    for i in range(n):
        lx, ly, lz = local_terms(kind[i], r[i], hx[i], hy[i], mass[i])
        gx, gy, gz = global_terms(lx, ly, lz, mass[i], x[i], y[i], ang[i])
        sx += gx
        sy += gy
        sz += gz
    xc, yc, m = centroid_of(x, y, mass, n)
    return sx - m * yc * yc, sy - m * xc * xc, sz - m * (xc * xc + yc * yc)


def local_inertia(s: PlacedShape, mass: float) -> InertiaTriple:
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass}")
    hx, hy = s.half_extents
    return InertiaTriple(*local_terms(s.kind, s.radius, hx, hy, mass))


def global_inertia(s: PlacedShape, mass: float, local: InertiaTriple | None = None) -> InertiaTriple:
    """Inertia about the plate axes through the container center."""
    if local is None:
        local = local_inertia(s, mass)
    alpha = 0.0 if s.is_disk else s.orientation
    return InertiaTriple(*global_terms(local.ix, local.iy, local.iz, mass, s.center[0], s.center[1], alpha))


def system_centroid(layout: LayoutInstance) -> Centroid:
    if len(layout) == 0:
        raise ValueError("layout is empty")
    _, x, y, _, _, _, _, mass, _ = layout.arrays()
    xc, yc, m = centroid_of(x, y, mass, len(layout))
    return Centroid(float(xc), float(yc), 0.0, float(m))


def inertia_components(layout: LayoutInstance) -> InertiaTriple:
    if len(layout) == 0:
        raise ValueError("layout is empty")
    kind, x, y, r, hx, hy, ang, mass, _ = layout.arrays()
    ang = np.where(kind == DISK, 0.0, ang)
    return InertiaTriple(*centroid_frame_inertia(kind, x, y, r, hx, hy, ang, mass, len(layout)))


def total_inertia(layout: LayoutInstance) -> float:
    """Objective: I_x' + I_y' + I_z' about the layout centroid."""
    return float(sum(inertia_components(layout)))
