"""Exact planar geometry for placed disks and rectangles.

All kernels work on plain floats / float arrays and are compiled with numba so
the same code path serves the public API, the constraint functions and the
population evaluator. Lengths are in mm, areas in mm².
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "DISK",
    "RECTANGLE",
    "ContainerDisk",
    "PlacedShape",
    "centroid_distance",
    "containment_deficit",
    "convex_polygon_intersection_area",
    "disk_disk_overlap_area",
    "disk_polygon_overlap_area",
    "polygon_area",
    "shape_overlap_area",
]

DISK = 0
RECTANGLE = 1

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PlacedShape:
    """A disk or rectangle placed in the plate frame.

    ``half_extents`` are measured along the rectangle's own axes before the
    rotation by ``orientation`` (radians, counterclockwise).
    """

    kind: int
    center: tuple[float, float]
    radius: float = 0.0
    half_extents: tuple[float, float] = (0.0, 0.0)
    orientation: float = 0.0

    def __post_init__(self):
        if self.kind == DISK:
            if not self.radius > 0:
                raise ValueError(f"disk radius must be positive, got {self.radius}")
        elif self.kind == RECTANGLE:
            hx, hy = self.half_extents
            if not (hx > 0 and hy > 0):
                raise ValueError(f"rectangle half extents must be positive, got {self.half_extents}")
            object.__setattr__(self, "orientation", float(self.orientation) % TWO_PI)
        else:
            raise ValueError(f"unknown shape kind {self.kind!r}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @classmethod
    def disk(cls, center, radius: float) -> PlacedShape:
        return cls(DISK, tuple(center), radius=float(radius))

    @classmethod
    def rectangle(cls, center, width: float, height: float, orientation: float = 0.0) -> PlacedShape:
        return cls(RECTANGLE, tuple(center), half_extents=(width / 2.0, height / 2.0), orientation=orientation)

    @property
    def is_disk(self) -> bool:
        return self.kind == DISK

    @property
    def area(self) -> float:
        if self.kind == DISK:
            return math.pi * self.radius**2
        return 4.0 * self.half_extents[0] * self.half_extents[1]

    @property
    def bounding_radius(self) -> float:
        if self.kind == DISK:
            return self.radius
        return math.hypot(*self.half_extents)

    def vertices(self) -> np.ndarray:
        """Counterclockwise corners of a rectangle, shape (4, 2)."""
        if self.kind != RECTANGLE:
            raise ValueError("only rectangles have vertices")
        return rect_vertices(self.center[0], self.center[1], self.half_extents[0], self.half_extents[1], self.orientation)

    def _packed(self):
        hx, hy = self.half_extents
        return (self.kind, self.center[0], self.center[1], self.radius, hx, hy, self.orientation)


@dataclass(frozen=True)
class ContainerDisk:
    outer_radius: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.outer_radius > 0:
            raise ValueError(f"container radius must be positive, got {self.outer_radius}")

    @property
    def area(self) -> float:
        return math.pi * self.outer_radius**2


# ---------------------------------------------------------------------------
# compiled kernels


@njit(cache=True)
def rect_vertices(cx, cy, hx, hy, angle):
    c = math.cos(angle)
    s = math.sin(angle)
    out = np.empty((4, 2))
    lx = (-hx, hx, hx, -hx)
    ly = (-hy, -hy, hy, hy)
    for i in range(4):
        out[i, 0] = cx + c * lx[i] - s * ly[i]
        out[i, 1] = cy + s * lx[i] + c * ly[i]
    return out


@njit(cache=True)
def _lens_area(d, r1, r2):
    if d >= r1 + r2:
        return 0.0
    rmin = min(r1, r2)
    if d <= abs(r1 - r2):
        return math.pi * rmin * rmin
    c1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)
    c2 = (d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)
    c1 = min(1.0, max(-1.0, c1))
    c2 = min(1.0, max(-1.0, c2))
    k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)
    area = r1 * r1 * math.acos(c1) + r2 * r2 * math.acos(c2) - 0.5 * math.sqrt(max(k, 0.0))
    return min(max(area, 0.0), math.pi * rmin * rmin)


@njit(cache=True)
def _shoelace(pts, n):
    acc = 0.0
    for i in range(n):
        j = (i + 1) % n
        acc += pts[i, 0] * pts[j, 1] - pts[j, 0] * pts[i, 1]
    return 0.5 * acc


@njit(cache=True)
def _convex_clip_area(p, q):
    # Sutherland-Hodgman: clip p by every edge of q, both counterclockwise.
    n = p.shape[0]
    m = q.shape[0]
    if n < 3 or m < 3:
        return 0.0
    cap = 2 * (n + m) + 4
    cur = np.empty((cap, 2))
    nxt = np.empty((cap, 2))
    for i in range(n):
        cur[i, 0] = p[i, 0]
        cur[i, 1] = p[i, 1]
    count = n
    for e in range(m):
        ax = q[e, 0]
        ay = q[e, 1]
        bx = q[(e + 1) % m, 0]
        by = q[(e + 1) % m, 1]
        ex = bx - ax
        ey = by - ay
        out = 0
        for i in range(count):
            sx = cur[i - 1 if i > 0 else count - 1, 0]
            sy = cur[i - 1 if i > 0 else count - 1, 1]
            px = cur[i, 0]
            py = cur[i, 1]
            ds = ex * (sy - ay) - ey * (sx - ax)
            dp = ex * (py - ay) - ey * (px - ax)
            if dp >= 0.0:
                if ds < 0.0:
                    t = ds / (ds - dp)
                    nxt[out, 0] = sx + t * (px - sx)
                    nxt[out, 1] = sy + t * (py - sy)
                    out += 1
                nxt[out, 0] = px
                nxt[out, 1] = py
                out += 1
            elif ds >= 0.0:
                t = ds / (ds - dp)
                nxt[out, 0] = sx + t * (px - sx)
                nxt[out, 1] = sy + t * (py - sy)
                out += 1
        count = out
        if count < 3:
            return 0.0
        cur, nxt = nxt, cur
    return max(_shoelace(cur, count), 0.0)


@njit(cache=True)
def _segment_disk_area(ax, ay, bx, by, r):
    # Signed area of the disk (origin, r) intersected with triangle (origin, a, b).
    dx = bx - ax
    dy = by - ay
    qa = dx * dx + dy * dy
    ts = np.empty(4)
    nt = 0
    ts[nt] = 0.0
    nt += 1
    if qa > 0.0:
        qb = ax * dx + ay * dy
        qc = ax * ax + ay * ay - r * r
        disc = qb * qb - qa * qc
        if disc > 0.0:
            sq = math.sqrt(disc)
            t1 = (-qb - sq) / qa
            t2 = (-qb + sq) / qa
            if 0.0 < t1 < 1.0:
                ts[nt] = t1
                nt += 1
            if 0.0 < t2 < 1.0:
                ts[nt] = t2
                nt += 1
    ts[nt] = 1.0
    nt += 1
    total = 0.0
    for k in range(nt - 1):
        px = ax + ts[k] * dx
        py = ay + ts[k] * dy
        qx = ax + ts[k + 1] * dx
        qy = ay + ts[k + 1] * dy
        mx = 0.5 * (px + qx)
        my = 0.5 * (py + qy)
        cross = px * qy - py * qx
        if mx * mx + my * my <= r * r:
            total += 0.5 * cross
        else:
            total += 0.5 * r * r * math.atan2(cross, px * qx + py * qy)
    return total


@njit(cache=True)
def _disk_polygon_area(cx, cy, r, poly):
    n = poly.shape[0]
    if n < 3:
        return 0.0
    if abs(_shoelace(poly, n)) <= 0.0:
        return 0.0
    acc = 0.0
    for i in range(n):
        j = (i + 1) % n
        acc += _segment_disk_area(poly[i, 0] - cx, poly[i, 1] - cy, poly[j, 0] - cx, poly[j, 1] - cy, r)
    return min(abs(acc), math.pi * r * r)


@njit(cache=True)
def _rect_fully_inside_disk(verts, cx, cy, r):
    for i in range(verts.shape[0]):
        if math.hypot(verts[i, 0] - cx, verts[i, 1] - cy) > r:
            return False
    return True


@njit(cache=True)
def _disk_clear_of_rect(cx, cy, r, x, y, hx, hy, a):
    # distance from the disk center to the rectangle, in the rectangle's frame
    c = math.cos(a)
    s = math.sin(a)
    u = abs(c * (cx - x) + s * (cy - y)) - hx
    v = abs(-s * (cx - x) + c * (cy - y)) - hy
    u = max(u, 0.0)
    v = max(v, 0.0)
    return u * u + v * v >= r * r


@njit(cache=True)
def pair_overlap(k1, x1, y1, r1, hx1, hy1, a1, k2, x2, y2, r2, hx2, hy2, a2):
    """Overlap area of two packed shapes (kind, x, y, radius, hx, hy, angle)."""
    b1 = r1 if k1 == DISK else math.sqrt(hx1 * hx1 + hy1 * hy1)
    b2 = r2 if k2 == DISK else math.sqrt(hx2 * hx2 + hy2 * hy2)
    d = math.hypot(x2 - x1, y2 - y1)
    if d >= b1 + b2:
        return 0.0
    if k1 == DISK and k2 == DISK:
        return _lens_area(d, r1, r2)
    if k1 == DISK:
        if _disk_clear_of_rect(x1, y1, r1, x2, y2, hx2, hy2, a2):
            return 0.0
        return _disk_polygon_area(x1, y1, r1, rect_vertices(x2, y2, hx2, hy2, a2))
    if k2 == DISK:
        if _disk_clear_of_rect(x2, y2, r2, x1, y1, hx1, hy1, a1):
            return 0.0
        return _disk_polygon_area(x2, y2, r2, rect_vertices(x1, y1, hx1, hy1, a1))
    return _convex_clip_area(rect_vertices(x1, y1, hx1, hy1, a1), rect_vertices(x2, y2, hx2, hy2, a2))


@njit(cache=True)
def outside_area(k, x, y, r, hx, hy, a, big_r):
    """Area of a packed shape lying outside the disk of radius ``big_r`` at the origin."""
    d = math.hypot(x, y)
    if k == DISK:
        if d + r <= big_r:
            return 0.0
        return max(math.pi * r * r - _lens_area(d, r, big_r), 0.0)
    verts = rect_vertices(x, y, hx, hy, a)
    if _rect_fully_inside_disk(verts, 0.0, 0.0, big_r):
        return 0.0
    return max(4.0 * hx * hy - _disk_polygon_area(0.0, 0.0, big_r, verts), 0.0)


# ---------------------------------------------------------------------------
# public API


def _as_polygon(p) -> np.ndarray:
    arr = np.ascontiguousarray(p, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("polygon must be an (n, 2) array of vertices")
    return arr


def polygon_area(p) -> float:
    """Unsigned shoelace area of a simple polygon."""
    arr = _as_polygon(p)
    if arr.shape[0] < 3:
        return 0.0
    return abs(float(_shoelace(arr, arr.shape[0])))


def disk_disk_overlap_area(a: PlacedShape, b: PlacedShape) -> float:
    if not (a.is_disk and b.is_disk):
        raise ValueError("both shapes must be disks")
    d = math.hypot(b.center[0] - a.center[0], b.center[1] - a.center[1])
    return float(_lens_area(d, a.radius, b.radius))


def convex_polygon_intersection_area(p, q) -> float:
    """Area of the intersection of two counterclockwise convex polygons."""
    p = _as_polygon(p)
    q = _as_polygon(q)
    if polygon_area(p) <= 0.0 or polygon_area(q) <= 0.0:
        return 0.0
    return float(_convex_clip_area(p, q))


def disk_polygon_overlap_area(d: PlacedShape, p) -> float:
    if not d.is_disk:
        raise ValueError("first argument must be a disk")
    return float(_disk_polygon_area(d.center[0], d.center[1], d.radius, _as_polygon(p)))


def shape_overlap_area(a: PlacedShape, b: PlacedShape) -> float:
    return float(pair_overlap(*a._packed(), *b._packed()))


def containment_deficit(s: PlacedShape, c: ContainerDisk) -> float:
    """Area of ``s`` lying outside the container disk."""
    k, x, y, r, hx, hy, a = s._packed()
    return float(outside_area(k, x - c.center[0], y - c.center[1], r, hx, hy, a, c.outer_radius))


def centroid_distance(a: PlacedShape, b: PlacedShape) -> float:
    return math.hypot(b.center[0] - a.center[0], b.center[1] - a.center[1])
