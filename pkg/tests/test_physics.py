import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import discretized_inertia, random_shape
from vsdslayout.catalog import LayoutInstance, PlacedPart
from vsdslayout.geometry import PlacedShape
from vsdslayout.physics import global_inertia, inertia_components, local_inertia, system_centroid, total_inertia


def layout_of(shapes, masses):
    return LayoutInstance(tuple(PlacedPart(s, m, "diverse", f"c{i}") for i, (s, m) in enumerate(zip(shapes, masses))))


def random_layout(rng, n=None):
    n = n or int(rng.integers(1, 7))
    shapes = [random_shape(rng, spread=8.0) for _ in range(n)]
    return layout_of(shapes, rng.uniform(0.5, 20.0, n))


# --- local -------------------------------------------------------------------

def test_disk_local():
    assert tuple(local_inertia(PlacedShape.disk((7, 1), 2), 1)) == pytest.approx((1, 1, 2))


def test_plate_local():
    assert tuple(local_inertia(PlacedShape.rectangle((0, 0), 2, 2), 3)) == pytest.approx((1, 1, 2))


def test_plate_local_uses_opposite_sides():
    # I_x'' uses the side along y, I_y'' the side along x
    ix, iy, iz = local_inertia(PlacedShape.rectangle((0, 0), 6, 2), 12)
    assert (ix, iy, iz) == pytest.approx((4, 36, 40))


def test_local_rejects_nonpositive_mass():
    with pytest.raises(ValueError):
        local_inertia(PlacedShape.disk((0, 0), 1), 0)


def test_perpendicular_axis_identity():
    rng = np.random.default_rng(0)
    for _ in range(200):
        ix, iy, iz = local_inertia(random_shape(rng), rng.uniform(0.1, 10))
        assert iz == pytest.approx(ix + iy, rel=1e-14)


# --- global ------------------------------------------------------------------

def test_global_equals_local_at_origin_unrotated():
    s = PlacedShape.rectangle((0, 0), 3, 1)
    assert tuple(global_inertia(s, 2)) == pytest.approx(tuple(local_inertia(s, 2)))


def test_disk_parallel_axis():
    s, m = PlacedShape.disk((3, 4), 1.5), 2.0
    loc = local_inertia(s, m)
    g = global_inertia(s, m)
    assert g.iz == pytest.approx(loc.iz + 25 * m)
    assert g.ix == pytest.approx(loc.ix + 16 * m)
    assert g.iy == pytest.approx(loc.iy + 9 * m)


def test_quarter_turn_swaps_plate_terms():
    s = PlacedShape.rectangle((0, 0), 6, 2, math.pi / 2)
    loc = local_inertia(s, 12)
    g = global_inertia(s, 12)
    assert (g.ix, g.iy) == pytest.approx((loc.iy, loc.ix))


# --- centroid ----------------------------------------------------------------

def test_single_component_centroid():
    c = system_centroid(layout_of([PlacedShape.disk((5, 0), 1)], [3]))
    assert (c.x, c.y, c.z, c.mass) == pytest.approx((5, 0, 0, 3))


def test_symmetric_pair_centroid():
    c = system_centroid(layout_of([PlacedShape.disk((-1, 0), 1), PlacedShape.disk((1, 0), 1)], [2, 2]))
    assert (c.x, c.y) == pytest.approx((0, 0))


def test_centroid_against_weighted_mean():
    rng = np.random.default_rng(1)
    for _ in range(50):
        lay = random_layout(rng)
        pts = np.array([p.shape.center for p in lay.parts])
        m = np.array([p.mass for p in lay.parts])
        c = system_centroid(lay)
        assert (c.x, c.y) == pytest.approx(tuple((pts * m[:, None]).sum(0) / m.sum()), rel=1e-12, abs=1e-12)


def test_empty_layout_errors():
    with pytest.raises(ValueError):
        system_centroid(LayoutInstance(()))
    with pytest.raises(ValueError):
        total_inertia(LayoutInstance(()))


# --- objective ---------------------------------------------------------------

@pytest.mark.parametrize("center", [(0, 0), (12, -7), (-300, 41)])
def test_single_disk_anywhere(center):
    assert total_inertia(layout_of([PlacedShape.disk(center, 3)], [2])) == pytest.approx(2 * 9, rel=1e-12)


def test_symmetric_disk_pair():
    r, m, d = 1.5, 2.0, 4.0
    lay = layout_of([PlacedShape.disk((-d, 0), r), PlacedShape.disk((d, 0), r)], [m, m])
    expected = 2 * m * r * r + 4 * m * d * d
    assert total_inertia(lay) == pytest.approx(expected, rel=1e-12)
    assert discretized_inertia(lay.shapes, [m, m]) == pytest.approx(expected, rel=5e-3)


def test_matches_discretized_mass_on_random_layouts():
    rng = np.random.default_rng(2)
    for _ in range(10):
        lay = random_layout(rng)
        masses = [p.mass for p in lay.parts]
        assert total_inertia(lay) == pytest.approx(discretized_inertia(lay.shapes, masses), rel=5e-3)


def test_centroid_frame_terms_nonnegative():
    rng = np.random.default_rng(3)
    for _ in range(100):
        ix, iy, iz = inertia_components(random_layout(rng))
        assert min(ix, iy, iz) >= -1e-9 * max(1.0, iz)


finite = st.floats(-500, 500, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), finite, finite)
def test_translation_invariance(seed, dx, dy):
    lay = random_layout(np.random.default_rng(seed))
    f0 = total_inertia(lay)
    assert total_inertia(lay.moved(dx, dy)) == pytest.approx(f0, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * math.pi), finite, finite)
def test_common_rotation_invariance(seed, theta, px, py):
    lay = random_layout(np.random.default_rng(seed))
    f0 = total_inertia(lay)
    assert total_inertia(lay.moved(rotation=theta, pivot=(px, py))) == pytest.approx(f0, rel=1e-9)
