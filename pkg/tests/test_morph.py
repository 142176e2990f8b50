import math

import numpy as np
import pytest
from scipy import ndimage

from yieldgeom import analytic, morph
from yieldgeom._arrangement import boolean, region_predicate
from yieldgeom.errors import EmptyOpeningError, GeometryError
from yieldgeom.geom import ConvexPolygon, Disk, Rectangle, as_body, to_region


def raster(pred, box, n=1200):
    x0, y0, x1, y1 = box
    h = (x1 - x0) / n
    xs = x0 + (np.arange(n) + 0.5) * h
    ys = np.arange(y0 + 0.5 * h, y1, h)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return pred(np.column_stack([X.ravel(), Y.ravel()])).reshape(X.shape), h


def raster_close(mask, r, h):
    dil = ndimage.distance_transform_edt(~mask) * h <= r
    return ndimage.distance_transform_edt(dil) * h > r


def raster_open(mask, r, h):
    ero = ndimage.distance_transform_edt(mask) * h > r
    return ndimage.distance_transform_edt(~ero) * h <= r


def test_open_square_is_rounded():
    L, r = 3.0, 0.6
    reg = morph.open_r(Rectangle((0, 0), L, L), r)
    assert reg.area == pytest.approx(L * L - (4 - math.pi) * r * r, rel=1e-14)
    assert reg.perimeter == pytest.approx(4 * L - (8 - 2 * math.pi) * r, rel=1e-14)
    assert all(e.free and e.radius == pytest.approx(r) for e in reg.free_arcs())


def test_open_disk_is_unchanged():
    reg = morph.open_r(Disk((0, 0), 2), 1.0)
    assert reg.area == pytest.approx(4 * math.pi)


def test_opening_beyond_inradius_raises():
    with pytest.raises(EmptyOpeningError):
        morph.open_r(Rectangle((0, 0), 2, 1), 0.5)


def test_offset_directions():
    assert morph.offset(Rectangle((0, 0), 2, 2), 0.5, "inward").region.area == pytest.approx(1.0)
    assert morph.offset(Rectangle((0, 0), 2, 2), 2.0, "inward").region is None
    with pytest.raises(ValueError):
        morph.offset(Rectangle((0, 0), 2, 2), 0.5, "sideways")


def test_closing_two_squares_matches_closed_form():
    d, r = 1.3, 0.6
    c = morph.close_r([Rectangle((-d / 2, 0), 1, 1), Rectangle((d / 2, 0), 1, 1)], r)
    k = analytic.square_pair_closing(d, r)
    assert c.area == pytest.approx(k.area, rel=1e-12)
    assert c.perimeter == pytest.approx(k.perimeter, rel=1e-12)


def test_closing_far_particles_is_identity():
    parts = [Disk((0, 0), 0.5), Disk((3, 0), 0.5)]
    c = morph.close_r(parts, 0.6)
    assert c.area == pytest.approx(2 * math.pi * 0.25)


def test_closing_of_nothing():
    with pytest.raises(GeometryError):
        morph.close_r([], 0.5)


def test_closing_three_disks_against_raster():
    parts = [Disk((0, 0), 0.5), Disk((1.3, 0), 0.5), Disk((0.65, 1.1), 0.5)]
    r = 0.5
    c = morph.close_r(parts, r)
    ps = morph.ParticleSet(parts)
    mask, h = raster(lambda p: ps.min_sd(p) <= 0, (-1.5, -1.5, 2.8, 2.6))
    area = raster_close(mask, r, h).sum() * h * h
    assert c.area == pytest.approx(area, rel=3e-3)


def test_open_annulus_against_raster():
    dom, parts, r = Rectangle((0, 0), 3, 3), [Rectangle((0.6, 0), 1, 1)], 0.4
    reg = morph.open_annulus(dom, parts, r)
    ps = morph.ParticleSet(parts)
    b = as_body(dom)
    mask, h = raster(lambda p: (b.signed_distance(p) < 0) & (ps.min_sd(p) > 0), (-1.6, -1.6, 1.6, 1.6))
    area = raster_open(mask, r, h).sum() * h * h
    assert reg.area == pytest.approx(area, rel=3e-3)


def test_open_annulus_free_arcs_have_radius_r():
    reg = morph.open_annulus(Rectangle((0, 0), 3, 3), [Rectangle((0.6, 0), 1, 1)], 0.45)
    arcs = reg.free_arcs()
    assert arcs
    for e in arcs:
        assert e.radius == pytest.approx(0.45, rel=1e-12)


def test_opened_minus_particles_crossing():
    # particle sticks into the rounded corner zone
    dom = Rectangle((0, 0), 3, 3)
    reg = morph.opened_minus_particles(dom, [Disk((1.2, 1.2), 0.25)], 0.6)
    op = morph.open_r(dom, 0.6)
    exact = boolean(op, to_region(Disk((1.2, 1.2), 0.25)), "difference")
    assert reg.area == pytest.approx(exact.area, rel=1e-12)


def test_opened_minus_closing_without_bridges_is_opened_minus_particles():
    dom = Disk((0, 0), 5)
    parts = [Rectangle((-1.5, 0), 1, 1), Rectangle((1.5, 0), 1, 1)]
    a = morph.opened_minus_closing(dom, parts, 0.5)
    b = morph.opened_minus_particles(dom, parts, 0.5)
    assert a.area == pytest.approx(b.area)


def test_disk_union_arcs_two_overlapping():
    arcs = morph.disk_union_arcs(np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([1.0, 1.0]))
    length = sum(e.length for e in arcs)
    # each circle loses the arc of half-angle pi/3 inside the other
    assert length == pytest.approx(2 * (2 * math.pi - 2 * math.pi / 3))


def test_disk_union_arcs_swallowed_circle():
    arcs = morph.disk_union_arcs(np.array([[0.0, 0.0], [0.1, 0.0]]), np.array([1.0, 0.5]))
    assert sum(e.length for e in arcs) == pytest.approx(2 * math.pi)


def test_erode_annulus_disks_and_polygons_agree():
    dom = Rectangle((0, 0), 4, 4)
    disks = [Disk((-0.8, 0), 0.4), Disk((0.8, 0), 0.4)]
    polys = [ConvexPolygon.regular((x, 0), 0.4, 64) for x in (-0.8, 0.8)]
    a = morph.erode_annulus(dom, disks, 0.3)
    b = morph.erode_annulus(dom, polys, 0.3)
    area = lambda loops: sum(lp.signed_area for lp in loops)
    assert area(a) == pytest.approx(area(b), rel=2e-3)


def test_region_predicate_on_closing():
    parts = [Rectangle((-0.65, 0), 1, 1), Rectangle((0.65, 0), 1, 1)]
    c = morph.close_r(parts, 0.6)
    # the bridge arc of radius 0.6 through the corners (+-0.15, 0.5) bottoms out here
    low = 0.5 + math.sqrt(0.36 - 0.15**2) - 0.6
    inside = region_predicate(c)(np.array([[0.0, 0.0], [0.0, low - 1e-3], [0.0, low + 1e-3]]))
    assert inside.tolist() == [True, True, False]
