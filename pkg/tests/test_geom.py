import math

import numpy as np
import pytest

from yieldgeom.errors import GeometryError, UnsupportedGeometryError, ValidationError
from yieldgeom.geom import (
    ArcPath,
    ArcRegion,
    ConvexBody,
    ConvexPolygon,
    Disk,
    Edge,
    Rectangle,
    as_body,
    check_particles,
    convex_envelope,
    convex_hull,
    difference_annulus,
    scale,
    to_region,
    translate,
)


def test_disk_measures():
    r = to_region(Disk((1.0, -2.0), 0.7))
    assert r.area == pytest.approx(math.pi * 0.49, rel=1e-14)
    assert r.perimeter == pytest.approx(2 * math.pi * 0.7, rel=1e-14)


def test_rounded_square_measures():
    body = ConvexBody(np.array([[0, 0], [2, 0], [2, 1], [0, 1]]), 0.25)
    reg = body.to_region()
    assert reg.area == pytest.approx(2 + 0.25 * 6 + math.pi * 0.0625, rel=1e-14)
    assert reg.perimeter == pytest.approx(6 + 2 * math.pi * 0.25, rel=1e-14)
    assert body.area == pytest.approx(reg.area, rel=1e-14)


def test_arc_validation():
    with pytest.raises(ValidationError):
        Edge.arc((0, 0), -1.0, 0.0, 1.0)
    with pytest.raises(ValidationError):
        Edge.arc((0, 0), 1.0, 0.0, 2 * math.pi)
    with pytest.raises(ValidationError):
        Edge.arc_between((1, 0), (0, 2), (0, 0))


def test_arc_between_direction():
    cw = Edge.arc_between((1, 0), (0, 1), (0, 0), ccw=False)
    ccw = Edge.arc_between((1, 0), (0, 1), (0, 0), ccw=True)
    assert ccw.sweep == pytest.approx(math.pi / 2)
    assert cw.sweep == pytest.approx(-1.5 * math.pi)


def test_open_path_rejected():
    with pytest.raises(ValidationError):
        ArcPath((Edge.segment((0, 0), (1, 0)), Edge.segment((1, 0), (1, 1))))


def test_reversed_loop_negates_area():
    lp = to_region(Rectangle((0, 0), 2, 1)).loops[0]
    assert lp.reversed().signed_area == pytest.approx(-2.0)


def test_transformations_scale_measures():
    reg = to_region(ConvexPolygon.regular((0, 0), 1.0, 6))
    s = scale(reg, 3.0)
    t = translate(reg, (5, -1))
    assert s.area == pytest.approx(9 * reg.area, rel=1e-14)
    assert s.perimeter == pytest.approx(3 * reg.perimeter, rel=1e-14)
    assert t.area == pytest.approx(reg.area, rel=1e-14)


def test_square_helper_orientation():
    diamond = ConvexPolygon.square((0, 0), 1.0, math.pi / 4)
    xs = [v.x for v in diamond.vertices]
    assert max(xs) == pytest.approx(math.sqrt(0.5))
    aligned = ConvexPolygon.square((0, 0), 1.0)
    assert as_body(aligned).area == pytest.approx(1.0)


def test_polygon_must_be_ccw_and_convex():
    with pytest.raises(ValidationError):
        ConvexPolygon(((0, 0), (0, 1), (1, 0)))
    with pytest.raises(ValidationError):
        ConvexPolygon(((0, 0), (2, 0), (1, 0.2), (2, 2), (0, 2)))


def test_convex_hull_drops_interior_points():
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.5, 0]])
    assert len(convex_hull(pts)) == 4


def test_signed_distance():
    b = as_body(Rectangle((0, 0), 2, 2))
    sd = b.signed_distance([[0, 0], [2, 0], [2, 2]])
    assert sd == pytest.approx([-1, 1, math.sqrt(2)])


def test_erosion_and_dilation_of_body():
    b = as_body(Rectangle((0, 0), 4, 2))
    e = b.erode(0.5)
    assert e.area == pytest.approx(3 * 1)
    assert b.erode(1.0) is None
    d = b.dilate(0.5)
    assert d.area == pytest.approx(8 + 0.5 * 12 + math.pi * 0.25)


def test_inradius():
    assert as_body(Rectangle((0, 0), 4, 2)).inradius == pytest.approx(1.0)
    tri = ConvexPolygon(((0, 0), (3, 0), (0, 4)))
    assert as_body(tri).inradius == pytest.approx(1.0)  # area / semiperimeter = 6 / 6


def test_from_region_round_trip():
    b = ConvexBody(np.array([[0, 0], [1, 0], [0.5, 1]]), 0.3)
    back = ConvexBody.from_region(b.to_region())
    assert back.radius == pytest.approx(0.3)
    assert back.area == pytest.approx(b.area)


def test_from_region_rejects_nonconvex():
    ann = difference_annulus(Disk((0, 0), 2), [Disk((0, 0), 0.5)])
    with pytest.raises(UnsupportedGeometryError):
        ConvexBody.from_region(ann)


def test_check_particles():
    dom = Disk((0, 0), 2)
    check_particles(dom, [Disk((0, 0), 0.5), Disk((1.2, 0), 0.5)])
    with pytest.raises(GeometryError):
        check_particles(dom, [Disk((0, 0), 0.5), Disk((0.9, 0), 0.5)])
    with pytest.raises(GeometryError):
        check_particles(dom, [Disk((1.6, 0), 0.5)])


def test_difference_annulus_measures():
    reg = difference_annulus(Rectangle((0, 0), 3, 3), [Rectangle((0, 0), 1, 1)])
    assert reg.area == pytest.approx(8.0)
    assert reg.perimeter == pytest.approx(16.0)


def test_convex_envelope_of_two_squares():
    env = convex_envelope([Rectangle((-1, 0), 1, 1), Rectangle((1, 0), 1, 1)])
    assert env.area == pytest.approx(3.0)
    assert env.perimeter == pytest.approx(8.0)


def test_convex_envelope_of_equal_disks():
    env = convex_envelope([Disk((0, 0), 0.5), Disk((2, 0), 0.5)])
    assert env.area == pytest.approx(2 + math.pi * 0.25)


def test_convex_envelope_mixed_unsupported():
    with pytest.raises(UnsupportedGeometryError):
        convex_envelope([Disk((0, 0), 0.5), Rectangle((2, 0), 1, 1)])


def test_region_containment():
    reg = difference_annulus(Disk((0, 0), 2), [Disk((0, 0), 0.5)])
    assert reg.contains((1.0, 0.0))
    assert not reg.contains((0.0, 0.0))
    assert not reg.contains((3.0, 0.0))


def test_components_split():
    a = to_region(Disk((0, 0), 1))
    b = to_region(Disk((5, 0), 1))
    reg = ArcRegion(a.loops + b.loops)
    assert len(reg.components()) == 2
