import math

import pytest

from yieldgeom import morph
from yieldgeom.enclosure import fill_cheap_holes, minimal_enclosure, t_value
from yieldgeom.errors import GeometryError
from yieldgeom.geom import ArcRegion, Disk, Rectangle, to_region

SQUARES = [Rectangle((-0.65, 0), 1, 1), Rectangle((0.65, 0), 1, 1)]


def test_large_lambda_keeps_bare_particles():
    # 2 / lam below the 0.3 gap: no closing disk fits between the squares
    res = minimal_enclosure(SQUARES, 10.0)
    assert not res.bridged
    assert res.area == pytest.approx(2.0)
    assert res.perimeter == pytest.approx(8.0)


def test_moderate_lambda_bridges_close_squares():
    lam = 1 / 0.6
    res = minimal_enclosure(SQUARES, lam)
    assert res.bridged
    bare = 8 + lam * 2
    assert res.t_value < bare
    assert minimal_enclosure(SQUARES, 0.5).bridged


def test_enclosure_value_is_minimum_of_candidates():
    lam = 1.8
    res = minimal_enclosure(SQUARES, lam)
    closed = morph.close_r(SQUARES, 1 / lam)
    bare = morph.ParticleSet(SQUARES).region()
    assert res.t_value == pytest.approx(min(t_value(closed, lam), t_value(bare, lam)))


def test_single_particle():
    res = minimal_enclosure([Disk((0, 0), 1)], 3.0)
    assert res.area == pytest.approx(math.pi)
    assert not res.bridged


def test_tie_prefers_smaller_set():
    # find lambda where bridged and bare tie, then sit exactly on it
    from scipy.optimize import brentq

    def gap(lam):
        c = morph.close_r(SQUARES, 1 / lam)
        return t_value(c, lam) - (8 + 2 * lam)

    lam = brentq(gap, 1.0, 1 / 0.151, xtol=1e-15)
    res = minimal_enclosure(SQUARES, lam)
    assert res.area == pytest.approx(2.0)


def test_tie_point_is_bracketed():
    from scipy.optimize import brentq

    def gap(lam):
        c = morph.close_r(SQUARES, 1 / lam)
        return t_value(c, lam) - (8 + 2 * lam)

    assert gap(1.0) < 0 < gap(1 / 0.151)


def test_cluster_choice_is_per_cluster():
    parts = SQUARES + [Rectangle((10, 0), 1, 1)]
    res = minimal_enclosure(parts, 1 / 0.6)
    assert res.bridged
    assert len(res.set.components()) == 2


def test_fill_cheap_holes():
    # ring of disks enclosing an empty pocket; large lambda fills it
    parts = [Disk((math.cos(a), math.sin(a)), 0.3) for a in [k * math.pi / 3 for k in range(6)]]
    ps = morph.ParticleSet(parts)
    r = 0.35
    closing = morph.close_r(ps, r)
    holes = [lp for lp in closing.loops if lp.signed_area < 0]
    assert holes
    filled = fill_cheap_holes(closing, 1 / r, ps)
    hole = holes[0]
    expect_filled = (1 / r) * -hole.signed_area < hole.length
    assert (len([lp for lp in filled.loops if lp.signed_area < 0]) == 0) == expect_filled
    # cheap area fills the pocket, expensive area keeps it
    assert len(fill_cheap_holes(closing, 1e-3, ps).loops) == len(closing.loops) - len(holes)
    assert len(fill_cheap_holes(closing, 1e3, ps).loops) == len(closing.loops)


def test_rejects_bad_input():
    with pytest.raises(GeometryError):
        minimal_enclosure(SQUARES, 0.0)
    with pytest.raises(GeometryError):
        minimal_enclosure([], 1.0)
