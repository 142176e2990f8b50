import math

import numpy as np

import pytest

from yieldgeom import analytic
from yieldgeom.analytic import ExampleCase, rectangle_config_radii, solve_example, sweep
from yieldgeom.critical import solve_two_step
from yieldgeom.errors import ParameterError

SQPI = math.sqrt(math.pi)

# one representative per kind and regime; frozen values come from the
# geometric pipeline, which agrees with the closed forms (checked below)
CASES = [
    ("disk-in-disk", {"R": 2.0}, 0.202517320228, "whole-annulus/particles"),
    ("square-in-disk", {"R": 2.0}, 0.184084505691, "whole-annulus/particles"),
    ("square-in-square", {"L": 3.33}, 0.176502047953, "opened-domain-minus-particles/particles"),
    ("disk-in-square", {"L": 3.0}, 0.184123589016, "opened-domain-minus-particles/particles"),
    ("rectangle-in-square", {"L": 3.0, "beta": 0.5}, 0.141377827097, "opened-domain-minus-particles/particles"),
    ("rectangle-in-square", {"L": 3.0, "beta": 0.36}, 0.119717022895, "opened-annulus/particles"),
    ("offset-square", {"L": 3.0, "d": 0.1}, 0.178027666555, "opened-annulus/particles"),
    ("offset-square", {"L": 3.0, "d": 0.3}, 0.174530222691, "opened-annulus/particles"),
    ("two-squares", {"d": 1.3}, 0.258188236408, "opened-domain-minus-closing/bridged"),
    ("two-squares", {"d": 2.0}, 0.221485274797, "whole-annulus/particles"),
]


@pytest.mark.parametrize("kind,params,y,config", CASES)
def test_closed_form_matches_pipeline(kind, params, y, config):
    case = ExampleCase(kind, params)
    a = solve_example(case)
    g = solve_two_step(case.scene())
    assert a.config == g.config == config
    assert a.y_c == pytest.approx(g.y_c, rel=1e-9)
    assert a.lambda_c == pytest.approx(g.lambda_c, rel=1e-9)
    assert a.s_value == pytest.approx(g.s_value, rel=1e-9)
    assert a.y_c == pytest.approx(y, rel=1e-10)


# at delta = 0.04 the opening radius is large enough for the rounded
# corners to cut the corner disks
@pytest.mark.parametrize(
    "delta,y,bridged", [(0.04, 0.0197745671829, False), (0.2, 0.084640096047, False), (0.38, 0.115206327979, True)]
)
def test_periodic_closed_form_matches_pipeline(delta, y, bridged):
    case = ExampleCase("periodic-disks", {"L": 12, "N": 12, "a": 0.4, "delta": delta})
    a = solve_example(case)
    g = solve_two_step(case.scene())
    assert a.bridged is bridged and g.omega_1c.bridged is bridged
    assert a.y_c == pytest.approx(g.y_c, rel=1e-9)
    assert a.y_c == pytest.approx(y, rel=1e-10)


def test_lens_limits_and_symmetry():
    assert analytic.lens(1.0, 0.5, 2.0) == (0.0, 0.0, 0.0)
    area, arc_big, arc_small = analytic.lens(1.0, 0.5, 0.2)
    assert area == pytest.approx(math.pi * 0.25) and arc_big == 0.0 and arc_small == pytest.approx(math.pi)
    a1, l1, m1 = analytic.lens(1.0, 0.7, 1.2)
    a2, l2, m2 = analytic.lens(0.7, 1.0, 1.2)
    assert a1 == pytest.approx(a2) and l1 == pytest.approx(m2) and m1 == pytest.approx(l2)
    # equal unit circles at distance 1: each keeps a third of its circumference inside the other
    a, l, m = analytic.lens(1.0, 1.0, 1.0)
    assert l == pytest.approx(2 * math.pi / 3) and a == pytest.approx(2 * math.pi / 3 - math.sqrt(3) / 2)


def test_lens_against_raster():
    R, r, D = 1.0, 0.6, 1.1
    n = 2000
    xs = np.linspace(-1.2, 2.0, n)
    h = xs[1] - xs[0]
    X, Y = np.meshgrid(xs, np.linspace(-1.2, 1.2, int(2.4 / h) + 1), indexing="ij")
    inside = (X**2 + Y**2 <= R * R) & ((X - D) ** 2 + Y**2 <= r * r)
    assert analytic.lens(R, r, D)[0] == pytest.approx(inside.sum() * h * h, rel=5e-3)


@pytest.mark.parametrize("R", [1.5, 2.0, 5.0])
def test_disk_in_disk_formula(R):
    lam = (2 * math.pi * R + 2 * SQPI) / (math.pi * R * R - 1)
    s = solve_example(ExampleCase("disk-in-disk", {"R": R}))
    assert s.lambda_c == pytest.approx(lam, rel=1e-13)
    assert s.y_c == pytest.approx(1 / (2 * SQPI + lam), rel=1e-13)


def test_square_in_square_anchor():
    s = solve_example(ExampleCase("square-in-square", {"L": 3.33}))
    assert s.radius == pytest.approx(0.600, abs=5e-4)
    assert 1 / s.y_c == pytest.approx(5.67, abs=5e-3)


def test_opened_square_radius_solves_its_equation():
    L = 4.0
    s = solve_example(ExampleCase("square-in-square", {"L": L}))
    r = s.radius
    per = 4 * L - (8 - 2 * math.pi) * r + 4
    area = L * L - (4 - math.pi) * r * r - 1
    assert r * per == pytest.approx(area, rel=1e-13)


def test_rectangle_unit_beta_is_square():
    a = solve_example(ExampleCase("rectangle-in-square", {"L": 3.0, "beta": 1.0}))
    b = solve_example(ExampleCase("square-in-square", {"L": 3.0}))
    assert a.y_c == pytest.approx(b.y_c, rel=1e-12)
    assert a.lambda_c == pytest.approx(b.lambda_c, rel=1e-12)


def test_rectangle_band_exists_at_L3():
    band = []
    for i in range(1, 100):
        beta = 1 / 3 + i * (1 - 1 / 3) / 100
        r1, r2 = rectangle_config_radii(3.0, beta)
        if r2 is not None and r2 > r1:
            band.append(beta)
    assert band
    assert min(band) < 0.36 < max(band) < 0.5


def test_rectangle_slab_radius_solves_its_equation():
    L, beta = 3.0, 0.36
    _, r = rectangle_config_radii(L, beta)
    h = (L - beta) / 2
    assert (4 - math.pi) * r * r - 2 * (L + h) * r + L * h == pytest.approx(0, abs=1e-13)


def test_offset_square_near_wall_has_larger_yield():
    centered = solve_example(ExampleCase("offset-square", {"L": 3.0, "d": 1.0}))
    near = solve_example(ExampleCase("offset-square", {"L": 3.0, "d": 0.1}))
    assert near.y_c > centered.y_c


def test_square_pair_closing_limits():
    # tiny gap: closing is almost the 2 x 1 hull
    k = analytic.square_pair_closing(1.0 + 1e-6, 0.5)
    assert k.area == pytest.approx(2.0, abs=1e-5)
    assert k.perimeter == pytest.approx(6.0, abs=1e-5)


def test_lattice_closing_without_overlap_is_none():
    assert analytic.lattice_closing(12, 12, 0.4, 0.1, 0.05) is None


def test_smaller_perimeter_particle_has_larger_yield():
    # equal areas, equal fluid area: disk beats square
    for L in (2.0, 3.33, 6.0):
        d = solve_example(ExampleCase("disk-in-square", {"L": L}))
        s = solve_example(ExampleCase("square-in-square", {"L": L}))
        assert d.y_c > s.y_c


@pytest.mark.parametrize(
    "kind,params",
    [
        ("disk-in-disk", {"R": 0.5}),
        ("square-in-square", {"L": 1.0}),
        ("rectangle-in-square", {"L": 2.0, "beta": 0.4}),
        ("offset-square", {"L": 3.0, "d": 1.5}),
        ("two-squares", {"d": 0.9}),
        ("periodic-disks", {"L": 12, "N": 12, "a": 0.4, "delta": 0.6}),
        ("periodic-disks", {"L": 12, "N": 2.5, "a": 0.4, "delta": 0.1}),
        ("square-in-square", {}),
        ("no-such-kind", {}),
    ],
)
def test_out_of_range_parameters_rejected(kind, params):
    with pytest.raises(ParameterError):
        ExampleCase(kind, params)


def test_greek_aliases():
    a = ExampleCase("rectangle-in-square", {"L": 3, "β": 0.5})
    assert a["beta"] == 0.5


def test_sweep_finds_bridging_transition():
    res = sweep(ExampleCase("two-squares", {"d": 1.5}), "d", [1.1, 1.3, 1.5, 1.7, 1.9, 2.1])
    assert len(res.transitions) == 1
    d_star = res.transitions[0]
    assert 1.5 < d_star < 2.1
    left = solve_example(ExampleCase("two-squares", {"d": d_star - 1e-6}))
    right = solve_example(ExampleCase("two-squares", {"d": d_star + 1e-6}))
    assert left.bridged and not right.bridged


def test_sweep_rejects_unsorted_grid():
    with pytest.raises(ParameterError):
        sweep(ExampleCase("disk-in-disk", {"R": 2}), "R", [2, 1.5])
