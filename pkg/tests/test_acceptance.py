"""Acceptance criteria 1-9, each at its stated tolerance and runtime."""
import contextlib
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from yieldgeom import analytic, tvgrid
from yieldgeom.analytic import ExampleCase, rectangle_config_radii, solve_example
from yieldgeom.cheeger import cheeger_convex
from yieldgeom.critical import solve_two_step
from yieldgeom.enclosure import minimal_enclosure, t_value
from yieldgeom.geom import Rectangle
from yieldgeom import morph

SQPI = math.sqrt(math.pi)


@contextlib.contextmanager
def criterion(number, title, budget):
    """Time the block, check the runtime budget and record one summary line."""
    notes = []
    t0 = time.perf_counter()
    try:
        yield notes
        elapsed = time.perf_counter() - t0
        assert elapsed < budget, f"runtime {elapsed:.2f} s exceeds {budget} s"
    except BaseException as exc:
        elapsed = time.perf_counter() - t0
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        line = f"criterion {number}: FAIL {title} ({elapsed:.2f} s) {'; '.join(notes)} -- {msg}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"criterion {number}: PASS {title} ({elapsed:.2f} s) {'; '.join(notes)}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def geometric(kind, **params):
    return solve_two_step(ExampleCase(kind, params).scene())


def test_c1_square_in_square_anchor():
    with criterion(1, "square-in-square L=3.33 anchor", 1.0) as notes:
        sol = geometric("square-in-square", L=3.33)
        r, inv = sol.omega_c.radius, 1 / sol.y_c
        notes.append(f"r={r:.5f} 1/Y_c={inv:.5f}")
        assert abs(r - 0.600) <= 5e-4
        assert abs(inv - 5.67) <= 5e-3


def test_c2_convex_cheeger_closed_form():
    with criterion(2, "convex Cheeger radius of squares", 0.1) as notes:
        worst = 0.0
        for L in (1.0, 3.33, 12.0):
            r = cheeger_convex(Rectangle((0, 0), L, L)).radius
            worst = max(worst, abs(r / (L / (2 + SQPI)) - 1))
        notes.append(f"max rel err {worst:.1e}")
        assert worst <= 1e-9


def test_c3_disk_in_disk_formulas():
    with criterion(3, "disk-in-disk closed forms", 5.0) as notes:
        worst = 0.0
        for R in (1.5, 2.0, 5.0):
            sol = geometric("disk-in-disk", R=R)
            lam = (2 * math.pi * R + 2 * SQPI) / (math.pi * R * R - 1)
            y = 1 / (2 * SQPI + lam)
            worst = max(worst, abs(sol.lambda_c / lam - 1), abs(sol.y_c / y - 1))
            if R == 2.0:
                y2 = sol.y_c
        notes.append(f"max rel err {worst:.1e}, Y_c(2)={y2:.5f}")
        assert worst <= 1e-12
        assert y2 == pytest.approx(0.20252, abs=5e-6)


def test_c4_asymptotics():
    with criterion(4, "large-domain limits", 10.0) as notes:
        alphas = np.geomspace(2, 64, 16)
        upper = alphas >= alphas[len(alphas) // 2]
        for kind, key, limit in (("square-in-square", "L", 0.25), ("disk-in-disk", "R", 1 / (2 * SQPI))):
            ys = np.array([geometric(kind, **{key: a}).y_c for a in alphas])
            assert np.all(np.diff(ys) > 0), f"{kind}: Y_c not strictly increasing"
            gap = limit - ys
            assert np.all(gap > 0)
            # least-squares fit gap ~ C / alpha on the upper half
            x = 1 / alphas[upper]
            C = float(x @ gap[upper] / (x @ x))
            local = alphas[upper] * gap[upper]
            spread = float((local.max() - local.min()) / C)
            notes.append(f"{kind} C={C:.4f} spread={spread:.1%}")
            assert spread <= 0.05
            assert np.all(gap[upper] <= 1.05 * C / alphas[upper])


def test_c5_rectangle_band():
    with criterion(5, "rectangle configuration band at L=3", 5.0) as notes:
        betas = np.linspace(0.34, 1.0, 34)
        radii = [rectangle_config_radii(3.0, b) for b in betas]
        band = [b for b, (r1, r2) in zip(betas, radii) if r2 is not None and r2 > r1]
        assert band, "no beta with lambda_2 < lambda_1"
        res = analytic.sweep(ExampleCase("rectangle-in-square", {"L": 3.0, "beta": 0.5}), "beta", betas)
        edge = res.transitions[0]
        notes.append(f"band ({1 / 3:.4f}, {edge:.4f})")
        # independent route: the geometric solver agrees on both sides of the band edge
        for b in (0.36, 0.40, edge + 0.02, 0.8):
            g = geometric("rectangle-in-square", L=3.0, beta=b)
            a = solve_example(ExampleCase("rectangle-in-square", {"L": 3.0, "beta": b}))
            assert g.config == a.config
            assert g.lambda_c == pytest.approx(a.lambda_c, rel=1e-9)
            assert (g.omega_c.family == "opened-annulus") == (b < edge)
        r1 = geometric("rectangle-in-square", L=3.0, beta=1.0)
        sq = geometric("square-in-square", L=3.0)
        assert abs(r1.y_c / sq.y_c - 1) <= 1e-12
        assert abs(r1.lambda_c / sq.lambda_c - 1) <= 1e-12


def _slope(f, x, h, side):
    return side * (f(x + side * 2 * h) - f(x + side * h)) / h


def test_c6_bridging_transition():
    with criterion(6, "two-square bridging corner", 10.0) as notes:
        template = ExampleCase("two-squares", {"d": 1.5})
        coarse = analytic.sweep(template, "d", np.linspace(1.05, 3.0, 40))
        assert len(coarse.transitions) == 1
        d_star = coarse.transitions[0]

        def bridging_gain(d):
            sol = geometric("two-squares", d=d)
            lam = sol.lambda_c
            parts = morph.ParticleSet(sol.particles)
            bare = t_value(parts.region(), lam)
            closed = t_value(morph.close_r(parts, 1 / lam), lam) if parts.min_gap() < 2 / lam else bare
            return closed - bare, sol

        for d in (d_star - 0.2, d_star - 0.02):
            gain, sol = bridging_gain(d)
            assert gain < 0 and sol.omega_1c.bridged
        for d in (d_star + 0.02, d_star + 0.2):
            gain, sol = bridging_gain(d)
            assert gain >= 0 and not sol.omega_1c.bridged

        h = 1e-3
        y = lambda d: geometric("two-squares", d=d).y_c
        left, right = _slope(y, d_star, h, -1), _slope(y, d_star, h, +1)
        change = abs(right - left) / max(abs(left), abs(right))
        notes.append(f"d*={d_star:.4f} slopes {left:.4f}/{right:.4f} change {change:.0%}")
        assert change >= 0.10


def test_c7_periodic_kink():
    with criterion(7, "periodic array single kink", 60.0) as notes:
        template = ExampleCase("periodic-disks", {"L": 12.0, "N": 12, "a": 0.4, "delta": 0.2})
        grid = np.linspace(0.04, 0.44, 11)
        geo = [solve_two_step(template.with_param("delta", d).scene()) for d in grid]
        configs = [s.omega_1c.bridged for s in geo]
        changes = [i for i in range(len(grid) - 1) if configs[i] != configs[i + 1]]
        assert len(changes) == 1, f"configuration changes at {[grid[i] for i in changes]}"
        i = changes[0]
        assert not configs[0] and configs[-1]
        # closed forms on the same grid
        for d, s in zip(grid, geo):
            a = solve_example(template.with_param("delta", d))
            assert a.config == s.config
            assert a.y_c == pytest.approx(s.y_c, rel=1e-9)
        d_star = analytic.sweep(template, "delta", [grid[i], grid[i + 1]]).transitions[0]
        assert grid[i] < d_star < grid[i + 1]
        # kink: the slope of Y_c jumps across d_star
        h = 2e-3
        y = lambda d: solve_two_step(template.with_param("delta", d).scene()).y_c
        left, right = _slope(y, d_star, h, -1), _slope(y, d_star, h, +1)
        notes.append(f"delta*={d_star:.4f} slopes {left:.3f}/{right:.3f}")
        assert abs(right - left) >= 0.10 * max(abs(left), abs(right))


ORACLE_CASES = [("disk-in-disk", {"R": 2.0}), ("square-in-square", {"L": 3.33})]


@pytest.mark.parametrize("kind,params", ORACLE_CASES, ids=[k for k, _ in ORACLE_CASES])
def test_c8_oracle_equivalence(kind, params):
    title = f"oracle vs geometric, {kind}"
    with criterion(8, title, 300.0) as notes:
        scene = ExampleCase(kind, params).scene()
        exact = solve_two_step(scene).y_c
        deadline = time.monotonic() + 300.0
        p512, r512 = tvgrid.solve_oracle(scene, 512, tol=1e-6, time_limit=300.0)
        err512 = abs(tvgrid.estimate_yc(p512, r512) / exact - 1)
        p1024 = tvgrid.rasterize(scene, 1024)
        init = tvgrid.prolong(r512.field.values, p512, p1024)
        r1024 = tvgrid.minimize_tv(p1024, tol=1e-6, init=init, deadline=deadline)
        err1024 = abs(tvgrid.estimate_yc(p1024, r1024) / exact - 1)
        notes.append(f"n=512 err {err512:.2%}, n=1024 err {err1024:.2%} (converged={r1024.converged})")
        assert r512.converged and r1024.converged
        assert err512 <= 0.03, f"n=512 error {err512:.2%} > 3%"
        assert err1024 <= 0.015, f"n=1024 error {err1024:.2%} > 1.5%"


def test_c9_property_suites():
    with criterion(9, "randomised property suites", 60.0) as notes:
        here = Path(__file__).parent
        out = subprocess.run(
            [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(here / "test_properties.py")],
            capture_output=True,
            text=True,
            cwd=here.parent,
        )
        tail = out.stdout.strip().splitlines()[-1] if out.stdout.strip() else out.stderr
        notes.append(tail)
        assert out.returncode == 0, tail
