"""Command-line interface.

Exit status: 0 success, 2 invalid input, 3 geometry outside the exact
pipeline (use the raster oracle instead), 4 oracle did not converge.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analytic, sceneio, tvgrid
from .critical import solve_two_step
from .errors import GeometryError, ParameterError, UnsupportedGeometryError, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_UNCONVERGED = 0, 2, 3, 4

log = logging.getLogger("yieldgeom")

# base parameters for sweeps; the swept one is overwritten
TEMPLATES = {
    "disk-in-disk": {"R": 2.0},
    "square-in-disk": {"R": 2.0},
    "square-in-square": {"L": 3.33},
    "disk-in-square": {"L": 3.33},
    "rectangle-in-square": {"L": 3.0, "beta": 0.5},
    "offset-square": {"L": 3.0, "d": 0.5},
    "two-squares": {"d": 1.5, "R": 5.0},
    "periodic-disks": {"L": 12.0, "N": 12, "a": 0.4, "delta": 0.2},
}

# sweeps written by ``examples``: (file stem, kind, parameter, start, stop, points, fixed overrides)
EXAMPLE_SWEEPS = [
    ("disk_in_disk_R", "disk-in-disk", "R", 1.0, 12.0, 45, {}),
    ("square_in_disk_R", "square-in-disk", "R", 1.0, 12.0, 45, {}),
    ("square_in_square_L", "square-in-square", "L", 1.5, 12.0, 50, {}),
    ("disk_in_square_L", "disk-in-square", "L", 1.5, 12.0, 50, {}),
    ("rectangle_L3_beta", "rectangle-in-square", "beta", 0.34, 1.0, 34, {"L": 3.0}),
    ("offset_square_L3_d", "offset-square", "d", 0.02, 1.0, 50, {"L": 3.0}),
    ("two_squares_d", "two-squares", "d", 1.05, 3.0, 40, {}),
    ("periodic_L12_N12_delta", "periodic-disks", "delta", 0.04, 0.44, 21, {}),
]

EXAMPLE_FIGURES = [
    ("square_in_square_L3.33", "square-in-square", {"L": 3.33}),
    ("disk_in_disk_R2", "disk-in-disk", {"R": 2.0}),
    ("rectangle_L3_beta0.36", "rectangle-in-square", {"L": 3.0, "beta": 0.36}),
    ("offset_square_L3_d0.1", "offset-square", {"L": 3.0, "d": 0.1}),
    ("two_squares_d1.3", "two-squares", {"d": 1.3}),
    ("periodic_delta0.04", "periodic-disks", {"L": 12.0, "N": 12, "a": 0.4, "delta": 0.04}),
    ("periodic_delta0.2", "periodic-disks", {"L": 12.0, "N": 12, "a": 0.4, "delta": 0.2}),
    ("periodic_delta0.38", "periodic-disks", {"L": 12.0, "N": 12, "a": 0.4, "delta": 0.38}),
]


def default_jobs() -> int:
    env = os.environ.get("YIELDGEOM_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"YIELDGEOM_JOBS must be an integer, got {env!r}", "/env/YIELDGEOM_JOBS") from None
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _solve_point(args):
    """Worker: solve one example case (module level so it pickles)."""
    kind, params, method = args
    case = analytic.ExampleCase(kind, params)
    if method == "analytic":
        return analytic.solve_example(case)
    return solve_two_step(case.scene())


def _pool_map(fn, items, jobs):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def run_sweep(kind, param, grid, method="geometric", jobs=1, fixed=None):
    """Records for one sweep, in grid order."""
    params = dict(TEMPLATES[kind])
    params.update(fixed or {})
    tasks = []
    for g in grid:
        p = dict(params)
        p[param] = float(g)
        tasks.append((kind, p, method))
    sols = _pool_map(_solve_point, tasks, jobs)
    prov = "analytic" if method == "analytic" else "geometric"
    return [
        sceneio.ResultRecord.from_solution(s, label=kind, param=float(g), provenance=prov) for g, s in zip(grid, sols)
    ]


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_solve(a) -> int:
    scene = sceneio.load_scene(a.scene)
    sol = solve_two_step(scene)
    print(f"Y_c = {sol.y_c:.12g}")
    print(f"lambda_c = {sol.lambda_c:.12g}")
    print(f"radius = {sol.omega_c.radius:.12g}")
    print(f"s_value = {sol.s_value:.12g}")
    print(f"config = {sol.config}")
    if a.svg:
        sceneio.render_svg(sol, scene, a.svg)
    if a.out:
        sceneio.write_results([sceneio.ResultRecord.from_solution(sol, label=scene.label)], a.out)
    return EXIT_OK


def cmd_sweep(a) -> int:
    if a.kind not in TEMPLATES:
        raise ParameterError(f"unknown example kind {a.kind!r}; choose from {sorted(TEMPLATES)}")
    if a.steps < 2:
        raise ParameterError("--steps must be at least 2")
    fixed = {}
    for item in a.set or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise ParameterError(f"--set expects name=value, got {item!r}")
        try:
            fixed[key] = float(val)
        except ValueError:
            raise ParameterError(f"--set {key}: {val!r} is not a number") from None
    grid = np.linspace(a.start, a.stop, a.steps)
    recs = run_sweep(a.kind, a.param, grid, a.method, a.jobs or default_jobs(), fixed)
    if a.out:
        sceneio.write_results(recs, a.out)
    else:
        for r in recs:
            print(f"{r.param:.12g},{r.lambda_c:.12g},{r.y_c:.12g},{r.config}")
    return EXIT_OK


def cmd_oracle(a) -> int:
    if not 64 <= a.n <= 4096:
        raise ValidationError(f"--n must lie in [64, 4096], got {a.n}", "/n")
    scene = sceneio.load_scene(a.scene)
    problem, res = tvgrid.solve_oracle(scene, a.n, tol=a.tol, max_iters=a.max_iters, time_limit=a.time_limit)
    y = tvgrid.estimate_yc(problem, res)
    print(f"Y_c = {y:.12g}")
    print(f"tv_value = {res.tv_value:.12g}")
    print(f"iterations = {res.iterations}")
    print(f"converged = {res.converged}")
    if a.dump:
        tvgrid.write_field(res.field, a.dump)
    if a.out:
        lam = tvgrid.lambda_estimate(res.field, problem)
        rec = sceneio.ResultRecord(scene.label, y, lam, res.tv_value, "raster", "oracle")
        sceneio.write_results([rec], a.out)
    if not res.converged:
        limit = f" or {a.time_limit:g} s" if a.time_limit else ""
        print(f"error: oracle did not converge within {a.max_iters} iterations{limit}", file=sys.stderr)
        return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_examples(a) -> int:
    out = Path(a.outdir)
    (out / "scenes").mkdir(parents=True, exist_ok=True)
    jobs = a.jobs or default_jobs()
    for stem, kind, param, lo, hi, pts, fixed in EXAMPLE_SWEEPS:
        grid = np.linspace(lo, hi, pts)
        recs = run_sweep(kind, param, grid, "geometric", jobs, fixed)
        sceneio.write_results(recs, out / f"{stem}.csv")
        log.info("wrote %s (%d rows)", stem, len(recs))
    for stem, kind, params in EXAMPLE_FIGURES:
        case = analytic.ExampleCase(kind, params)
        scene = case.scene()
        sceneio.save_scene(scene, out / "scenes" / f"{stem}.json")
        sol = solve_two_step(scene)
        sceneio.render_svg(sol, scene, out / f"{stem}.svg")
    print(f"wrote {len(EXAMPLE_SWEEPS)} sweeps and {len(EXAMPLE_FIGURES)} figures to {out}")
    return EXIT_OK


def cmd_validate(a) -> int:
    scene = sceneio.load_scene(a.scene)
    print(f"ok: {len(scene.particles)} particle(s), particle area {scene.particle_area:.12g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="yieldgeom", description="Critical yield numbers of particles in a Bingham fluid.")
    ap.add_argument("--verbose", action="store_true", help="log progress to standard error")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a scene with the exact geometric pipeline")
    p.add_argument("scene")
    p.add_argument("--svg", help="write a drawing of the optimal sets")
    p.add_argument("--out", help="write a one-row results CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="sweep one parameter of a built-in example")
    p.add_argument("kind", help=", ".join(TEMPLATES))
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=50, help="number of grid points, endpoints included")
    p.add_argument("--set", action="append", metavar="NAME=VALUE", help="override a fixed parameter")
    p.add_argument("--method", choices=("geometric", "analytic"), default="geometric")
    p.add_argument("--jobs", type=int, help="worker processes (default: YIELDGEOM_JOBS or all cores)")
    p.add_argument("--out", help="results CSV (default: print rows)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="estimate Y_c by raster total-variation minimisation")
    p.add_argument("scene")
    p.add_argument("--n", type=int, default=512, help="grid cells per axis, 64..4096")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-iters", type=int, default=200000)
    p.add_argument("--time-limit", type=float, help="wall-clock budget in seconds (unconverged if exceeded)")
    p.add_argument("--dump", help="write the final field as a TVGD binary")
    p.add_argument("--out", help="results CSV")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("examples", help="run every built-in example, writing CSV sweeps and SVG figures")
    p.add_argument("--outdir", required=True)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("validate", help="check a scene file")
    p.add_argument("scene")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(a, "jobs", None) is not None and a.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return a.func(a)
    except UnsupportedGeometryError as exc:
        print(f"error: {exc}; this scene needs the raster fallback: yieldgeom oracle {getattr(a, 'scene', '')}".rstrip(),
              file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (GeometryError, ParameterError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
