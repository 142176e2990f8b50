"""Raster oracle: minimise the discrete total variation with the particle constraint.

The unknown ``u`` lives on an ``n x n`` cell grid covering the domain with a
margin.  Cells whose centre lies in a particle are fixed to 1, cells outside
the domain to 0, and the remaining (free) cells must carry total mass
``-|Omega_s|`` so that the integral of ``u`` vanishes.  Then
``Y_c ~ |Omega_s| / min TV(u)``.

The discrete TV is isotropic with forward differences,
``h * sum |(u[i+1,j] - u[i,j], u[i,j+1] - u[i,j])|``, minimised by the
Chambolle-Pock primal-dual iteration with the affine constraint handled as a
projection after each primal step.
"""
from __future__ import annotations

import logging
import math
import struct
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ResolutionError, ValidationError
from .geom import ConvexBody, as_body

log = logging.getLogger(__name__)

EXTERIOR, FREE, SOLID = 0, 1, 2
MAGIC = b"TVGD"
MARGIN_CELLS = 2
GRAD_NORM_SQ = 8.0  # squared operator norm bound of the forward-difference gradient


@dataclass(frozen=True)
class GridProblem:
    n: int
    h: float
    origin: tuple  # lower-left corner of the frame
    mask: np.ndarray  # uint8 labels, indexed [ix, iy]
    target_mass: float  # required integral of u over the free cells

    @property
    def solid_area(self) -> float:
        return float(np.count_nonzero(self.mask == SOLID)) * self.h**2

    @property
    def domain_area(self) -> float:
        return float(np.count_nonzero(self.mask != EXTERIOR)) * self.h**2

    @property
    def free_cells(self) -> int:
        return int(np.count_nonzero(self.mask == FREE))

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        c = (np.arange(self.n) + 0.5) * self.h
        return self.origin[0] + c, self.origin[1] + c


@dataclass(frozen=True)
class GridField:
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class TVResult:
    field: GridField
    tv_value: float
    iterations: int
    converged: bool

    def __iter__(self):
        # allows ``field, tv = minimize_tv(...)``
        return iter((self.field, self.tv_value))


@dataclass(frozen=True)
class Levels:
    positive: np.ndarray
    negative: np.ndarray
    negative_value: float
    flatness: float


def min_width(body: ConvexBody) -> float:
    """Smallest width of a convex body over all directions."""
    core = body.core
    if len(core) < 3:
        return 2 * body.radius
    best = math.inf
    for i in range(len(core)):
        e = core[(i + 1) % len(core)] - core[i]
        nrm = np.array([e[1], -e[0]]) / math.hypot(*e)
        proj = (core - core[i]) @ nrm
        best = min(best, float(proj.max() - proj.min()))
    return best + 2 * body.radius


def rasterize(scene, n: int) -> GridProblem:
    """Centre-sampled labels on an ``n x n`` frame around the domain."""
    if n < 64:
        raise ValidationError(f"grid size must be at least 64, got {n}", "/n")
    dom = as_body(scene.domain)
    bodies = [as_body(p) for p in scene.particles]
    if not bodies:
        raise ValidationError("scene has no particles; the mass constraint would be void", "/particles")
    lo = np.r_[dom.core.min(axis=0)] - dom.radius
    hi = np.r_[dom.core.max(axis=0)] + dom.radius
    h = float((hi - lo).max()) / (n - 2 * MARGIN_CELLS)
    for i, b in enumerate(bodies):
        if min_width(b) < 2 * h:
            raise ResolutionError(f"particle {i} is thinner than two cells at n={n}; increase n")
    origin = tuple(0.5 * (lo + hi) - 0.5 * n * h)
    c = (np.arange(n) + 0.5) * h
    X, Y = np.meshgrid(origin[0] + c, origin[1] + c, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    mask = np.full(n * n, EXTERIOR, dtype=np.uint8)
    mask[dom.signed_distance(pts) < 0] = FREE
    for b in bodies:
        blo = b.core.min(axis=0) - b.radius
        bhi = b.core.max(axis=0) + b.radius
        near = np.flatnonzero(np.all((pts >= blo) & (pts <= bhi), axis=1))
        mask[near[b.signed_distance(pts[near]) < 0]] = SOLID
    mask = mask.reshape(n, n)
    solid = np.count_nonzero(mask == SOLID) * h * h
    return GridProblem(n, h, origin, mask, -solid)


# --------------------------------------------------------------------------
# discrete operators
# --------------------------------------------------------------------------


def grad(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gx = np.zeros_like(u)
    gy = np.zeros_like(u)
    gx[:-1] = u[1:] - u[:-1]
    gy[:, :-1] = u[:, 1:] - u[:, :-1]
    return gx, gy


def div(px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Negative adjoint of ``grad``."""
    d = np.zeros_like(px)
    d[0] = px[0]
    d[1:-1] = px[1:-1] - px[:-2]
    d[-1] = -px[-2]
    d[:, 0] += py[:, 0]
    d[:, 1:-1] += py[:, 1:-1] - py[:, :-2]
    d[:, -1] += -py[:, -2]
    return d


def total_variation(u: np.ndarray, h: float) -> float:
    gx, gy = grad(u)
    return h * float(np.sqrt(gx * gx + gy * gy).sum())


def project(u: np.ndarray, problem: GridProblem, free=None) -> np.ndarray:
    """Nearest field with fixed cells at their values and the required free mass."""
    m = problem.mask
    free = m == FREE if free is None else free
    u[m == EXTERIOR] = 0.0
    u[m == SOLID] = 1.0
    k = np.count_nonzero(free)
    shift = (problem.target_mass / problem.h**2 - math.fsum(u[free])) / k
    u[free] += shift
    return u


def feasible_start(problem: GridProblem) -> np.ndarray:
    u = np.zeros(problem.mask.shape)
    return project(u, problem)


class _Stepper:
    """Primal-dual iteration with preallocated buffers.

    Fixed cells are imposed multiplicatively (``u * free + fixed``) and the
    mass shift is a dot product, which keeps every step free of fancy
    indexing.
    """

    def __init__(self, problem: GridProblem, u: np.ndarray, tau: float, sigma: float):
        m = problem.mask
        self.free = (m == FREE).astype(float)
        self.fixed = (m == SOLID).astype(float)
        self.k = float(self.free.sum())
        self.mass = problem.target_mass / problem.h**2
        self.tau, self.sigma = tau, sigma
        self.u = u
        self.ubar = u.copy()
        self.px = np.zeros_like(u)
        self.py = np.zeros_like(u)
        self.t1 = np.empty_like(u)
        self.t2 = np.empty_like(u)

    def project(self, u):
        u *= self.free
        shift = (self.mass - math.fsum(u[self.free > 0])) / self.k
        u += shift * self.free
        u += self.fixed
        return u

    def step(self):
        ub, px, py, t1, t2 = self.ubar, self.px, self.py, self.t1, self.t2
        # dual ascent and projection onto unit disks
        np.subtract(ub[1:], ub[:-1], out=t1[:-1])
        t1[-1] = 0.0
        t1 *= self.sigma
        px += t1
        np.subtract(ub[:, 1:], ub[:, :-1], out=t1[:, :-1])
        t1[:, -1] = 0.0
        t1 *= self.sigma
        py += t1
        np.multiply(px, px, out=t1)
        np.multiply(py, py, out=t2)
        t1 += t2
        np.sqrt(t1, out=t1)
        np.maximum(t1, 1.0, out=t1)
        px /= t1
        py /= t1
        # divergence into t1
        t1[0] = px[0]
        np.subtract(px[1:-1], px[:-2], out=t1[1:-1])
        t1[-1] = -px[-2]
        t1[:, 0] += py[:, 0]
        t1[:, 1:-1] += py[:, 1:-1]
        t1[:, 1:-1] -= py[:, :-2]
        t1[:, -1] -= py[:, -2]
        # primal descent, projection, extrapolation (ubar = 2u - u_old)
        ub[...] = self.u
        t1 *= self.tau
        self.u += t1
        u = self._fast_project(self.u)
        np.multiply(u, 2.0, out=t1)
        t1 -= ub
        self.ubar, self.t1 = t1, ub

    def _fast_project(self, u):
        u *= self.free
        shift = (self.mass - float(np.dot(u.ravel(), self.free.ravel()))) / self.k
        u += shift * self.free
        u += self.fixed
        return u


def minimize_tv(
    problem: GridProblem,
    max_iters: int = 200000,
    tol: float = 1e-7,
    init: np.ndarray | None = None,
    check_every: int = 50,
    step_ratio: float = 1e4,
    deadline: float | None = None,
) -> TVResult:
    """Chambolle-Pock on ``min TV(u)`` over the constrained affine set.

    Step sizes satisfy ``tau * sigma * 8 < 1`` with ``sigma / tau =
    step_ratio``; a large ratio suits this problem, whose dual field is
    bounded while the primal plateaus are small.  The iterates oscillate,
    so the monitored quantity is the TV of the ergodic average over the
    most recent half of the run (the average of feasible fields is
    feasible).  Stops when that TV changes by less than ``tol`` (relative)
    over ``check_every`` iterations; otherwise the result is flagged
    unconverged.  The returned field is the better of the average and the
    last iterate.  ``deadline`` is an optional ``time.monotonic()`` instant
    after which the run stops, also flagged unconverged.
    """
    m = problem.mask
    free = m == FREE
    if not free.any() or not (m == SOLID).any():
        raise ValidationError("grid needs at least one solid and one free cell", "/mask")
    if not np.isfinite(problem.target_mass) or problem.target_mass >= 0:
        raise ValidationError("target mass must be negative", "/target_mass")
    norm = math.sqrt(GRAD_NORM_SQ) / 0.99
    tau, sigma = 1.0 / (norm * math.sqrt(step_ratio)), math.sqrt(step_ratio) / norm
    u0 = feasible_start(problem) if init is None else np.array(init, dtype=float)
    st = _Stepper(problem, u0, tau, sigma)
    st.project(st.u)
    st.ubar[...] = st.u
    avg = st.u.copy()
    count, restart = 1, check_every
    prev = total_variation(avg, problem.h)
    converged = False
    it = 0
    while it < max_iters:
        st.step()
        it += 1
        if it == restart:
            # keep averaging over the latest half of the iterations
            avg[...] = st.u
            count = 1
            restart *= 2
        else:
            count += 1
            avg += (st.u - avg) / count
        if it % check_every == 0:
            tv = total_variation(avg, problem.h)
            if abs(prev - tv) <= tol * tv and count > check_every:
                converged = True
                break
            prev = tv
            if deadline is not None and time.monotonic() > deadline:
                break
    u_last = st.project(st.u)
    u_avg = st.project(avg)
    tv_last, tv_avg = total_variation(u_last, problem.h), total_variation(u_avg, problem.h)
    u, tv = (u_avg, tv_avg) if tv_avg <= tv_last else (u_last, tv_last)
    if not converged:
        log.warning("TV minimisation stopped after %d iterations without meeting tol=%g", it, tol)
    return TVResult(GridField(u), tv, it, converged)


def prolong(u: np.ndarray, coarse: GridProblem, fine: GridProblem) -> np.ndarray:
    """Nearest-cell transfer of a coarse field to the cell centres of a finer grid."""
    out = []
    for axis in range(2):
        x = fine.origin[axis] + (np.arange(fine.n) + 0.5) * fine.h
        idx = np.floor((x - coarse.origin[axis]) / coarse.h).astype(int)
        out.append(np.clip(idx, 0, coarse.n - 1))
    return u[np.ix_(out[0], out[1])]


def solve_oracle(scene, n: int, tol: float = 1e-7, max_iters: int = 200000, coarse: int = 128, time_limit=None):
    """Multilevel oracle: solve on coarser grids first and prolong as a warm start.

    ``time_limit`` (seconds) bounds the whole run; levels still running when
    it expires stop early and the result is flagged unconverged.  Returns
    ``(problem, result)`` for the finest grid.
    """
    deadline = None if time_limit is None else time.monotonic() + time_limit
    sizes = [n]
    while sizes[-1] // 2 >= max(64, coarse):
        sizes.append(sizes[-1] // 2)
    prev = None
    for k in reversed(sizes):
        problem = rasterize(scene, k)
        init = None if prev is None else prolong(prev[1].field.values, prev[0], problem)
        res = minimize_tv(problem, max_iters, tol, init, deadline=deadline)
        log.info("oracle n=%d: TV=%.6f after %d iterations", k, res.tv_value, res.iterations)
        prev = (problem, res)
    return problem, res


# --------------------------------------------------------------------------
# post-processing
# --------------------------------------------------------------------------


def extract_levels(field: GridField, problem: GridProblem, plateau_tol: float = 0.05) -> Levels:
    """Threshold at 1/2 and half the negative plateau, and measure flatness.

    Flatness is the fraction of free cells within ``plateau_tol`` (relative)
    of 1, 0 or the negative plateau; for the zero plateau the tolerance is
    taken relative to the negative plateau.
    """
    u = field.values
    free = problem.mask == FREE
    vals = u[free]
    low = vals.min()
    if low >= 0:
        v = 0.0
    else:
        v = float(np.median(vals[vals <= 0.5 * low]))
    positive = (u > 0.5) & (problem.mask != EXTERIOR)
    negative = free & (u < 0.5 * v) if v < 0 else np.zeros_like(free)
    if v < 0:
        t = plateau_tol
        near = (np.abs(vals - 1) <= t) | (np.abs(vals - v) <= t * abs(v)) | (np.abs(vals) <= t * abs(v))
        flat = float(near.mean())
    else:
        flat = 0.0
    if flat < 0.9:
        warnings.warn(f"field is not close to three-valued (flatness {flat:.2f})", RuntimeWarning, stacklevel=2)
    return Levels(positive, negative, v, flat)


def mask_perimeter(mask: np.ndarray, h: float) -> float:
    """Perimeter of a cell set measured with the same isotropic discrete TV."""
    return total_variation(mask.astype(float), h)


def coarea_tv(levels: Levels, h: float) -> float:
    """TV of the three-level approximation from the perimeters of its level sets."""
    return mask_perimeter(levels.positive, h) + abs(levels.negative_value) * mask_perimeter(levels.negative, h)


def lambda_estimate(field: GridField, problem: GridProblem) -> float:
    """Perimeter-to-area ratio of the extracted negative set (raster Cheeger constant)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        lv = extract_levels(field, problem)
    cells = np.count_nonzero(lv.negative)
    if cells == 0:
        raise ValidationError("field has no negative plateau", "/values")
    return mask_perimeter(lv.negative, problem.h) / (cells * problem.h**2)


def estimate_yc(problem: GridProblem, result: TVResult) -> float:
    return problem.solid_area / result.tv_value


# --------------------------------------------------------------------------
# binary dump
# --------------------------------------------------------------------------


def write_field(field: GridField, path) -> None:
    """Flat little-endian float64 dump, row-major, after a 16-byte header."""
    u = np.ascontiguousarray(field.values, dtype="<f8")
    n = u.shape[0]
    header = MAGIC + struct.pack("<II", n, 0) + bytes(4)
    Path(path).write_bytes(header + u.tobytes(order="C"))


def read_field(path) -> GridField:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise ValidationError("not a TVGD field dump", "/magic")
    (n,) = struct.unpack("<I", data[4:8])
    vals = np.frombuffer(data[16:], dtype="<f8")
    if vals.size != n * n:
        raise ValidationError(f"expected {n * n} values, found {vals.size}", "/values")
    return GridField(vals.reshape(n, n).copy())
