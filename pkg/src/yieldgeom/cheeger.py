"""Cheeger sets of convex domains and of convex domains with particles removed.

For a convex domain the Cheeger set is the opening ``open_r`` with ``r`` the
root of ``|erode_r| = pi r^2``.  With particles removed, four candidate
families are searched:

``opened-domain-minus-particles``
    ``open_r(domain)`` with the particles cut out,
``opened-annulus``
    connected components of ``open_r(domain minus particles)``,
``opened-domain-minus-closing``
    connected components of ``open_r(domain)`` with the closing
    ``close_r`` of the particles cut out; this is the bridged
    configuration, and it coincides with the previous family whenever
    radius-``r`` disks pass between the closed particle clusters and the
    wall,
``whole-annulus``
    the fluid region itself.

On each opening family the ratio ``Per/|.|`` is stationary exactly when
``r Per(C_r) = |C_r|``, i.e. when the free arcs have radius ``1/lambda``; that
scalar equation is solved by bracketing and Brent's method.  For the two
component families the root is sought for the smallest component ratio, and
only radii above ``1/lambda`` of the best closed-form candidate are scanned,
since a root at ``r`` has ratio ``1/r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from . import morph
from ._arrangement import boolean
from .errors import GeometryError
from .geom import ArcPath, ArcRegion, ConvexBody, as_body

FAMILY_CONVEX = "convex-opening"
FAMILY_OPENED_DOMAIN = "opened-domain-minus-particles"
FAMILY_OPENED_ANNULUS = "opened-annulus"
FAMILY_OPENED_CLOSED = "opened-domain-minus-closing"
FAMILY_WHOLE = "whole-annulus"

TIE_RTOL = 1e-9


@dataclass(frozen=True)
class CheegerResult:
    """Optimal set with its Cheeger constant ``lam`` and free-arc radius ``1/lam``."""

    set: ArcRegion
    lam: float
    radius: float
    family: str
    maximal: bool = False
    candidates: tuple = field(default=(), repr=False, compare=False)

    @property
    def area(self) -> float:
        return self.set.area

    @property
    def perimeter(self) -> float:
        return self.set.perimeter


@dataclass(frozen=True)
class Candidate:
    family: str
    lam: float
    region: ArcRegion
    r: float | None = None


@dataclass
class CheegerDiagnostics:
    ok: bool
    ratio_error: float
    radius_product_error: float
    arc_radius_errors: list = field(default_factory=list)
    arc_sweeps: list = field(default_factory=list)
    messages: list = field(default_factory=list)


def _ratio(region: ArcRegion) -> float:
    return region.perimeter / region.area


def _result(region: ArcRegion, family: str, maximal=False, candidates=()) -> CheegerResult:
    lam = _ratio(region)
    return CheegerResult(region, lam, 1.0 / lam, family, maximal, tuple(candidates))


# --------------------------------------------------------------------------
# convex domains
# --------------------------------------------------------------------------


def cheeger_radius_convex(body: ConvexBody) -> float:
    """Root of ``|erode_r(body)| = pi r^2`` on ``(0, inradius)``."""
    rin = body.inradius

    def f(r):
        e = body.erode(r)
        return (e.area if e is not None else 0.0) - math.pi * r * r

    return brentq(f, 0.0, rin, xtol=1e-15 * max(1.0, rin), rtol=4 * np.finfo(float).eps, maxiter=200)


def cheeger_convex(domain) -> CheegerResult:
    """Unique Cheeger set ``open_r(domain)`` of a convex domain."""
    body = as_body(domain)
    if body.area <= 0:
        raise GeometryError("degenerate domain")
    r = cheeger_radius_convex(body)
    region = body.opening(r).to_region()
    res = _result(region, FAMILY_CONVEX, maximal=True)
    if abs(res.lam * r - 1.0) > 1e-9:
        raise GeometryError(f"Cheeger radius inconsistent: lam*r = {res.lam * r}")
    return res


# --------------------------------------------------------------------------
# annular domains
# --------------------------------------------------------------------------


def whole_annulus(dom: ConvexBody, ps: morph.ParticleSet) -> ArcRegion:
    return ArcRegion((dom.boundary(),) + ps.holes())


def _largest_root(psi: Callable[[float], float], lo: float, hi: float, n: int, xtol: float):
    """Largest root of ``psi`` at a grid sign change, refined by Brent's method.

    A root at ``r`` yields a set with ratio ``1/r``, so only the largest one
    matters; the grid is scanned downwards and the scan stops at the first
    accepted root.  A sign change that is a jump (the function does not
    vanish there) is discarded.  Returns a list with zero or one root.
    """
    grid = np.linspace(lo, hi, n)
    vals: dict[int, float] = {}

    def val(k):
        if k not in vals:
            try:
                vals[k] = psi(grid[k])
            except _Empty:
                vals[k] = math.inf
        return vals[k]

    for k in range(n - 1, 0, -1):
        a, b = grid[k - 1], grid[k]
        fb = val(k)
        if not math.isfinite(fb):
            continue
        fa = val(k - 1)
        if not math.isfinite(fa):
            continue
        if fb == 0:
            return [b]
        if fa < 0 < fb or fb < 0 < fa:
            r = brentq(psi, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
            if abs(psi(r)) < 1e-7 * max(1.0, r):
                return [r]
    if n and val(0) == 0:
        return [grid[0]]
    return []


class _Empty(Exception):
    pass


def _nudged(fn, r):
    """Evaluate ``fn(r)``, nudging ``r`` upwards if the geometry is degenerate there.

    Exactly tangent configurations (a feature of width zero) occur when a
    root search converges onto a jump of the family; a relative shift of
    1e-10 to 1e-8 moves off the tangency without affecting accepted roots.
    """
    try:
        return fn(r)
    except GeometryError:
        for k in (1e-10, 1e-9, 1e-8):
            try:
                return fn(r * (1 + k))
            except GeometryError:
                continue
        raise


def _opened_domain_candidates(dom, ps, rin, xtol) -> list[Candidate]:
    """Family ``open_r(domain) minus particles``."""
    fixed_p = ps.perimeter
    fixed_a = ps.area

    def region(r):
        return _nudged(lambda x: morph.opened_minus_particles(dom, ps, x), r)

    def psi(r):
        op = dom.opening(r)
        if op is None:
            raise _Empty
        if all(op.contains_body(b) for b in ps.bodies):
            return r * (op.perimeter + fixed_p) - (op.area - fixed_a)
        reg = region(r)
        if reg is None:
            raise _Empty
        return r * reg.perimeter - reg.area

    out = []
    for r in _largest_root(psi, rin * 1e-6, rin * (1 - 1e-6), 16, xtol):
        reg = region(r)
        if reg is not None:
            out.append(Candidate(FAMILY_OPENED_DOMAIN, _ratio(reg), reg, r))
    return out


def _component_ratios(reg: ArcRegion | None):
    if reg is None:
        return []
    return [(c.perimeter / c.area, c) for c in reg.components()]


def _component_family(family, make, lo, hi, xtol, grid, r_max=math.inf) -> list[Candidate]:
    """Roots of ``r * (smallest component ratio of make(r)) = 1`` on ``[lo, hi]``.

    A disconnected set never beats its best component, so each family is
    searched through its minimum-ratio component(s); components tying in
    ratio are kept together.  Roots cannot lie above ``r_max``; the scan
    stops there but keeps the spacing of a ``grid``-point scan of
    ``[lo, hi]``.
    """
    if lo >= hi:
        return []
    step = (hi - lo) / (grid - 1)
    if r_max < hi:
        if r_max <= lo:
            return []
        hi = r_max
        grid = max(8, math.ceil((hi - lo) / step) + 1)
    cache: dict[float, list] = {}

    def comps(r):
        if r not in cache:
            cache[r] = _component_ratios(_nudged(make, r))
        return cache[r]

    def psi(r):
        c = comps(r)
        if not c:
            raise _Empty
        return r * min(l for l, _ in c) - 1.0

    out = []
    for r in _largest_root(psi, lo, hi, grid, xtol):
        c = comps(r)
        lmin = min(l for l, _ in c)
        best = [reg for l, reg in c if l <= lmin * (1 + TIE_RTOL)]
        region = best[0] if len(best) == 1 else ArcRegion(tuple(lp for b in best for lp in b.loops))
        out.append(Candidate(family, _ratio(region), region, r))
    return out


def _opened_annulus_candidates(dom, ps, rin, xtol, grid=24, r_min=0.0, r_max=math.inf) -> list[Candidate]:
    """Components of ``open_r(domain minus particles)``, roots in ``[r_min, r_max]``."""
    lo = max(rin * 1e-3, r_min)
    return _component_family(
        FAMILY_OPENED_ANNULUS, lambda x: morph.open_annulus(dom, ps, x), lo, rin * (1 - 1e-6), xtol, grid, r_max
    )


def _opened_closed_candidates(dom, ps, rin, xtol, grid=24, r_min=0.0, r_max=math.inf) -> list[Candidate]:
    """Components of ``open_r(domain) minus close_r(particles)``, roots in ``[r_min, r_max]``."""
    gap = ps.min_gap()
    if not math.isfinite(gap):
        return []
    lo = max(rin * 1e-3, 0.5 * gap * (1 + 1e-9), r_min)
    return _component_family(
        FAMILY_OPENED_CLOSED, lambda x: morph.opened_minus_closing(dom, ps, x), lo, rin * (1 - 1e-6), xtol, grid, r_max
    )


def root_upper_bound(dom: ConvexBody, ps: morph.ParticleSet) -> float:
    """Largest radius at which a component family can have a root.

    A root at ``r`` is a subset of the fluid region with ratio ``1/r``.  Any
    such subset has ratio at least the Cheeger constant of the convex
    domain, and at least ``2 sqrt(pi / A)`` by the isoperimetric inequality,
    with ``A`` the fluid area.
    """
    lam_dom = cheeger_convex(dom).lam
    fluid = dom.area - ps.area
    return min(1.0 / lam_dom, math.sqrt(fluid / math.pi) / 2.0)


def cheeger_annular(domain, particles: Sequence, grid: int = 24) -> CheegerResult:
    """Cheeger set of ``domain`` with the particles removed.

    The minimum-ratio candidate over all families is returned.  Sets
    tying in ``lam`` within ``1e-9`` relative are merged and flagged maximal.
    """
    dom = as_body(domain)
    ps = particles if isinstance(particles, morph.ParticleSet) else morph.ParticleSet(particles)
    if not len(ps):
        return cheeger_convex(dom)
    rin = dom.inradius
    xtol = 1e-14 * max(1.0, rin)
    whole = whole_annulus(dom, ps)
    cands = [Candidate(FAMILY_WHOLE, _ratio(whole), whole)]
    cands += _opened_domain_candidates(dom, ps, rin, xtol)
    r1 = max((c.r or 0.0) for c in cands)
    # a root at r has ratio 1/r, so only radii above 1/lam_best can improve
    r_min = (1.0 - 1e-6) / min(c.lam for c in cands)
    # when every particle keeps 2r clearance at the first family's root the
    # two opening families coincide there
    if r1 == 0.0 or not morph._far_apart(dom, ps, r1):
        r_max = root_upper_bound(dom, ps) * (1 + 1e-9)
        cands += _opened_annulus_candidates(dom, ps, rin, xtol, grid, r_min, r_max)
        cands += _opened_closed_candidates(dom, ps, rin, xtol, grid, r_min, r_max)
    cands.sort(key=lambda c: c.lam)
    best = cands[0]
    ties = [c for c in cands if c.lam <= best.lam * (1 + TIE_RTOL)]
    region = best.region
    maximal = len(region.components()) > 1
    if len(ties) > 1:
        region = _union_of(ties)
        maximal = True
    res = _result(region, best.family, maximal, cands)
    if abs(res.lam - best.lam) > 1e-9 * best.lam:
        # tied sets overlapped in a way that changed the ratio; keep the first
        res = _result(best.region, best.family, False, cands)
    return res


def _union_of(cands: Sequence[Candidate]) -> ArcRegion:
    region = cands[0].region
    for c in cands[1:]:
        if _same_region(region, c.region):
            continue
        u = boolean(region, c.region, "union")
        if u is not None:
            region = u
    return region


def _same_region(a: ArcRegion, b: ArcRegion) -> bool:
    return abs(a.area - b.area) <= 1e-10 * a.area and abs(a.perimeter - b.perimeter) <= 1e-10 * a.perimeter


# --------------------------------------------------------------------------
# diagnostics
# --------------------------------------------------------------------------


def free_arcs(region: ArcRegion):
    return region.free_arcs()


def validate_cheeger(result: CheegerResult, tol: float = 1e-9) -> CheegerDiagnostics:
    """Check the structural invariants of a Cheeger result (non-fatal)."""
    msgs = []
    region = result.set
    ratio_err = abs(region.perimeter / region.area - result.lam) / result.lam
    if ratio_err > 1e-10:
        msgs.append(f"lambda differs from Per/area by {ratio_err:.3e} (relative)")
    prod_err = abs(result.radius * result.lam - 1.0)
    if prod_err > 1e-12:
        msgs.append(f"radius*lambda - 1 = {prod_err:.3e}")
    rad_err, sweeps = [], []
    for k, e in enumerate(region.free_arcs()):
        d = abs(e.radius - result.radius)
        rad_err.append(d)
        sweeps.append(abs(e.sweep))
        if d > tol * max(1.0, result.radius):
            msgs.append(f"free arc {k}: radius {e.radius} differs from {result.radius} by {d:.3e}")
        if abs(e.sweep) > math.pi + 1e-12:
            msgs.append(f"free arc {k}: sweep {abs(e.sweep):.6f} exceeds pi")
    return CheegerDiagnostics(not msgs, ratio_err, prod_err, rad_err, sweeps, msgs)
