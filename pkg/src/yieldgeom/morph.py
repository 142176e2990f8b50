"""Erosion, dilation, opening and closing with disk structuring elements.

Convex shapes are handled in closed form through :class:`ConvexBody`.  For a
convex domain with convex particles removed, the erosion is extracted from the
arrangement of the eroded domain and the dilated particles; dilating it back
is a parallel-curve trace that turns every corner into a free arc of radius
``r``.  Closing a particle set is the complement of the opening of a large
frame with the particles removed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _arrangement as arr
from .errors import EmptyOpeningError, GeometryError
from .geom import TWO_PI, ArcPath, ArcRegion, ConvexBody, Edge, as_body, envelope_body

__all__ = [
    "OffsetResult",
    "ParticleSet",
    "erode_convex",
    "dilate",
    "open_r",
    "close_r",
    "open_annulus",
    "opened_minus_particles",
    "offset",
]


@dataclass(frozen=True)
class OffsetResult:
    region: ArcRegion | None
    radius: float
    direction: str


def erode_convex(shape, r: float) -> ArcRegion | None:
    """``{x : B_r(x) in shape}`` for a convex shape; None when empty."""
    body = as_body(shape)
    if r == 0:
        return body.to_region()
    e = body.erode(r)
    return None if e is None else e.to_region()


def dilate(shape, r: float) -> ArcRegion:
    """Minkowski sum with ``B_r`` of a convex shape."""
    return as_body(shape).dilate(r).to_region()


def offset(shape, r: float, direction: str = "outward") -> OffsetResult:
    if direction == "outward":
        return OffsetResult(dilate(shape, r), r, direction)
    if direction == "inward":
        return OffsetResult(erode_convex(shape, r), r, direction)
    raise ValueError(f"direction must be 'inward' or 'outward', got {direction!r}")


def open_body(shape, r: float) -> ConvexBody:
    body = as_body(shape)
    if r < 0:
        raise GeometryError("opening radius must be >= 0")
    if r >= body.inradius:
        raise EmptyOpeningError(f"opening radius {r} reaches the inradius {body.inradius}")
    return body.opening(r)


def open_r(domain, r: float) -> ArcRegion:
    """Opening of a convex domain: union of all radius-``r`` disks inside it."""
    return open_body(domain, r).to_region()


# --------------------------------------------------------------------------
# particle sets
# --------------------------------------------------------------------------


class ParticleSet:
    """Convex particles with batched signed-distance queries."""

    def __init__(self, particles: Sequence):
        self.bodies = [as_body(p) for p in particles]
        disks = [b for b in self.bodies if len(b.core) == 1]
        self._others = [b for b in self.bodies if len(b.core) != 1]
        self._dc = np.array([b.core[0] for b in disks]).reshape(-1, 2)
        self._dr = np.array([b.radius for b in disks])

    def __len__(self):
        return len(self.bodies)

    @property
    def area(self) -> float:
        return math.fsum(b.area for b in self.bodies)

    @property
    def perimeter(self) -> float:
        return math.fsum(b.perimeter for b in self.bodies)

    def min_sd(self, pts: np.ndarray) -> np.ndarray:
        """Smallest signed distance to any particle."""
        pts = np.atleast_2d(pts)
        out = np.full(len(pts), np.inf)
        if len(self._dc):
            for k in range(0, len(pts), 4096):
                p = pts[k : k + 4096]
                d = np.hypot(p[:, None, 0] - self._dc[None, :, 0], p[:, None, 1] - self._dc[None, :, 1])
                out[k : k + 4096] = (d - self._dr[None, :]).min(axis=1)
        for b in self._others:
            np.minimum(out, b.signed_distance(pts), out=out)
        return out

    def min_gap(self) -> float:
        """Smallest distance between two particles (inf for fewer than two)."""
        n = len(self.bodies)
        best = math.inf
        if len(self._dc) > 1 and not self._others:
            from scipy.spatial import cKDTree

            dist, _ = cKDTree(self._dc).query(self._dc, k=2)
            return float((dist[:, 1] - 2 * self._dr.max()).min()) if np.ptp(self._dr) == 0 else self._pairwise_gap()
        for i in range(n):
            for j in range(i + 1, n):
                best = min(best, self.bodies[i].distance_to(self.bodies[j]))
        return best

    def _pairwise_gap(self):
        d = np.hypot(*(self._dc[:, None, :] - self._dc[None, :, :]).transpose(2, 0, 1))
        g = d - self._dr[:, None] - self._dr[None, :]
        np.fill_diagonal(g, np.inf)
        return float(g.min())

    def boundaries(self) -> list[ArcPath]:
        return [b.boundary() for b in self.bodies]

    def holes(self) -> tuple[ArcPath, ...]:
        return tuple(lp.reversed() for lp in self.boundaries())

    def region(self) -> ArcRegion:
        return ArcRegion(tuple(self.boundaries()))


def _as_particles(particles) -> ParticleSet:
    return particles if isinstance(particles, ParticleSet) else ParticleSet(particles)


# --------------------------------------------------------------------------
# parallel-curve trace
# --------------------------------------------------------------------------


def _offset_edge(e: Edge, r: float) -> Edge | None:
    if not e.is_arc:
        tx, ty = e.tangent(0.0)
        nx, ny = ty, -tx
        return Edge.segment((e.start.x + r * nx, e.start.y + r * ny), (e.end.x + r * nx, e.end.y + r * ny))
    rho = e.radius + r if e.sweep > 0 else e.radius - r
    if rho <= 1e-12 * max(1.0, e.radius):
        return None
    return Edge.arc(e.center, rho, e.a0, e.sweep, e.free)


def trace_dilation(loops: Sequence[ArcPath], r: float):
    """Outer parallel curves of the loops at distance ``r``.

    Returns one edge list per loop and a flag telling whether a concave corner
    was met (the trace then overlaps itself and needs cleaning).
    """
    out = []
    concave = False
    for lp in loops:
        edges = lp.edges
        n = len(edges)
        res: list[Edge] = []
        for i, e in enumerate(edges):
            oe = _offset_edge(e, r)
            if oe is not None:
                res.append(oe)
            nxt = edges[(i + 1) % n]
            turn = arr.corner_turn(e, nxt)
            if turn > 1e-12:
                ti = e.tangent(1.0)
                a0 = math.atan2(-ti[0], ti[1])
                res.append(Edge.arc(e.end, r, a0, turn, free=True))
            elif turn < -1e-9:
                concave = True
        out.append(res)
    return out, concave


def _close_gaps(edges: list[Edge]) -> list[Edge]:
    fixed = []
    for i, e in enumerate(edges):
        prev = edges[i - 1]
        if e.start != prev.end:
            e = Edge(prev.end, e.end, e.center, e.radius, e.a0, e.sweep, e.free)
        fixed.append(e)
    return fixed


def dilate_loops(loops: Sequence[ArcPath], r: float) -> ArcRegion | None:
    """Exact dilation by ``B_r`` of the region bounded by ``loops``."""
    if not loops:
        return None
    traced, concave = trace_dilation(loops, r)
    if not concave:
        paths = [ArcPath(tuple(_close_gaps(t))) for t in traced if t]
        if not arr.loops_cross(paths):
            return arr.regions_from_loops(paths)
    src = arr.EdgeArrays(loops=loops)

    def inside(pts):
        return (src.winding(pts) > 0) | src.within(pts, r)

    return arr.regions_from_loops(arr.extract([e for t in traced for e in t], inside))


# --------------------------------------------------------------------------
# annular domains
# --------------------------------------------------------------------------


def disk_union_arcs(centers: np.ndarray, radii: np.ndarray) -> list[Edge]:
    """Counter-clockwise arcs of the disk circles not covered by any other disk.

    The arcs form the boundary of the union (plus pieces at tangencies);
    dropping covered pieces up front keeps the arrangement small when many
    disks overlap.
    """
    c = np.asarray(centers, dtype=float).reshape(-1, 2)
    rad = np.asarray(radii, dtype=float)
    n = len(c)
    dv = c[None, :, :] - c[:, None, :]
    d = np.hypot(dv[..., 0], dv[..., 1])
    ri, rj = rad[:, None], rad[None, :]
    idx = np.arange(n)
    dup = (d <= 1e-14 * (ri + rj)) & (np.abs(ri - rj) <= 1e-14 * (ri + rj))
    # circle i lies inside disk j (duplicates: keep the first)
    swallowed = ((d + ri < rj) | (dup & (idx[None, :] < idx[:, None]))).any(axis=1)
    meet = (d < ri + rj) & (d > np.abs(ri - rj)) & ~dup
    with np.errstate(invalid="ignore", divide="ignore"):
        cosw = (ri * ri + d * d - rj * rj) / (2 * ri * d)
        half = np.arccos(np.clip(cosw, -1.0, 1.0))
        phi = np.arctan2(dv[..., 1], dv[..., 0])
    out: list[Edge] = []
    for i in range(n):
        if swallowed[i]:
            continue
        js = np.nonzero(meet[i])[0]
        if not len(js):
            out.extend(ConvexBody(c[i : i + 1], float(rad[i])).boundary().edges)
            continue
        lo = np.mod(phi[i, js] - half[i, js], TWO_PI)
        w = 2 * half[i, js]
        order = np.argsort(lo)
        lo, w = lo[order], w[order]
        # merge covered intervals on the circle, starting at the first one
        base = lo[0]
        rel = lo - base
        end = rel[0] + w[0]
        gaps = []
        for a, ww in zip(rel[1:].tolist(), w[1:].tolist()):
            if a > end:
                gaps.append((end, a))
            end = max(end, a + ww)
        if end < TWO_PI:
            gaps.append((end, TWO_PI))
        for a, b in gaps:
            out.append(Edge.arc(c[i], float(rad[i]), base + a, b - a))
    return out


def erode_annulus(domain, particles, r: float) -> list[ArcPath]:
    """Boundary loops of ``{x : B_r(x) in domain minus particles}``."""
    dom = as_body(domain)
    ps = _as_particles(particles)
    core = dom.erode(r)
    if core is None:
        return []
    edges = list(core.boundary().edges)
    if not ps._others:
        # disks: overlap test in one batch, then only the uncovered arcs
        hit = core.signed_distance(ps._dc) < ps._dr + r
        if not hit.any():
            return [core.boundary()]
        edges.extend(e.reversed() for e in disk_union_arcs(ps._dc[hit], ps._dr[hit] + r))
    else:
        grown = [b.dilate(r) for b in ps.bodies]
        x0, y0, x1, y1 = core.bbox
        relevant = [
            g
            for g in grown
            if g.bbox[0] <= x1 and g.bbox[2] >= x0 and g.bbox[1] <= y1 and g.bbox[3] >= y0 and core.distance_to(g) < 0
        ]
        if not relevant:
            return [core.boundary()]
        for g in relevant:
            edges.extend(g.boundary().reversed().edges)

    def inside(pts):
        return (core.signed_distance(pts) < 0) & (ps.min_sd(pts) > r)

    return arr.extract(edges, inside)


def _far_apart(dom: ConvexBody, ps: ParticleSet, r: float) -> bool:
    """Every particle keeps ``2r`` clearance from the wall and from the others."""
    for b in ps.bodies:
        if not dom.contains_body(b, 2 * r):
            return False
    return ps.min_gap() > 2 * r


def open_annulus(domain, particles, r: float) -> ArcRegion | None:
    """Opening of ``domain minus particles`` by ``B_r``; None when empty."""
    dom = as_body(domain)
    ps = _as_particles(particles)
    if r >= dom.inradius:
        return None
    if r == 0 or not len(ps):
        return ArcRegion((dom.opening(r).boundary(),) + ps.holes()) if r > 0 or len(ps) else dom.to_region()
    if _far_apart(dom, ps, r):
        return ArcRegion((dom.opening(r).boundary(),) + ps.holes())
    loops = erode_annulus(dom, ps, r)
    if not loops:
        return None
    return dilate_loops(loops, r)


def opened_minus_particles(domain, particles, r: float) -> ArcRegion | None:
    """``open_r(domain)`` with the particles removed."""
    dom = as_body(domain)
    ps = _as_particles(particles)
    op = open_body(dom, r)
    holes, crossing = [], []
    for b in ps.bodies:
        if op.contains_body(b, 0.0):
            holes.append(b.boundary().reversed())
        elif op.distance_to(b) < 0:
            crossing.append(b)
    if not crossing:
        return ArcRegion((op.boundary(),) + tuple(holes))
    edges = list(op.boundary().edges)
    for b in crossing:
        edges.extend(b.boundary().reversed().edges)
    cross = ParticleSet(crossing)

    def inside(pts):
        return (op.signed_distance(pts) < 0) & (cross.min_sd(pts) > 0)

    loops = arr.extract(edges, inside)
    if not loops:
        return None
    return ArcRegion(tuple(loops) + tuple(holes))


def _subtract_from_body(op: ConvexBody, region: ArcRegion) -> ArcRegion | None:
    """``op`` minus a region lying (usually) well inside it."""
    pts = np.array([e.point(t) for e in region.edges for t in np.linspace(0.0, 1.0, 9)])
    if np.all(op.signed_distance(pts) < -1e-9 * max(1.0, float(np.abs(pts).max()))):
        # arcs bulge at most sagitta beyond the samples; a margin check covers it
        sag = max((e.radius * (1 - math.cos(abs(e.sweep) / 16)) for e in region.edges if e.is_arc), default=0.0)
        if np.all(op.signed_distance(pts) < -sag - 1e-12):
            return ArcRegion((op.boundary(),) + tuple(lp.reversed() for lp in region.loops))
    return arr.boolean(op.to_region(), region, "difference")


def opened_minus_closing(domain, particles, r: float) -> ArcRegion | None:
    """``open_r(domain)`` with ``close_r(particles)`` removed."""
    dom = as_body(domain)
    ps = _as_particles(particles)
    op = dom.opening(r)
    if op is None:
        return None
    if len(ps) < 2 or ps.min_gap() >= 2 * r:
        return opened_minus_particles(dom, ps, r)
    return _subtract_from_body(op, close_r(ps, r))


def close_r(particles, r: float) -> ArcRegion:
    """Closing of a set of convex particles: fills every gap a radius-``r`` disk cannot enter.

    Two bodies at gap ``g < 2r`` are joined by a bridge bounded by concave arcs
    of radius ``r``; isolated convex bodies are returned unchanged.
    """
    ps = _as_particles(particles)
    if not len(ps):
        raise GeometryError("closing of an empty particle set")
    if r < 0:
        raise GeometryError("closing radius must be >= 0")
    if r == 0 or len(ps) == 1 or ps.min_gap() >= 2 * r:
        return ps.region()
    hull = envelope_body(ps.bodies) if _same_kind(ps) else None
    x0 = min(b.bbox[0] for b in ps.bodies)
    y0 = min(b.bbox[1] for b in ps.bodies)
    x1 = max(b.bbox[2] for b in ps.bodies)
    y1 = max(b.bbox[3] for b in ps.bodies)
    m = 3 * r + 1.0
    frame = ConvexBody(np.array([[x0 - m, y0 - m], [x1 + m, y0 - m], [x1 + m, y1 + m], [x0 - m, y1 + m]]))
    opened = dilate_loops(erode_annulus(frame, ps, r), r)
    # everything except the loop running along the frame bounds the closure
    inner = [lp for lp in opened.loops if lp.bbox[0] > x0 - m + r]
    if not inner:
        raise GeometryError("closing produced no particle boundary")
    closed = ArcRegion(tuple(lp.reversed() for lp in inner))
    if hull is not None and closed.area > hull.area * (1 + 1e-9):
        raise GeometryError("closing exceeded the convex envelope")
    return closed


def _same_kind(ps: ParticleSet) -> bool:
    radii = {round(b.radius, 12) for b in ps.bodies}
    if len(radii) != 1:
        return False
    return next(iter(radii)) == 0 or all(len(b.core) == 1 for b in ps.bodies)
