"""Exact planar regions bounded by line segments and circular arcs.

Everything here works with closed chains of :class:`Edge` objects.  An edge is
either a straight segment or a circular arc stored by centre, radius, start
angle and signed sweep, so that areas (Green's theorem) and perimeters are
evaluated edge by edge with closed-form expressions and no polygonal
approximation.

Orientation convention: the region lies to the *left* of every edge, so outer
loops run counter-clockwise and holes clockwise.

Convex sets of the form ``Q + B_rho`` (a convex polygon, segment or point ``Q``
dilated by a disk of radius ``rho``) are handled by :class:`ConvexBody`, which
gives erosion, dilation and opening in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from .errors import GeometryError, UnsupportedGeometryError, ValidationError

TWO_PI = 2.0 * math.pi
EPS = 1e-9


class Point(NamedTuple):
    x: float
    y: float


def _pt(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValidationError(f"non-finite coordinate {p!r}")
    return Point(x, y)


def _wrap(a: float) -> float:
    """Angle reduced to [0, 2pi)."""
    a = math.fmod(a, TWO_PI)
    return a + TWO_PI if a < 0 else a


# --------------------------------------------------------------------------
# edges
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """Straight segment or circular arc.

    Arcs are parametrised by ``center + radius * (cos a, sin a)`` with ``a``
    running from ``a0`` to ``a0 + sweep``; ``sweep > 0`` is counter-clockwise.
    ``free`` marks arcs created by morphological rounding (boundary pieces
    that lie neither on the container nor on a particle).
    """

    start: Point
    end: Point
    center: Point | None = None
    radius: float = 0.0
    a0: float = 0.0
    sweep: float = 0.0
    free: bool = False

    @classmethod
    def segment(cls, p, q) -> "Edge":
        return cls(_pt(p), _pt(q))

    @classmethod
    def arc(cls, center, radius: float, a0: float, sweep: float, free: bool = False) -> "Edge":
        if radius <= 0:
            raise ValidationError(f"arc radius must be positive, got {radius}")
        if not 0 < abs(sweep) < TWO_PI:
            raise ValidationError(f"arc sweep must lie in (0, 2pi), got {sweep}")
        c = _pt(center)
        a1 = a0 + sweep
        s = Point(c.x + radius * math.cos(a0), c.y + radius * math.sin(a0))
        e = Point(c.x + radius * math.cos(a1), c.y + radius * math.sin(a1))
        return cls(s, e, c, float(radius), float(a0), float(sweep), free)

    @classmethod
    def arc_between(cls, p, q, center, ccw: bool = True, free: bool = False) -> "Edge":
        """Arc from ``p`` to ``q`` around ``center`` in the given direction."""
        p, q, c = _pt(p), _pt(q), _pt(center)
        r0 = math.hypot(p.x - c.x, p.y - c.y)
        r1 = math.hypot(q.x - c.x, q.y - c.y)
        if abs(r0 - r1) > EPS * max(1.0, r0):
            raise ValidationError("arc endpoints are not on a common circle")
        a0 = math.atan2(p.y - c.y, p.x - c.x)
        a1 = math.atan2(q.y - c.y, q.x - c.x)
        sweep = _wrap(a1 - a0) if ccw else -_wrap(a0 - a1)
        cls.arc(c, r0, a0, sweep, free)  # validates radius and sweep
        return cls(p, q, c, r0, a0, sweep, free)

    @property
    def is_arc(self) -> bool:
        return self.center is not None

    @cached_property
    def length(self) -> float:
        if self.is_arc:
            return self.radius * abs(self.sweep)
        return math.hypot(self.end.x - self.start.x, self.end.y - self.start.y)

    @cached_property
    def area_term(self) -> float:
        """Contribution of the edge to ``1/2 * closed integral of (x dy - y dx)``."""
        if not self.is_arc:
            return 0.5 * (self.start.x * self.end.y - self.end.x * self.start.y)
        cx, cy = self.center
        r, a0 = self.radius, self.a0
        a1 = a0 + self.sweep
        return 0.5 * (
            r * r * self.sweep
            + r * cx * (math.sin(a1) - math.sin(a0))
            - r * cy * (math.cos(a1) - math.cos(a0))
        )

    def point(self, t: float) -> Point:
        if self.is_arc:
            a = self.a0 + t * self.sweep
            return Point(self.center.x + self.radius * math.cos(a), self.center.y + self.radius * math.sin(a))
        return Point(
            self.start.x + t * (self.end.x - self.start.x),
            self.start.y + t * (self.end.y - self.start.y),
        )

    def tangent(self, t: float) -> tuple[float, float]:
        """Unit direction of travel at parameter ``t``."""
        if self.is_arc:
            a = self.a0 + t * self.sweep
            s = 1.0 if self.sweep > 0 else -1.0
            return (-s * math.sin(a), s * math.cos(a))
        dx, dy = self.end.x - self.start.x, self.end.y - self.start.y
        n = math.hypot(dx, dy)
        return (dx / n, dy / n)

    def reversed(self) -> "Edge":
        if self.is_arc:
            return Edge(self.end, self.start, self.center, self.radius, self.a0 + self.sweep, -self.sweep, self.free)
        return Edge(self.end, self.start)

    def sub(self, t0: float, t1: float) -> "Edge":
        """Piece of the edge between parameters ``t0 < t1``."""
        if self.is_arc:
            c, r = self.center, self.radius
            a0, a1 = self.a0 + t0 * self.sweep, self.a0 + t1 * self.sweep
            s = Point(c.x + r * math.cos(a0), c.y + r * math.sin(a0))
            e = Point(c.x + r * math.cos(a1), c.y + r * math.sin(a1))
            return Edge(s, e, c, r, a0, (t1 - t0) * self.sweep, self.free)
        return Edge(self.point(t0), self.point(t1))

    def transformed(self, factor: float = 1.0, offset=(0.0, 0.0)) -> "Edge":
        ox, oy = offset

        def f(p):
            return Point(factor * p.x + ox, factor * p.y + oy)

        if self.is_arc:
            return Edge(f(self.start), f(self.end), f(self.center), factor * self.radius, self.a0, self.sweep, self.free)
        return Edge(f(self.start), f(self.end))

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        xs = [self.start.x, self.end.x]
        ys = [self.start.y, self.end.y]
        if self.is_arc:
            lo = min(self.a0, self.a0 + self.sweep)
            hi = max(self.a0, self.a0 + self.sweep)
            k = math.ceil(lo / (0.5 * math.pi))
            while k * 0.5 * math.pi <= hi:
                a = k * 0.5 * math.pi
                xs.append(self.center.x + self.radius * math.cos(a))
                ys.append(self.center.y + self.radius * math.sin(a))
                k += 1
        return (min(xs), min(ys), max(xs), max(ys))

    def winding_angle(self, p) -> float:
        """Angle swept by the edge as seen from ``p``."""
        ax, ay = self.start.x - p[0], self.start.y - p[1]
        bx, by = self.end.x - p[0], self.end.y - p[1]
        ang = math.atan2(ax * by - ay * bx, ax * bx + ay * by)
        if self.is_arc:
            cx, cy = self.center
            if math.hypot(p[0] - cx, p[1] - cy) < self.radius:
                m = self.point(0.5)
                dx, dy = self.end.x - self.start.x, self.end.y - self.start.y
                side_p = dx * (p[1] - self.start.y) - dy * (p[0] - self.start.x)
                side_m = dx * (m.y - self.start.y) - dy * (m.x - self.start.x)
                if side_p * side_m > 0:
                    ang += TWO_PI if self.sweep > 0 else -TWO_PI
        return ang


# --------------------------------------------------------------------------
# paths and regions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ArcPath:
    """Closed chain of edges."""

    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(self.edges)
        object.__setattr__(self, "edges", edges)
        if not edges:
            raise ValidationError("empty path")
        for i, e in enumerate(edges):
            nxt = edges[(i + 1) % len(edges)]
            if math.hypot(e.end.x - nxt.start.x, e.end.y - nxt.start.y) > EPS * max(1.0, abs(e.end.x), abs(e.end.y)):
                raise ValidationError(f"path not closed between edges {i} and {(i + 1) % len(edges)}")

    @cached_property
    def signed_area(self) -> float:
        return math.fsum(e.area_term for e in self.edges)

    @cached_property
    def length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    @property
    def is_ccw(self) -> bool:
        return self.signed_area > 0

    def reversed(self) -> "ArcPath":
        return ArcPath(tuple(e.reversed() for e in reversed(self.edges)))

    def transformed(self, factor=1.0, offset=(0.0, 0.0)) -> "ArcPath":
        return ArcPath(tuple(e.transformed(factor, offset) for e in self.edges))

    def winding(self, p) -> int:
        return int(round(sum(e.winding_angle(p) for e in self.edges) / TWO_PI))

    @cached_property
    def bbox(self):
        b = np.array([e.bbox for e in self.edges])
        return (b[:, 0].min(), b[:, 1].min(), b[:, 2].max(), b[:, 3].max())

    def is_convex(self, tol: float = 1e-12) -> bool:
        """True for a CCW loop whose arcs are all CCW and every corner turns left."""
        if not self.is_ccw:
            return False
        n = len(self.edges)
        for i, e in enumerate(self.edges):
            if e.is_arc and e.sweep < 0:
                return False
            t_in = e.tangent(1.0)
            t_out = self.edges[(i + 1) % n].tangent(0.0)
            if t_in[0] * t_out[1] - t_in[1] * t_out[0] < -tol:
                return False
        return True


@dataclass(frozen=True)
class ArcRegion:
    """Union of outer loops (CCW) with holes (CW)."""

    loops: tuple[ArcPath, ...]

    def __post_init__(self):
        object.__setattr__(self, "loops", tuple(self.loops))
        if not self.loops:
            raise ValidationError("region has no loops")

    @cached_property
    def area(self) -> float:
        return math.fsum(lp.signed_area for lp in self.loops)

    @cached_property
    def perimeter(self) -> float:
        return math.fsum(lp.length for lp in self.loops)

    @property
    def edges(self) -> Iterable[Edge]:
        for lp in self.loops:
            yield from lp.edges

    @cached_property
    def bbox(self):
        b = np.array([lp.bbox for lp in self.loops])
        return (b[:, 0].min(), b[:, 1].min(), b[:, 2].max(), b[:, 3].max())

    def winding(self, p) -> int:
        return sum(lp.winding(p) for lp in self.loops)

    def contains(self, p) -> bool:
        return self.winding(p) > 0

    def free_arcs(self) -> list[Edge]:
        return [e for e in self.edges if e.is_arc and e.free]

    def transformed(self, factor=1.0, offset=(0.0, 0.0)) -> "ArcRegion":
        return ArcRegion(tuple(lp.transformed(factor, offset) for lp in self.loops))

    def components(self) -> list["ArcRegion"]:
        """Split into connected pieces, each an outer loop with its holes."""
        outers = [lp for lp in self.loops if lp.signed_area > 0]
        holes = [lp for lp in self.loops if lp.signed_area <= 0]
        if len(outers) == 1:
            return [self]
        groups: list[list[ArcPath]] = [[o] for o in outers]
        for h in holes:
            probe = h.edges[0].point(0.5)
            best, best_area = None, math.inf
            for k, o in enumerate(outers):
                if o.signed_area < best_area and o.winding(probe) != 0:
                    best, best_area = k, o.signed_area
            if best is None:
                raise ValidationError("hole is not inside any outer loop")
            groups[best].append(h)
        return [ArcRegion(tuple(g)) for g in groups]

    def validate(self) -> "ArcRegion":
        """Check simplicity, orientation and positivity; returns self."""
        from ._arrangement import loops_cross

        if self.area <= 0:
            raise ValidationError(f"region area must be positive, got {self.area}")
        for lp in self.loops:
            if abs(lp.signed_area) <= 0:
                raise ValidationError("loop with zero signed area")
            for e in lp.edges:
                if e.is_arc:
                    for p in (e.start, e.end):
                        if abs(math.hypot(p.x - e.center.x, p.y - e.center.y) - e.radius) > EPS * max(1.0, e.radius):
                            raise ValidationError("arc endpoint off its circle")
        if loops_cross(self.loops):
            raise ValidationError("region boundary self-intersects")
        for h in (lp for lp in self.loops if lp.signed_area < 0):
            if self.winding(h.edges[0].point(0.5)) < 0 or not any(
                o.winding(h.edges[0].point(0.5)) for o in self.loops if o.signed_area > 0
            ):
                raise ValidationError("hole outside every outer loop")
        return self


def area(region: ArcRegion) -> float:
    """Exact area, holes subtracted."""
    _valid(region)
    return region.area


def perimeter(region: ArcRegion) -> float:
    """Total boundary length including the boundaries of holes."""
    _valid(region)
    return region.perimeter


def _valid(region):
    if not isinstance(region, ArcRegion):
        raise ValidationError(f"expected ArcRegion, got {type(region).__name__}")
    if region.__dict__.get("_checked") is None:
        region.validate()
        region.__dict__["_checked"] = True


def translate(region, vector):
    """Rigid translation; accepts regions, primitives and bodies."""
    return region.transformed(1.0, (float(vector[0]), float(vector[1])))


def scale(region, factor: float):
    """Homothety about the origin."""
    if not factor > 0:
        raise GeometryError(f"scale factor must be positive, got {factor}")
    return region.transformed(float(factor))


# --------------------------------------------------------------------------
# polygons
# --------------------------------------------------------------------------


def _next(v: np.ndarray) -> np.ndarray:
    """Cyclic successor of each row (``_next(v)`` without its overhead)."""
    return np.concatenate((v[1:], v[:1]))


def polygon_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, _next(y)) - np.dot(_next(x), y))


def _dedupe(v: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    if len(v) < 2:
        return v
    e = v - _next(v)
    keep = np.sqrt(e[:, 0] * e[:, 0] + e[:, 1] * e[:, 1]) > tol * max(1.0, float(np.abs(v).max()))
    if not keep.any():
        return v[:1]
    return v[keep]


def convex_hull(points) -> np.ndarray:
    """Monotone-chain hull, CCW, collinear points dropped; degenerate inputs give 1 or 2 points."""
    pts = sorted(set(map(tuple, np.asarray(points, dtype=float).reshape(-1, 2))))
    if len(pts) <= 2:
        return np.array(pts, dtype=float)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1], dtype=float)


def clip_halfplane(v: np.ndarray, n, c: float) -> np.ndarray:
    """Part of convex polygon ``v`` with ``n . x <= c``."""
    if len(v) == 0:
        return v
    s = v @ np.asarray(n) - c
    out = []
    k = len(v)
    for i in range(k):
        j = (i + 1) % k
        if s[i] <= 0:
            out.append(v[i])
        if (s[i] < 0 < s[j]) or (s[j] < 0 < s[i]):
            t = s[i] / (s[i] - s[j])
            out.append(v[i] + t * (v[j] - v[i]))
    return _dedupe(np.array(out)) if out else np.empty((0, 2))


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points ``p`` (m,2) to segments ``a->b`` (k,2); result (m,k)."""
    d = b - a
    dd = np.einsum("ij,ij->i", d, d)
    dd = np.where(dd > 0, dd, 1.0)
    w = p[:, None, :] - a[None, :, :]
    t = np.clip(np.einsum("mki,ki->mk", w, d) / dd, 0.0, 1.0)
    q = a[None, :, :] + t[..., None] * d[None, :, :]
    return np.hypot(p[:, None, 0] - q[..., 0], p[:, None, 1] - q[..., 1])


# --------------------------------------------------------------------------
# convex bodies Q + B_rho
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """Minkowski sum of a convex core (point, segment or polygon) and a disk.

    ``core`` holds the CCW vertices of the core; ``radius`` is the rounding
    radius.  Polygons have ``radius == 0``, disks a single-vertex core.
    """

    core: np.ndarray
    radius: float = 0.0
    free_rounding: bool = False

    def __post_init__(self):
        v = _dedupe(np.asarray(self.core, dtype=float).reshape(-1, 2))
        if len(v) >= 3:
            v = convex_hull(v)
        v.setflags(write=False)
        object.__setattr__(self, "core", v)
        if self.radius < 0 or not math.isfinite(self.radius):
            raise ValidationError(f"rounding radius must be >= 0, got {self.radius}")
        if len(v) == 0:
            raise ValidationError("empty core")
        if len(v) <= 2 and self.radius == 0:
            raise ValidationError("degenerate body with zero area")

    # -- measures -------------------------------------------------------
    @cached_property
    def core_perimeter(self) -> float:
        v = self.core
        if len(v) == 1:
            return 0.0
        return float(np.hypot(*(_next(v) - v).T).sum())

    @cached_property
    def core_area(self) -> float:
        return polygon_area(self.core) if len(self.core) >= 3 else 0.0

    @property
    def area(self) -> float:
        r = self.radius
        return self.core_area + r * self.core_perimeter + math.pi * r * r

    @property
    def perimeter(self) -> float:
        return self.core_perimeter + TWO_PI * self.radius

    @cached_property
    def halfplanes(self) -> tuple[np.ndarray, np.ndarray]:
        """Outward unit normals and offsets of the core edges (polygon cores only)."""
        v = self.core
        d = _next(v) - v
        n = np.column_stack([d[:, 1], -d[:, 0]]) / np.hypot(d[:, 0], d[:, 1])[:, None]
        return n, np.einsum("ij,ij->i", n, v)

    @cached_property
    def inradius(self) -> float:
        if len(self.core) < 3:
            return self.radius
        n, c = self.halfplanes
        res = linprog(
            [0.0, 0.0, -1.0],
            A_ub=np.column_stack([n, np.ones(len(n))]),
            b_ub=c,
            bounds=[(None, None), (None, None), (0, None)],
            method="highs",
        )
        return float(res.x[2]) + self.radius

    @cached_property
    def bbox(self):
        v, r = self.core, self.radius
        return (v[:, 0].min() - r, v[:, 1].min() - r, v[:, 0].max() + r, v[:, 1].max() + r)

    # -- predicates -----------------------------------------------------
    def signed_distance(self, pts) -> np.ndarray:
        """Signed distance to the boundary, negative inside; vectorised."""
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        v = self.core
        if len(v) == 1:
            d = np.hypot(p[:, 0] - v[0, 0], p[:, 1] - v[0, 1])
        elif len(v) == 2:
            d = _segment_distance(p, v[:1], v[1:])[:, 0]
        else:
            n, c = self.halfplanes
            s = p @ n.T - c
            smax = s.max(axis=1)
            d = np.where(smax <= 0, smax, 0.0)
            out = smax > 0
            if out.any():
                d[out] = _segment_distance(p[out], v, _next(v)).min(axis=1)
        d = d - self.radius
        return d if np.ndim(pts) > 1 else d[0]

    def contains_body(self, other: "ConvexBody", clearance: float = 0.0) -> bool:
        """``other`` lies inside with at least ``clearance`` to the boundary."""
        sd = self.signed_distance(other.core)
        return bool(np.all(sd <= -(other.radius + clearance)))

    def distance_to(self, other: "ConvexBody") -> float:
        """Gap between the two bodies (<= 0 when they overlap)."""
        return _core_distance(self.core, other.core) - self.radius - other.radius

    # -- morphology -----------------------------------------------------
    def erode(self, s: float) -> "ConvexBody | None":
        """Inner parallel body ``{x : B_s(x) in self}``; None when empty."""
        if s < 0:
            raise GeometryError("erosion radius must be >= 0")
        if s <= self.radius:
            if s == self.radius and len(self.core) < 3:
                return None
            return ConvexBody(self.core, self.radius - s, self.free_rounding)
        if len(self.core) < 3:
            return None
        depth = s - self.radius
        n, c = self.halfplanes
        v = np.array(self.core)
        for i in range(len(n)):
            v = clip_halfplane(v, n[i], c[i] - depth)
            if len(v) < 3:
                return None
        scale = max(1.0, float(np.abs(self.core).max()))
        if polygon_area(v) <= 1e-13 * scale * scale:
            return None
        return ConvexBody(v, 0.0)

    def dilate(self, s: float, free: bool = False) -> "ConvexBody":
        if s < 0:
            raise GeometryError("dilation radius must be >= 0")
        return ConvexBody(self.core, self.radius + s, free if s > 0 else self.free_rounding)

    def opening(self, s: float) -> "ConvexBody | None":
        if s <= self.radius:
            return self
        core = self.erode(s)
        if core is None:
            return None
        return core.dilate(s, free=True)

    # -- conversion -----------------------------------------------------
    def boundary(self) -> ArcPath:
        v, r = self.core, self.radius
        free = self.free_rounding
        if len(v) == 1:
            return ArcPath((Edge.arc(v[0], r, 0.0, math.pi, free), Edge.arc(v[0], r, math.pi, math.pi, free)))
        k = len(v)
        if r == 0:
            return ArcPath(tuple(Edge.segment(v[i], v[(i + 1) % k]) for i in range(k)))
        d = _next(v) - v
        n = np.column_stack([d[:, 1], -d[:, 0]]) / np.hypot(d[:, 0], d[:, 1])[:, None]
        edges = []
        for i in range(k):
            j = (i + 1) % k
            edges.append(Edge.segment(v[i] + r * n[i], v[j] + r * n[i]))
            turn = math.atan2(n[i, 0] * n[j, 1] - n[i, 1] * n[j, 0], float(n[i] @ n[j]))
            if turn <= -1e-15:
                turn += TWO_PI
            if turn > 1e-14:
                a0 = math.atan2(n[i, 1], n[i, 0])
                arc = Edge.arc(v[j], r, a0, turn, free)
                edges[-1] = Edge(edges[-1].start, arc.start)
                edges.append(arc)
        # snap the first segment start to the last arc end
        last = edges[-1]
        edges[0] = Edge(last.end, edges[0].end) if not edges[0].is_arc else edges[0]
        return ArcPath(tuple(edges))

    def to_region(self) -> ArcRegion:
        return ArcRegion((self.boundary(),))

    def transformed(self, factor=1.0, offset=(0.0, 0.0)) -> "ConvexBody":
        return ConvexBody(self.core * factor + np.asarray(offset, dtype=float), self.radius * factor, self.free_rounding)

    @classmethod
    def from_region(cls, region: ArcRegion) -> "ConvexBody":
        """Recover ``Q + B_rho`` from a convex region; rejects other shapes."""
        if len(region.loops) != 1 or not region.loops[0].is_convex(1e-9):
            raise UnsupportedGeometryError("region is not a single convex loop")
        edges = region.loops[0].edges
        arcs = [e for e in edges if e.is_arc]
        if not arcs:
            return cls(np.array([e.start for e in edges]))
        rho = arcs[0].radius
        if any(abs(a.radius - rho) > 1e-9 * max(1.0, rho) for a in arcs):
            raise UnsupportedGeometryError("convex region with arcs of different radii")
        centers = _dedupe(np.array([a.center for a in arcs]), 1e-9)
        body = cls(centers, rho, arcs[0].free)
        if abs(body.area - region.area) > 1e-9 * max(1.0, region.area) or abs(
            body.perimeter - region.perimeter
        ) > 1e-9 * max(1.0, region.perimeter):
            raise UnsupportedGeometryError("convex region is not a rounded polygon")
        return body


def _core_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between two convex cores (0 when they intersect)."""
    for p, q in ((a, b), (b, a)):
        if len(q) >= 3:
            if (ConvexBody(q).signed_distance(p) <= 0).any():
                return 0.0
    if len(a) >= 2 and len(b) >= 2:
        from ._arrangement import segments_cross

        ea = [(a[i], a[(i + 1) % len(a)]) for i in range(len(a) if len(a) > 2 else 1)]
        eb = [(b[i], b[(i + 1) % len(b)]) for i in range(len(b) if len(b) > 2 else 1)]
        for s in ea:
            for t in eb:
                if segments_cross(s[0], s[1], t[0], t[1]):
                    return 0.0

    def pe(p, q):
        if len(q) == 1:
            return np.hypot(p[:, 0] - q[0, 0], p[:, 1] - q[0, 1]).min()
        nq = len(q) if len(q) > 2 else 1
        qa = q[:nq]
        qb = _next(q)[:nq]
        return _segment_distance(p, qa, qb).min()

    return float(min(pe(a, b), pe(b, a)))


# --------------------------------------------------------------------------
# shape primitives
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float
    kind: str = field(default="disk", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", _pt(self.center))
        if not self.radius > 0:
            raise ValidationError(f"disk radius must be positive, got {self.radius}")

    @cached_property
    def body(self) -> ConvexBody:
        return ConvexBody(np.array([self.center]), float(self.radius))

    def transformed(self, factor=1.0, offset=(0.0, 0.0)) -> "Disk":
        return Disk((factor * self.center.x + offset[0], factor * self.center.y + offset[1]), factor * self.radius)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle."""

    center: Point
    width: float
    height: float
    kind: str = field(default="rectangle", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", _pt(self.center))
        if not (self.width > 0 and self.height > 0):
            raise ValidationError("rectangle sides must be positive")

    @cached_property
    def body(self) -> ConvexBody:
        cx, cy = self.center
        w, h = 0.5 * self.width, 0.5 * self.height
        return ConvexBody(np.array([[cx - w, cy - h], [cx + w, cy - h], [cx + w, cy + h], [cx - w, cy + h]]))

    def transformed(self, factor=1.0, offset=(0.0, 0.0)) -> "Rectangle":
        c = (factor * self.center.x + offset[0], factor * self.center.y + offset[1])
        return Rectangle(c, factor * self.width, factor * self.height)


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple[Point, ...]
    kind: str = field(default="polygon", init=False, repr=False)

    def __post_init__(self):
        v = tuple(_pt(p) for p in self.vertices)
        if len(v) < 3:
            raise ValidationError("polygon needs at least 3 vertices")
        arr = np.array(v)
        if polygon_area(arr) <= 0:
            raise ValidationError("polygon vertices must be counter-clockwise")
        hull = convex_hull(arr)
        if len(hull) != len(_dedupe(arr)):
            raise ValidationError("polygon is not strictly convex")
        object.__setattr__(self, "vertices", v)

    @cached_property
    def body(self) -> ConvexBody:
        return ConvexBody(np.array(self.vertices))

    def transformed(self, factor=1.0, offset=(0.0, 0.0)) -> "ConvexPolygon":
        return ConvexPolygon(tuple((factor * p.x + offset[0], factor * p.y + offset[1]) for p in self.vertices))

    @classmethod
    def regular(cls, center, circumradius: float, n: int, angle: float = 0.0) -> "ConvexPolygon":
        a = angle + TWO_PI * np.arange(n) / n
        return cls(tuple(zip(center[0] + circumradius * np.cos(a), center[1] + circumradius * np.sin(a))))

    @classmethod
    def square(cls, center, side: float, angle: float = 0.0) -> "ConvexPolygon":
        """Square rotated by ``angle`` (pi/4 gives the diamond orientation)."""
        return cls.regular(center, side / math.sqrt(2.0), 4, angle + math.pi / 4)


ShapePrimitive = Union[Disk, Rectangle, ConvexPolygon]


def as_body(shape) -> ConvexBody:
    """Convex body of a primitive, a body, or a convex region."""
    if isinstance(shape, ConvexBody):
        return shape
    if isinstance(shape, (Disk, Rectangle, ConvexPolygon)):
        return shape.body
    if isinstance(shape, ArcRegion):
        return ConvexBody.from_region(shape)
    raise UnsupportedGeometryError(f"cannot interpret {type(shape).__name__} as a convex shape")


def to_region(shape) -> ArcRegion:
    if isinstance(shape, ArcRegion):
        return shape
    return as_body(shape).to_region()


# --------------------------------------------------------------------------
# constructions
# --------------------------------------------------------------------------


def convex_envelope(particles: Sequence) -> ArcRegion:
    """Convex hull of the particles as an exact region.

    Supported inputs: a single primitive of any kind, any number of polygonal
    primitives, or disks sharing one radius (hull of centres dilated by it).
    """
    return envelope_body(particles).to_region()


def envelope_body(particles: Sequence) -> ConvexBody:
    particles = list(particles)
    if not particles:
        raise GeometryError("convex envelope of an empty set")
    if len(particles) == 1:
        return as_body(particles[0])
    bodies = [as_body(p) for p in particles]
    radii = {round(b.radius, 12) for b in bodies}
    if len(radii) != 1:
        raise UnsupportedGeometryError(
            "convex envelope supports polygons only or equal-radius disks only; "
            "mixed inputs need the raster fallback (tvgrid)"
        )
    rho = bodies[0].radius
    if rho > 0 and any(len(b.core) != 1 for b in bodies):
        raise UnsupportedGeometryError("rounded polygons mixed with disks are not supported")
    return ConvexBody(np.vstack([b.core for b in bodies]), rho)


def check_particles(domain, particles: Sequence, clearance: float = 0.0) -> None:
    """Raise unless every particle is strictly inside ``domain`` and they are pairwise disjoint."""
    dom = as_body(domain)
    bodies = [as_body(p) for p in particles]
    for i, b in enumerate(bodies):
        if not dom.contains_body(b, clearance):
            raise GeometryError(f"particle {i} touches or crosses the domain boundary")
    for i in range(len(bodies)):
        for j in range(i + 1, len(bodies)):
            if bodies[i].distance_to(bodies[j]) <= clearance:
                raise GeometryError(f"particles {i} and {j} overlap or touch")


def difference_annulus(domain, particles: Sequence) -> ArcRegion:
    """Domain with the particles removed as holes (``Omega minus Omega_s``).

    ``domain`` may be a convex primitive/body/region; particles are convex
    primitives, bodies or regions lying strictly inside and pairwise disjoint.
    """
    dom_region = to_region(domain)
    if not particles:
        return dom_region
    try:
        check_particles(domain, particles)
    except UnsupportedGeometryError:
        _check_regions_sampled(dom_region, [to_region(p) for p in particles])
    holes = tuple(to_region(p).loops[0].reversed() for p in particles)
    return ArcRegion(dom_region.loops + holes)


def _check_regions_sampled(domain: ArcRegion, parts: list[ArcRegion]) -> None:
    from ._arrangement import loops_cross

    for i, p in enumerate(parts):
        if loops_cross(domain.loops + p.loops) or not domain.contains(p.loops[0].edges[0].start):
            raise GeometryError(f"particle {i} is not strictly inside the domain")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            a, b = parts[i], parts[j]
            if loops_cross(a.loops + b.loops) or a.contains(b.loops[0].edges[0].start) or b.contains(
                a.loops[0].edges[0].start
            ):
                raise GeometryError(f"particles {i} and {j} overlap")
