"""Boundary extraction from an arrangement of segments and arcs.

Given a family of candidate edges and a vectorised membership predicate, the
edges are split at all mutual intersections and every piece that separates
"inside" (on its left) from "outside" (on its right) is kept, oriented and
linked into closed loops.  This is how boolean combinations, erosions and
openings of non-convex regions are evaluated exactly: the predicate is cheap
(signed distances) and the output boundary consists of the original curves.
"""
from __future__ import annotations

import math
from dataclasses import replace
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import GeometryError
from .geom import TWO_PI, ArcPath, ArcRegion, Edge, Point, _wrap

Predicate = Callable[[np.ndarray], np.ndarray]


def segments_cross(a, b, c, d) -> bool:
    """Closed segments ``ab`` and ``cd`` share a point."""
    e1 = Edge.segment(a, b) if np.hypot(*(np.subtract(b, a))) > 0 else None
    e2 = Edge.segment(c, d) if np.hypot(*(np.subtract(d, c))) > 0 else None
    if e1 is None or e2 is None:
        return False
    return bool(edge_params(e1, e2, 1e-12))


# --------------------------------------------------------------------------
# pairwise intersections
# --------------------------------------------------------------------------


def _arc_t(e: Edge, x: float, y: float, tol: float):
    """Parameter of a point (assumed on the circle) along arc ``e``, or None."""
    th = math.atan2(y - e.center.y, x - e.center.x)
    sw = abs(e.sweep)
    v = _wrap(th - e.a0) if e.sweep > 0 else _wrap(e.a0 - th)
    tang = tol / e.radius
    if v > sw + tang and v > TWO_PI - tang:
        v -= TWO_PI
    if -tang <= v <= sw + tang:
        return min(max(v / sw, 0.0), 1.0)
    return None


def _seg_t(e: Edge, x: float, y: float, tol: float):
    dx, dy = e.end.x - e.start.x, e.end.y - e.start.y
    dd = dx * dx + dy * dy
    t = ((x - e.start.x) * dx + (y - e.start.y) * dy) / dd
    tt = tol / math.sqrt(dd)
    if -tt <= t <= 1 + tt:
        return min(max(t, 0.0), 1.0)
    return None


def _param(e: Edge, x: float, y: float, tol: float):
    return _arc_t(e, x, y, tol) if e.is_arc else _seg_t(e, x, y, tol)


def _line_circle(p: Point, q: Point, c: Point, rho: float, tol: float):
    """Points of the line through p, q on the circle (c, rho)."""
    dx, dy = q.x - p.x, q.y - p.y
    ln = math.hypot(dx, dy)
    ux, uy = dx / ln, dy / ln
    wx, wy = c.x - p.x, c.y - p.y
    s = wx * ux + wy * uy
    h = ux * wy - uy * wx
    fx, fy = p.x + s * ux, p.y + s * uy
    if abs(h) > rho + tol:
        return []
    if abs(abs(h) - rho) <= tol:
        return [(fx, fy)]
    w = math.sqrt(rho * rho - h * h)
    return [(fx - w * ux, fy - w * uy), (fx + w * ux, fy + w * uy)]


def _circle_circle(c1: Point, r1: float, c2: Point, r2: float, tol: float):
    dx, dy = c2.x - c1.x, c2.y - c1.y
    d = math.hypot(dx, dy)
    if d > r1 + r2 + tol or d < abs(r1 - r2) - tol or d < tol:
        return []
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    bx, by = c1.x + a * dx / d, c1.y + a * dy / d
    if abs(d - (r1 + r2)) <= tol or abs(d - abs(r1 - r2)) <= tol:
        return [(bx, by)]
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    return [(bx - h * dy / d, by + h * dx / d), (bx + h * dy / d, by - h * dx / d)]


def edge_params(e1: Edge, e2: Edge, tol: float) -> list[tuple[float, float]]:
    """Parameter pairs ``(t1, t2)`` of common points of two edges."""
    out = []
    if not e1.is_arc and not e2.is_arc:
        p, q = e1.start, e2.start
        rx, ry = e1.end.x - p.x, e1.end.y - p.y
        sx, sy = e2.end.x - q.x, e2.end.y - q.y
        l1, l2 = math.hypot(rx, ry), math.hypot(sx, sy)
        den = rx * sy - ry * sx
        qpx, qpy = q.x - p.x, q.y - p.y
        if abs(den) <= 1e-13 * l1 * l2:
            if abs(qpx * ry - qpy * rx) / l1 > tol:
                return []
            cands = [(e1.start, None, 0.0), (e1.end, None, 1.0), (e2.start, 0.0, None), (e2.end, 1.0, None)]
            for pt, u, t in cands:
                if t is None:
                    t = _seg_t(e1, pt.x, pt.y, tol)
                else:
                    u = _seg_t(e2, pt.x, pt.y, tol)
                if t is not None and u is not None:
                    out.append((t, u))
            return out
        t = (qpx * sy - qpy * sx) / den
        u = (qpx * ry - qpy * rx) / den
        if -tol / l1 <= t <= 1 + tol / l1 and -tol / l2 <= u <= 1 + tol / l2:
            out.append((min(max(t, 0.0), 1.0), min(max(u, 0.0), 1.0)))
        return out
    if e1.is_arc and e2.is_arc:
        if math.hypot(e1.center.x - e2.center.x, e1.center.y - e2.center.y) < tol and abs(e1.radius - e2.radius) < tol:
            for pt, u in ((e2.start, 0.0), (e2.end, 1.0)):
                t = _arc_t(e1, pt.x, pt.y, tol)
                if t is not None:
                    out.append((t, u))
            for pt, t in ((e1.start, 0.0), (e1.end, 1.0)):
                u = _arc_t(e2, pt.x, pt.y, tol)
                if u is not None:
                    out.append((t, u))
            return out
        pts = _circle_circle(e1.center, e1.radius, e2.center, e2.radius, tol)
    elif e1.is_arc:
        pts = _line_circle(e2.start, e2.end, e1.center, e1.radius, tol)
    else:
        pts = _line_circle(e1.start, e1.end, e2.center, e2.radius, tol)
    for x, y in pts:
        t = _param(e1, x, y, tol)
        if t is None:
            continue
        u = _param(e2, x, y, tol)
        if u is not None:
            out.append((t, u))
    return out


def _bbox_array(edges: Sequence[Edge]) -> np.ndarray:
    return np.array([e.bbox for e in edges], dtype=float).reshape(-1, 4)


def _bbox_pair_arrays(b: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs ``i < j`` with overlapping (tol-inflated) boxes, by a sweep in x."""
    n = len(b)
    if n < 2:
        e = np.zeros(0, dtype=np.intp)
        return e, e
    order = np.argsort(b[:, 0], kind="stable")
    xs = b[order, 0] - tol
    reach = np.searchsorted(xs, b[order, 2] + tol, side="right")
    first = np.arange(n) + 1
    counts = np.maximum(reach - first, 0)
    total = int(counts.sum())
    if total == 0:
        e = np.zeros(0, dtype=np.intp)
        return e, e
    ii = np.repeat(np.arange(n), counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    jj = np.repeat(first, counts) + offs
    a, c = order[ii], order[jj]
    m = (b[c, 1] - tol <= b[a, 3] + tol) & (b[c, 3] + tol >= b[a, 1] - tol)
    a, c = a[m], c[m]
    return np.minimum(a, c), np.maximum(a, c)


def _bbox_pairs(edges: Sequence[Edge], tol: float, groups=None):
    i, j = _bbox_pair_arrays(_bbox_array(edges), tol)
    return list(zip(i.tolist(), j.tolist()))


class _Packed:
    """Edge data as arrays for batched intersection tests."""

    def __init__(self, edges: Sequence[Edge]):
        self.arc = np.array([e.is_arc for e in edges], dtype=bool)
        self.p0 = np.array([e.start for e in edges], dtype=float).reshape(-1, 2)
        self.p1 = np.array([e.end for e in edges], dtype=float).reshape(-1, 2)
        self.c = np.array([e.center if e.is_arc else (np.nan, np.nan) for e in edges], dtype=float).reshape(-1, 2)
        self.r = np.array([e.radius for e in edges], dtype=float)
        self.a0 = np.array([e.a0 for e in edges], dtype=float)
        self.sw = np.array([e.sweep for e in edges], dtype=float)

    def arc_t(self, k, x, y, tol):
        th = np.arctan2(y - self.c[k, 1], x - self.c[k, 0])
        sw = np.abs(self.sw[k])
        v = np.where(self.sw[k] > 0, np.mod(th - self.a0[k], TWO_PI), np.mod(self.a0[k] - th, TWO_PI))
        tang = tol / self.r[k]
        v = np.where((v > sw + tang) & (v > TWO_PI - tang), v - TWO_PI, v)
        ok = (v >= -tang) & (v <= sw + tang)
        return np.clip(v / sw, 0.0, 1.0), ok

    def seg_t(self, k, x, y, tol):
        d = self.p1[k] - self.p0[k]
        dd = np.einsum("ij,ij->i", d, d)
        t = ((x - self.p0[k, 0]) * d[:, 0] + (y - self.p0[k, 1]) * d[:, 1]) / dd
        tt = tol / np.sqrt(dd)
        ok = (t >= -tt) & (t <= 1 + tt)
        return np.clip(t, 0.0, 1.0), ok

    def param(self, k, x, y, tol):
        ta, oka = self.arc_t(k, x, y, tol)
        ts, oks = self.seg_t(k, x, y, tol)
        a = self.arc[k]
        return np.where(a, ta, ts), np.where(a, oka, oks)


def _emit(out, i, j, t, u, ok):
    out[0].append(i[ok])
    out[1].append(j[ok])
    out[2].append(t[ok])
    out[3].append(u[ok])


def _check_points(pk, out, i, j, x, y, valid, tol):
    if not valid.any():
        return
    i, j, x, y = i[valid], j[valid], x[valid], y[valid]
    with np.errstate(invalid="ignore", divide="ignore"):
        t, ok1 = pk.param(i, x, y, tol)
        u, ok2 = pk.param(j, x, y, tol)
    _emit(out, i, j, t, u, ok1 & ok2)


def pair_hits(edges: Sequence[Edge], tol: float, pairs=None):
    """All common points of edge pairs as arrays ``(i, j, t_i, t_j)``.

    Generic configurations are handled in batches; parallel segments and
    coincident circles go through :func:`edge_params`.
    """
    if pairs is None:
        pi, pj = _bbox_pair_arrays(_bbox_array(edges), tol)
    else:
        pi, pj = pairs
    out: list[list] = [[], [], [], []]
    if len(pi):
        pk = _Packed(edges)
        ai, aj = pk.arc[pi], pk.arc[pj]
        slow = []
        with np.errstate(invalid="ignore", divide="ignore"):
            # segment / segment
            m = ~ai & ~aj
            if m.any():
                i, j = pi[m], pj[m]
                p, q = pk.p0[i], pk.p0[j]
                rv, sv = pk.p1[i] - p, pk.p1[j] - q
                l1, l2 = np.hypot(*rv.T), np.hypot(*sv.T)
                den = rv[:, 0] * sv[:, 1] - rv[:, 1] * sv[:, 0]
                qp = q - p
                par = np.abs(den) <= 1e-13 * l1 * l2
                slow.append(np.column_stack([i[par], j[par]]))
                g = ~par
                t = (qp[:, 0] * sv[:, 1] - qp[:, 1] * sv[:, 0]) / np.where(g, den, 1.0)
                u = (qp[:, 0] * rv[:, 1] - qp[:, 1] * rv[:, 0]) / np.where(g, den, 1.0)
                ok = g & (t >= -tol / l1) & (t <= 1 + tol / l1) & (u >= -tol / l2) & (u <= 1 + tol / l2)
                _emit(out, i, j, np.clip(t, 0, 1), np.clip(u, 0, 1), ok)
            # arc / arc
            m = ai & aj
            if m.any():
                i, j = pi[m], pj[m]
                c1, c2, r1, r2 = pk.c[i], pk.c[j], pk.r[i], pk.r[j]
                dv = c2 - c1
                d = np.hypot(*dv.T)
                same = (d < tol) & (np.abs(r1 - r2) < tol)
                slow.append(np.column_stack([i[same], j[same]]))
                valid = ~same & (d <= r1 + r2 + tol) & (d >= np.abs(r1 - r2) - tol) & (d >= tol)
                ds = np.where(valid, d, 1.0)
                a = (ds * ds + r1 * r1 - r2 * r2) / (2 * ds)
                bx, by = c1[:, 0] + a * dv[:, 0] / ds, c1[:, 1] + a * dv[:, 1] / ds
                tangent = (np.abs(d - (r1 + r2)) <= tol) | (np.abs(d - np.abs(r1 - r2)) <= tol)
                h = np.where(tangent, 0.0, np.sqrt(np.maximum(r1 * r1 - a * a, 0.0)))
                hx, hy = -h * dv[:, 1] / ds, h * dv[:, 0] / ds
                _check_points(pk, out, i, j, bx + hx, by + hy, valid, tol)
                _check_points(pk, out, i, j, bx - hx, by - hy, valid & ~tangent, tol)
            # segment / arc in either order
            m = ai != aj
            if m.any():
                i, j = pi[m], pj[m]
                seg = np.where(pk.arc[i], j, i)
                arc = np.where(pk.arc[i], i, j)
                p = pk.p0[seg]
                dv = pk.p1[seg] - p
                ln = np.hypot(*dv.T)
                ux, uy = dv[:, 0] / ln, dv[:, 1] / ln
                w = pk.c[arc] - p
                s_ = w[:, 0] * ux + w[:, 1] * uy
                hh = ux * w[:, 1] - uy * w[:, 0]
                fx, fy = p[:, 0] + s_ * ux, p[:, 1] + s_ * uy
                rho = pk.r[arc]
                valid = np.abs(hh) <= rho + tol
                tangent = np.abs(np.abs(hh) - rho) <= tol
                wv = np.where(tangent, 0.0, np.sqrt(np.maximum(rho * rho - hh * hh, 0.0)))
                _check_points(pk, out, i, j, fx - wv * ux, fy - wv * uy, valid, tol)
                _check_points(pk, out, i, j, fx + wv * ux, fy + wv * uy, valid & ~tangent, tol)
        for blk in slow:
            for a, b in blk.tolist():
                for t, u in edge_params(edges[a], edges[b], tol):
                    out[0].append(np.array([a]))
                    out[1].append(np.array([b]))
                    out[2].append(np.array([t]))
                    out[3].append(np.array([u]))
    if not out[0]:
        z = np.zeros(0)
        return z.astype(np.intp), z.astype(np.intp), z, z
    return (
        np.concatenate(out[0]).astype(np.intp),
        np.concatenate(out[1]).astype(np.intp),
        np.concatenate(out[2]),
        np.concatenate(out[3]),
    )


def loops_cross(loops: Sequence[ArcPath], tol: float | None = None) -> bool:
    """Whether any two edges meet other than at the shared vertex of consecutive edges."""
    edges, owner = [], []
    for k, lp in enumerate(loops):
        for i, e in enumerate(lp.edges):
            edges.append(e)
            owner.append((k, i, len(lp.edges)))
    if tol is None:
        tol = 1e-10 * _scale(edges)
    hi, hj, ht, hu = pair_hits(edges, tol)
    if not len(hi):
        return False
    own = np.array(owner)
    ki, ii, ni = own[hi].T
    kj, ij, nj = own[hj].T
    same = (ki == kj) & (ni > 1)
    nxt = same & ((ii + 1) % ni == ij) & (ht > 1 - 1e-9) & (hu < 1e-9)
    prv = same & ((ij + 1) % nj == ii) & (ht < 1e-9) & (hu > 1 - 1e-9)
    return bool((~(nxt | prv)).any())


# --------------------------------------------------------------------------
# vectorised point queries
# --------------------------------------------------------------------------


class EdgeArrays:
    """Edges unpacked into arrays for batched winding and distance queries.

    With ``loops`` given, queries are culled per loop: a point outside a
    loop's bounding box gets no winding from it, and only loops whose box
    (inflated by the query radius) contains a point enter distance tests.
    """

    def __init__(self, edges: Sequence[Edge] = (), loops: Sequence[ArcPath] | None = None):
        if loops is not None:
            edges = [e for lp in loops for e in lp.edges]
            sizes = [len(lp.edges) for lp in loops]
            self.bounds = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
            self.boxes = np.array([lp.bbox for lp in loops], dtype=float).reshape(-1, 4)
        else:
            self.bounds = None
        self.edges = list(edges)
        self.start = np.array([e.start for e in edges], dtype=float).reshape(-1, 2)
        self.end = np.array([e.end for e in edges], dtype=float).reshape(-1, 2)
        self.arc = np.array([e.is_arc for e in edges], dtype=bool)
        self.center = np.array([e.center if e.is_arc else (0.0, 0.0) for e in edges], dtype=float).reshape(-1, 2)
        self.radius = np.array([e.radius for e in edges], dtype=float)
        self.sign = np.array([1.0 if e.sweep > 0 else -1.0 for e in edges])
        # CCW representation for angular range tests
        self.lo = np.array([e.a0 if e.sweep > 0 else e.a0 + e.sweep for e in edges], dtype=float)
        self.span = np.array([abs(e.sweep) for e in edges], dtype=float)
        mid = np.array([e.point(0.5) for e in edges], dtype=float).reshape(-1, 2)
        d = self.end - self.start
        self.mid_side = d[:, 0] * (mid[:, 1] - self.start[:, 1]) - d[:, 1] * (mid[:, 0] - self.start[:, 0])

    def _culled(self, pts, pad):
        """Yield ``(edge slice, point indices)`` per loop whose padded box holds points."""
        order = np.argsort(pts[:, 0], kind="stable")
        xs = pts[order, 0]
        for k in range(len(self.boxes)):
            x0, y0, x1, y1 = self.boxes[k]
            i0 = int(np.searchsorted(xs, x0 - pad, side="left"))
            i1 = int(np.searchsorted(xs, x1 + pad, side="right"))
            if i0 >= i1:
                continue
            cand = order[i0:i1]
            y = pts[cand, 1]
            cand = cand[(y >= y0 - pad) & (y <= y1 + pad)]
            if len(cand):
                yield slice(self.bounds[k], self.bounds[k + 1]), cand

    def winding(self, pts: np.ndarray, chunk: int = 4096) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.bounds is not None and len(self.boxes) > 1:
            out = np.zeros(len(pts), dtype=int)
            for sl, idx in self._culled(pts, 0.0):
                for k in range(0, len(idx), chunk):
                    sub = idx[k : k + chunk]
                    out[sub] += self._winding(pts[sub], sl)
            return out
        out = np.empty(len(pts), dtype=int)
        for k in range(0, len(pts), chunk):
            out[k : k + chunk] = self._winding(pts[k : k + chunk])
        return out

    def _winding(self, p, sl=slice(None)):
        s0, s1 = self.start[sl], self.end[sl]
        a = s0[None, :, :] - p[:, None, :]
        b = s1[None, :, :] - p[:, None, :]
        ang = np.arctan2(a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0], np.einsum("mki,mki->mk", a, b))
        arc = self.arc[sl]
        if arc.any():
            c = self.center[sl][None, :, :] - p[:, None, :]
            inside = np.hypot(c[..., 0], c[..., 1]) < self.radius[sl][None, :]
            d = s1 - s0
            side = d[None, :, 0] * (p[:, None, 1] - s0[None, :, 1]) - d[None, :, 1] * (p[:, None, 0] - s0[None, :, 0])
            bump = inside & arc[None, :] & (side * self.mid_side[sl][None, :] > 0)
            ang = ang + np.where(bump, TWO_PI * self.sign[sl][None, :], 0.0)
        return np.rint(ang.sum(axis=1) / TWO_PI).astype(int)

    def distance(self, pts: np.ndarray, chunk: int = 2048) -> np.ndarray:
        """Unsigned distance to the union of the edges."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.empty(len(pts))
        for k in range(0, len(pts), chunk):
            out[k : k + chunk] = self._distance(pts[k : k + chunk])
        return out

    def within(self, pts: np.ndarray, r: float, chunk: int = 2048) -> np.ndarray:
        """``distance(pts) < r``, evaluated only against nearby loops."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.bounds is None or len(self.boxes) <= 1:
            return self.distance(pts, chunk) < r
        out = np.zeros(len(pts), dtype=bool)
        for sl, idx in self._culled(pts, r):
            for k in range(0, len(idx), chunk):
                sub = idx[k : k + chunk]
                out[sub] |= self._distance(pts[sub], sl) < r
        return out

    def _distance(self, p, sl=slice(None)):
        s0, s1 = self.start[sl], self.end[sl]
        d = s1 - s0
        dd = np.einsum("ij,ij->i", d, d)
        dd = np.where(dd > 0, dd, 1.0)
        w = p[:, None, :] - s0[None, :, :]
        t = np.clip(np.einsum("mki,ki->mk", w, d) / dd, 0.0, 1.0)
        q = s0[None] + t[..., None] * d[None]
        seg = np.hypot(p[:, None, 0] - q[..., 0], p[:, None, 1] - q[..., 1])
        arc = self.arc[sl]
        if not arc.any():
            return seg.min(axis=1)
        c = p[:, None, :] - self.center[sl][None, :, :]
        rc = np.hypot(c[..., 0], c[..., 1])
        th = np.arctan2(c[..., 1], c[..., 0])
        within = np.mod(th - self.lo[sl][None, :], TWO_PI) <= self.span[sl][None, :]
        ends = np.minimum(
            np.hypot(p[:, None, 0] - s0[None, :, 0], p[:, None, 1] - s0[None, :, 1]),
            np.hypot(p[:, None, 0] - s1[None, :, 0], p[:, None, 1] - s1[None, :, 1]),
        )
        arcd = np.where(within, np.abs(rc - self.radius[sl][None, :]), ends)
        return np.where(arc[None, :], arcd, seg).min(axis=1)


def region_predicate(region: ArcRegion) -> Predicate:
    ea = EdgeArrays(loops=region.loops)
    return lambda pts: ea.winding(pts) > 0


# --------------------------------------------------------------------------
# extraction
# --------------------------------------------------------------------------


def _scale(edges) -> float:
    b = np.array([e.bbox for e in edges])
    return max(1.0, float(np.abs(b).max()))


def split_edges(edges: Sequence[Edge], tol: float) -> list[Edge]:
    hi, hj, ht, hu = pair_hits(edges, tol)
    idx = np.concatenate([hi, hj])
    par = np.concatenate([ht, hu])
    order = np.lexsort((par, idx))
    idx, par = idx[order], par[order]
    bounds = np.searchsorted(idx, np.arange(len(edges) + 1))
    pieces = []
    for k, e in enumerate(edges):
        lo, hi_ = bounds[k], bounds[k + 1]
        if lo == hi_:
            pieces.append(e)
            continue
        dt = tol / e.length
        cuts = [0.0]
        for t in par[lo:hi_].tolist():
            if t - cuts[-1] > dt:
                cuts.append(t)
        if 1.0 - cuts[-1] <= dt:
            cuts[-1] = 1.0
        else:
            cuts.append(1.0)
        if len(cuts) == 2:
            pieces.append(e)
            continue
        for a, b in zip(cuts[:-1], cuts[1:]):
            pieces.append(e.sub(a, b))
    return pieces


def _same_carrier(a: Edge, b: Edge, tol: float) -> bool:
    if a.is_arc != b.is_arc or a.free != b.free:
        return False
    if a.is_arc:
        return (
            math.hypot(a.center.x - b.center.x, a.center.y - b.center.y) < tol
            and abs(a.radius - b.radius) < tol
            and a.sweep * b.sweep > 0
            and abs(a.sweep + b.sweep) < TWO_PI - 1e-6
        )
    ta, tb = a.tangent(0.0), b.tangent(0.0)
    return abs(ta[0] * tb[1] - ta[1] * tb[0]) < 1e-12 and ta[0] * tb[0] + ta[1] * tb[1] > 0


def _merge(a: Edge, b: Edge) -> Edge:
    if a.is_arc:
        return Edge(a.start, b.end, a.center, a.radius, a.a0, a.sweep + b.sweep, a.free)
    return Edge(a.start, b.end)


def corner_turn(e_in: Edge, e_out: Edge) -> float:
    """Signed turning angle from the end of ``e_in`` to the start of ``e_out``.

    Antiparallel tangents (cusps) are resolved to +pi or -pi by looking at
    short chords on either side of the junction.
    """
    ti, to = e_in.tangent(1.0), e_out.tangent(0.0)
    turn = math.atan2(ti[0] * to[1] - ti[1] * to[0], ti[0] * to[0] + ti[1] * to[1])
    if abs(turn) < math.pi - 1e-7:
        return turn
    a = e_in.point(1.0 - min(1e-3, 1e-3 * e_out.length / e_in.length))
    b = e_out.point(min(1e-3, 1e-3 * e_in.length / e_out.length))
    p = e_in.end
    ux, uy = p.x - a.x, p.y - a.y
    vx, vy = b.x - p.x, b.y - p.y
    return math.pi if ux * vy - uy * vx >= 0 else -math.pi


def link_pieces(pieces: Sequence[Edge], tol: float, merge: bool = True) -> list[ArcPath]:
    """Chain oriented pieces into closed loops, taking the leftmost turn at junctions."""
    n = len(pieces)
    if n == 0:
        return []
    starts = np.array([p.start for p in pieces])
    tree = cKDTree(starts)
    used = np.zeros(n, dtype=bool)
    loops = []

    def curvature(e):
        return (1.0 if e.sweep > 0 else -1.0) / e.radius if e.is_arc else 0.0

    for s in range(n):
        if used[s]:
            continue
        chain = [s]
        used[s] = True
        closed = False
        while True:
            cur = pieces[chain[-1]]
            cands = [j for j in tree.query_ball_point(cur.end, tol) if not used[j] or j == s]
            if not cands:
                break
            best, key = None, None
            for j in cands:
                turn = corner_turn(cur, pieces[j])
                k = (round(turn, 7), curvature(pieces[j]))
                if key is None or k > key:
                    best, key = j, k
            if best == s:
                closed = True
                break
            chain.append(best)
            used[best] = True
        loop = [pieces[j] for j in chain]
        if not closed:
            # debris from features thinner than the probe offset
            if sum(e.length for e in loop) < 1e3 * tol:
                continue
            raise GeometryError("open boundary chain while tracing region")
        if merge and len(loop) > 1:
            merged = [loop[0]]
            for e in loop[1:]:
                if _same_carrier(merged[-1], e, tol):
                    merged[-1] = _merge(merged[-1], e)
                else:
                    merged.append(e)
            while len(merged) > 2 and _same_carrier(merged[-1], merged[0], tol):
                merged[0] = _merge(merged[-1], merged[0])
                merged.pop()
            loop = merged
        snapped = []
        for i, e in enumerate(loop):
            prev = loop[i - 1]
            snapped.append(replace(e, start=prev.end) if e.start != prev.end else e)
        loops.append(ArcPath(tuple(snapped)))
    return loops


def extract(edges: Sequence[Edge], inside: Predicate, scale: float | None = None) -> list[ArcPath]:
    """Loops bounding ``{inside}`` built from pieces of ``edges``."""
    edges = [e for e in edges if e.length > 0]
    if not edges:
        return []
    if scale is None:
        scale = _scale(edges)
    tol = 1e-10 * scale
    pieces = [p for p in split_edges(edges, tol) if p.length > 1e-11 * scale]
    if not pieces:
        return []
    mids = np.array([p.point(0.5) for p in pieces])
    tans = np.array([p.tangent(0.5) for p in pieces])
    lens = np.array([p.length for p in pieces])
    eps = np.minimum(1e-9 * scale, 0.05 * lens)[:, None]
    left = np.column_stack([-tans[:, 1], tans[:, 0]])
    inl = np.asarray(inside(mids + eps * left), dtype=bool)
    inr = np.asarray(inside(mids - eps * left), dtype=bool)
    keep = []
    for i, p in enumerate(pieces):
        if inl[i] and not inr[i]:
            keep.append(p)
        elif inr[i] and not inl[i]:
            keep.append(p.reversed())
    if not keep:
        return []
    # drop duplicates from overlapping carriers
    kmid = np.array([p.point(0.5) for p in keep])
    dup = np.zeros(len(keep), dtype=bool)
    for i, j in sorted(cKDTree(kmid).query_pairs(1e-8 * scale)):
        if dup[i] or dup[j]:
            continue
        a, b = keep[i], keep[j]
        if math.hypot(a.start.x - b.start.x, a.start.y - b.start.y) < 1e-8 * scale:
            dup[j] = True
    keep = [p for p, d in zip(keep, dup) if not d]
    return link_pieces(keep, 1e-8 * scale)


def regions_from_loops(loops: Sequence[ArcPath]) -> ArcRegion | None:
    loops = [lp for lp in loops if abs(lp.signed_area) > 0]
    if not loops or sum(lp.signed_area for lp in loops) <= 0:
        return None
    return ArcRegion(tuple(loops))


def boolean(a: ArcRegion, b: ArcRegion, op: str) -> ArcRegion | None:
    """``union``, ``intersection`` or ``difference`` of two regions."""
    pa, pb = region_predicate(a), region_predicate(b)
    if op == "union":
        pred = lambda x: pa(x) | pb(x)
    elif op == "intersection":
        pred = lambda x: pa(x) & pb(x)
    elif op == "difference":
        pred = lambda x: pa(x) & ~pb(x)
    else:
        raise ValueError(op)
    return regions_from_loops(extract(list(a.edges) + list(b.edges), pred))
