"""Closed-form and scalar-root solutions of the worked examples.

Every example reduces to scalar self-consistency equations: a candidate set
``C_r`` whose free arcs have radius ``r`` is a Cheeger candidate exactly when
``r Per(C_r) = |C_r|``.  Areas and perimeters are written out by hand here
(quadratics for opened polygons, fillet formulas for bridges) so the module
is an oracle for the generic pipeline that never touches its geometry code.

Supported kinds and parameters:

``disk-in-disk``          R
``square-in-disk``        R
``square-in-square``      L
``disk-in-square``        L
``rectangle-in-square``   L, beta   (rectangle of height beta, width 1/beta)
``offset-square``         L, d      (unit square at distance d from the right wall)
``two-squares``           d, R=5    (aligned unit squares, centres d apart, disk of radius R)
``periodic-disks``        L, N, a, delta   (N x N disks of radius delta, outer ones at distance a from the wall)

Particles have unit total area except in ``periodic-disks``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import ParameterError

SQRT_PI = math.sqrt(math.pi)
K_AREA = 4.0 - math.pi  # area lost when a square's corners are rounded with radius 1
K_PER = 8.0 - 2.0 * math.pi  # perimeter lost likewise

WHOLE = "whole-annulus"
OPENED_DOMAIN = "opened-domain-minus-particles"
OPENED_ANNULUS = "opened-annulus"
OPENED_CLOSED = "opened-domain-minus-closing"

KINDS = {
    "disk-in-disk": ("R",),
    "square-in-disk": ("R",),
    "square-in-square": ("L",),
    "disk-in-square": ("L",),
    "rectangle-in-square": ("L", "beta"),
    "offset-square": ("L", "d"),
    "two-squares": ("d",),
    "periodic-disks": ("L", "N", "a", "delta"),
}
DEFAULTS = {"two-squares": {"R": 5.0}}
ALIASES = {"β": "beta", "δ": "delta"}


@dataclass(frozen=True)
class SetMeasure:
    area: float
    perimeter: float

    @property
    def ratio(self) -> float:
        return self.perimeter / self.area


@dataclass(frozen=True)
class ExampleCase:
    kind: str
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown example kind {self.kind!r}; choose from {sorted(KINDS)}")
        params = dict(DEFAULTS.get(self.kind, {}))
        for k, v in dict(self.parameters).items():
            params[ALIASES.get(k, k)] = float(v)
        missing = [k for k in KINDS[self.kind] if k not in params]
        if missing:
            raise ParameterError(f"{self.kind} needs parameters {missing}")
        object.__setattr__(self, "parameters", params)
        _check_range(self.kind, params)

    def __getitem__(self, key):
        return self.parameters[key]

    def with_param(self, name: str, value: float) -> "ExampleCase":
        p = dict(self.parameters)
        p[ALIASES.get(name, name)] = float(value)
        return ExampleCase(self.kind, p)

    def scene(self):
        """Equivalent scene for the generic solver."""
        from .sceneio import example_scene

        return example_scene(self)


@dataclass(frozen=True)
class ExampleSolution:
    """Outcome of a closed-form solve; sets are reported by their measures."""

    case: ExampleCase
    y_c: float
    lambda_c: float
    config: str
    s_value: float
    omega_1c: SetMeasure
    omega_c: SetMeasure
    particle_area: float
    alternatives: Mapping[str, float] = field(default_factory=dict)

    @property
    def radius(self) -> float:
        return 1.0 / self.lambda_c

    @property
    def bridged(self) -> bool:
        return self.config.endswith("/bridged")


def _check_range(kind, p):
    def need(cond, msg):
        if not cond:
            raise ParameterError(f"{kind}: {msg}")

    for k, v in p.items():
        need(math.isfinite(v), f"parameter {k} is not finite")
    if kind == "disk-in-disk":
        need(p["R"] > 1 / SQRT_PI, "R must exceed the particle radius 1/sqrt(pi)")
    elif kind == "square-in-disk":
        need(p["R"] >= 1.0, "R must be at least 1 (the unit square needs clearance)")
    elif kind == "square-in-square":
        need(p["L"] > 1.0, "L must exceed 1")
    elif kind == "disk-in-square":
        need(p["L"] > 2 / SQRT_PI, "L must exceed the particle diameter 2/sqrt(pi)")
    elif kind == "rectangle-in-square":
        need(p["beta"] > 0, "beta must be positive")
        need(p["L"] > max(p["beta"], 1 / p["beta"]), "rectangle must fit inside the square")
    elif kind == "offset-square":
        need(p["L"] > 1.0, "L must exceed 1")
        need(0 < p["d"] <= (p["L"] - 1) / 2, "d must lie in (0, (L-1)/2]")
    elif kind == "two-squares":
        need(p["d"] > 1.0, "squares overlap for d <= 1")
        need(p["R"] > math.hypot(p["d"] / 2 + 0.5, 0.5), "squares must lie inside the disk")
    elif kind == "periodic-disks":
        n = p["N"]
        need(n >= 2 and n == int(n), "N must be an integer >= 2")
        need(p["delta"] > 0 and p["a"] > 0, "delta and a must be positive")
        s = _lattice_spacing(p)
        need(s > 2 * p["delta"], "neighbouring disks overlap")


def _small_root(a: float, b: float, c: float) -> float:
    """Smaller positive root of ``a r^2 - b r + c = 0`` (``a >= 0``, ``b > 0``)."""
    if a == 0:
        return c / b
    disc = b * b - 4 * a * c
    if disc < 0:
        raise ParameterError("self-consistency equation has no real root")
    # cancellation-free form of (b - sqrt(disc)) / (2a)
    return 2 * c / (b + math.sqrt(disc))


def _opened_square_minus(L: float, per_s: float, area_s: float) -> float:
    """Radius for ``open_r(square L)`` minus particles of total perimeter/area.

    ``r (4L - K_PER r + per_s) = L^2 - K_AREA r^2 - area_s`` reduces to
    ``K_AREA r^2 - (4L + per_s) r + (L^2 - area_s) = 0``.
    """
    return _small_root(K_AREA, 4 * L + per_s, L * L - area_s)


def _opened_square(L: float, r: float) -> SetMeasure:
    return SetMeasure(L * L - K_AREA * r * r, 4 * L - K_PER * r)


def _assemble(case, lam_by_family: Mapping[str, float], sets: Mapping[str, tuple], particle_area) -> ExampleSolution:
    """Pick the smallest constant and evaluate ``S`` on its set pair."""
    fam = min(lam_by_family, key=lambda k: (lam_by_family[k], list(lam_by_family).index(k)))
    e1, e_minus, bridged = sets[fam]
    s = e1.perimeter + e1.area / e_minus.area * e_minus.perimeter
    tag = f"{fam}/{'bridged' if bridged else 'particles'}"
    return ExampleSolution(
        case, particle_area / s, lam_by_family[fam], tag, s, e1, e_minus, particle_area, dict(lam_by_family)
    )


# --------------------------------------------------------------------------
# single particles
# --------------------------------------------------------------------------


def _centered_in_disk(case, R, per_s, area_s):
    annulus = SetMeasure(math.pi * R * R - area_s, 2 * math.pi * R + per_s)
    part = SetMeasure(area_s, per_s)
    return _assemble(case, {WHOLE: annulus.ratio}, {WHOLE: (part, annulus, False)}, area_s)


def _centered_in_square(case, L, per_s, area_s, extra=None):
    r = _opened_square_minus(L, per_s, area_s)
    op = _opened_square(L, r)
    c1 = SetMeasure(op.area - area_s, op.perimeter + per_s)
    whole = SetMeasure(L * L - area_s, 4 * L + per_s)
    part = SetMeasure(area_s, per_s)
    lams = {WHOLE: whole.ratio, OPENED_DOMAIN: c1.ratio}
    sets = {WHOLE: (part, whole, False), OPENED_DOMAIN: (part, c1, False)}
    if extra:
        for fam, meas in extra.items():
            lams[fam] = meas.ratio
            sets[fam] = (part, meas, False)
    return _assemble(case, lams, sets, area_s)


def rectangle_config_radii(L: float, beta: float) -> tuple[float, float | None]:
    """Free-arc radii of the two rectangle configurations.

    Configuration 1 is ``open_r(square) minus rectangle``.  Configuration 2
    is the pair of slabs above and below the rectangle, each an ``L x h``
    rectangle (``h = (L - beta)/2``) with rounded corners:
    ``K_AREA r^2 - (2L + 2h) r + L h = 0``.  It is admissible only when the
    side channels are too narrow for a radius-r disk and the rounded slab
    corners rest on the rectangle; otherwise None.
    """
    per_s = 2 * (beta + 1 / beta)
    r1 = _opened_square_minus(L, per_s, 1.0)
    h = 0.5 * (L - beta)
    r2 = _small_root(K_AREA, 2 * L + 2 * h, L * h)
    side = 0.5 * (L - 1 / beta)
    ok = side < 2 * r2 and 0.5 * L - r2 <= 0.5 / beta and 2 * r2 <= h
    return r1, (r2 if ok else None)


def _rectangle(case):
    L, beta = case["L"], case["beta"]
    per_s = 2 * (beta + 1 / beta)
    _, r2 = rectangle_config_radii(L, beta)
    extra = {}
    if r2 is not None:
        h = 0.5 * (L - beta)
        slab = SetMeasure(L * h - K_AREA * r2 * r2, 2 * (L + h) - K_PER * r2)
        # both slabs tie; their union is the maximal set
        extra[OPENED_ANNULUS] = SetMeasure(2 * slab.area, 2 * slab.perimeter)
    return _centered_in_square(case, L, per_s, 1.0, extra)


def _offset_gap(L: float, d: float, r: float):
    """Area and perimeter changes when the wall gap next to the square is cut off.

    Returns ``(area removed beyond the particle, wall length removed,
    particle boundary removed, free arc length added)`` for the component of
    ``open_r(domain minus square)`` with a gap ``d < 2r``.
    """
    if d <= r:
        # the limiting disk rests on the particle's top face and the wall
        y_star = 0.5 + r
        area_half = 0.5 * d + r * r * (1 - math.pi / 4)
        particle_removed = 1.0 + 2 * (r - d)
        arc = 0.5 * math.pi * r
    else:
        # the limiting disk rests on the particle's corner and the wall
        q = math.sqrt(r * r - (d - r) ** 2)
        y_star = 0.5 + q
        phi = math.atan2(q, d - r)  # angle below the horizontal, in (pi/2, pi) measured from the wall direction
        theta = math.pi - phi  # central angle of the free arc
        # quadrilateral (x_p,0),(L/2,0),(L/2,y*),(x_p,1/2) minus the circular segment
        quad = 0.5 * d * (y_star + 0.5)
        seg = 0.5 * r * r * (theta - math.sin(theta))
        area_half = quad - seg
        particle_removed = 1.0
        arc = r * theta
    return 2 * area_half, 2 * y_star, particle_removed, 2 * arc


def pinched_component(L: float, w: float, r: float) -> SetMeasure:
    """Component beside a centred-height unit square cut off by narrow channels.

    The channels above and below the square (height ``c = (L-1)/2``) are
    narrower than ``2r``, so the opening splits at the square.  The component
    between the wall and a square face at distance ``w`` is bounded by the
    wall, two corner fillets, the top and bottom walls up to the limiting
    disks, free arcs from those walls to the square's corners, and the face.
    """
    c = 0.5 * (L - 1.0)
    q = math.sqrt(r * r - (c - r) ** 2)
    theta = 0.5 * math.pi + math.asin((c - r) / r)
    # upper half as a polygon on the arc chords, face at x = 0, wall at x = -w
    xs = np.array([-w, 0.0, 0.0, -q, -w])
    ys = np.array([0.0, 0.0, 0.5, 0.5 * L, 0.5 * L])
    poly = 0.5 * float(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1)))
    seg = 0.5 * r * r * (theta - math.sin(theta))
    area = 2 * (poly + seg - r * r * (1 - math.pi / 4))
    per = (L - 2 * r) + math.pi * r + 2 * (w - q - r) + 2 * r * theta + 1.0
    return SetMeasure(area, per)


def _root(psi, lo, hi):
    if not lo < hi:
        return None
    a, b = psi(lo), psi(hi)
    if not (a < 0 < b):
        return None
    return brentq(psi, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def _offset_square(case):
    L, d = case["L"], case["d"]
    c = 0.5 * (L - 1.0)
    r1 = _opened_square_minus(L, 4.0, 1.0)
    op1 = _opened_square(L, r1)
    c1 = SetMeasure(op1.area - 1.0, op1.perimeter + 4.0)
    whole = SetMeasure(L * L - 1.0, 4 * L + 4.0)
    part = SetMeasure(1.0, 4.0)

    def gap_set(r):
        op = _opened_square(L, r)
        da, wall, prem, arc = _offset_gap(L, d, r)
        return SetMeasure(op.area - 1.0 - da, op.perimeter - wall + 4.0 - prem + arc)

    lams = {WHOLE: whole.ratio, OPENED_DOMAIN: c1.ratio}
    sets = {WHOLE: (part, whole, False), OPENED_DOMAIN: (part, c1, False)}
    found = []
    # connected opening with the wall gap cut off: d < 2r <= c
    r = _root(lambda r: r * gap_set(r).perimeter - gap_set(r).area, 0.5 * d * (1 + 1e-12), 0.5 * c)
    if r is not None:
        found.append(gap_set(r))
    # pinched channels (c < 2r): one component per side wide enough for the disk
    for w in (L - 1.0 - d, d):
        m = lambda r: pinched_component(L, w, r)
        lo, hi = 0.5 * c * (1 + 1e-12), min(0.5 * w, c) * (1 - 1e-12)
        r = _root(lambda r: r * m(r).perimeter - m(r).area, lo, hi)
        if r is not None:
            found.append(m(r))
    if found:
        best = min(found, key=lambda m: m.ratio)
        lams[OPENED_ANNULUS] = best.ratio
        sets[OPENED_ANNULUS] = (part, best, False)
    return _assemble(case, lams, sets, 1.0)


# --------------------------------------------------------------------------
# two particles with a bridge
# --------------------------------------------------------------------------


def square_pair_closing(d: float, r: float) -> SetMeasure:
    """Closing with radius ``r`` of two aligned unit squares with centres ``d`` apart.

    The gap ``g = d - 1`` is filled except for two circular segments cut by
    the bridge arcs resting on the facing corners (requires ``g < 2r``).
    """
    g = d - 1.0
    half = math.asin(g / (2 * r))
    seg = r * r * half - 0.5 * g * math.sqrt(r * r - 0.25 * g * g)
    return SetMeasure(2.0 + g - 2 * seg, 6.0 + 4 * r * half)


def _two_squares(case):
    d, R = case["d"], case["R"]
    part = SetMeasure(2.0, 8.0)
    disk = SetMeasure(math.pi * R * R, 2 * math.pi * R)
    whole = SetMeasure(disk.area - 2.0, disk.perimeter + 8.0)
    lams = {WHOLE: whole.ratio}
    sets = {WHOLE: (part, whole, False)}
    g = d - 1.0

    def rest(r):
        k = square_pair_closing(d, r)
        return SetMeasure(disk.area - k.area, disk.perimeter + k.perimeter)

    def psi(r):
        m = rest(r)
        return r * m.perimeter - m.area

    lo, hi = 0.5 * g * (1 + 1e-12), R * (1 - 1e-9)
    if psi(lo) < 0 < psi(hi):
        r = brentq(psi, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        k = square_pair_closing(d, r)
        lam = 1.0 / r
        # the bridged pair is only self-consistent when the enclosure prefers it
        if k.perimeter + lam * k.area < part.perimeter + lam * part.area:
            m = rest(r)
            lams[OPENED_CLOSED] = m.ratio
            sets[OPENED_CLOSED] = (k, m, True)
    return _assemble(case, lams, sets, 2.0)


# --------------------------------------------------------------------------
# periodic array of disks
# --------------------------------------------------------------------------


def _lattice_spacing(p) -> float:
    return (p["L"] - 2 * (p["a"] + p["delta"])) / (p["N"] - 1)


@dataclass(frozen=True)
class LatticeClosing:
    """Closing of a disk lattice: outer hull, pockets and their count."""

    filled: SetMeasure  # closing with every pocket filled
    pocket: SetMeasure | None  # one interior pocket (None when pockets close up)
    pockets: int


def lattice_closing(L, N, a, delta, r) -> LatticeClosing | None:
    """Closing with radius ``r`` of the ``N x N`` lattice; None without bridges.

    Neighbouring disks at spacing ``s`` are joined by fillet arcs of radius
    ``r`` centred at height ``h = sqrt((delta + r)^2 - s^2/4)`` above the
    segment joining the centres; ``phi`` is the base angle of that triangle.
    """
    s = (L - 2 * (a + delta)) / (N - 1)
    if s >= 2 * (delta + r):
        return None
    c = delta + r
    phi = math.acos(0.5 * s / c)
    h = c * math.sin(phi)
    m = int(N) - 1
    # strip between two neighbouring outer disks, outside the segment of centres
    strip_area = 0.5 * s * h - 0.5 * (math.pi - 2 * phi) * r * r + (0.5 * math.pi - phi) * delta**2
    strip_per = c * (math.pi - 2 * phi)
    side = m * s
    area = side * side + 4 * m * strip_area + math.pi * delta**2
    per = 4 * m * strip_per + 2 * math.pi * delta
    pocket = None
    if h < 0.5 * s:
        bridge_only = 0.5 * s * h - 0.5 * (math.pi - 2 * phi) * r * r - phi * delta**2
        p_area = s * s - math.pi * delta**2 - 4 * bridge_only
        p_per = 4 * delta * (0.5 * math.pi - 2 * phi) + 4 * r * (math.pi - 2 * phi)
        pocket = SetMeasure(p_area, p_per)
    return LatticeClosing(SetMeasure(area, per), pocket, m * m)


def lens(R: float, r: float, D: float) -> tuple[float, float, float]:
    """Overlap of disks of radii ``R`` and ``r`` at centre distance ``D``.

    Returns the common area, the length of the ``R`` circle inside the
    ``r`` disk and the length of the ``r`` circle inside the ``R`` disk.
    """
    if D >= R + r:
        return 0.0, 0.0, 0.0
    if D <= abs(R - r):
        small = min(R, r)
        return math.pi * small * small, (2 * math.pi * R if R <= r else 0.0), (2 * math.pi * r if r <= R else 0.0)
    al = math.acos((D * D + R * R - r * r) / (2 * D * R))
    be = math.acos((D * D + r * r - R * R) / (2 * D * r))
    area = R * R * (al - 0.5 * math.sin(2 * al)) + r * r * (be - 0.5 * math.sin(2 * be))
    return area, 2 * al * R, 2 * be * r


def opened_square_minus_disks(L: float, centers: np.ndarray, delta: float, r: float) -> SetMeasure:
    """``open_r(square L)`` minus equal disks, some possibly cut by the corner arcs.

    Near a corner the opened square is the disk of radius ``r`` about the
    nearest point of the inner square ``[-L/2 + r, L/2 - r]^2``; each disk
    either lies inside, lies outside or overlaps that corner disk in a lens.
    The lens must stay inside its corner quadrant.
    """
    op = _opened_square(L, r)
    m = 0.5 * L - r
    cc = np.clip(centers, -m, m)
    dist = np.hypot(*(centers - cc).T)
    # signed distance to the opened square, the inner square dilated by r
    depth = m - np.abs(centers).max(axis=1)
    sd = np.where(dist > 0, dist - r, -(r + np.maximum(depth, 0.0)))
    area, per = op.area, op.perimeter
    for p, c, D, sdi in zip(centers, cc, dist, sd):
        if sdi <= -delta:
            area -= math.pi * delta * delta
            per += 2 * math.pi * delta
            continue
        if sdi >= delta:
            continue
        if np.any(np.abs(p) <= m):
            raise ParameterError("a particle crosses the opened square away from its rounded corners")
        la, arc_r, arc_d = lens(r, delta, D)
        # the two circle crossings must lie in the corner quadrant of p
        phi = math.atan2(p[1] - c[1], p[0] - c[0])
        half = 0.5 * arc_r / r
        for ang in (phi - half, phi + half):
            q = r * np.array([math.cos(ang), math.sin(ang)])
            if np.any(q * np.sign(p - c) < -1e-12 * r):
                raise ParameterError("a particle straddles the edge of a rounded corner zone")
        area -= la
        per += arc_d - arc_r
    return SetMeasure(area, per)


def _periodic(case):
    L, N, a, delta = case["L"], case["N"], case["a"], case["delta"]
    n2 = int(N) ** 2
    part = SetMeasure(n2 * math.pi * delta**2, n2 * 2 * math.pi * delta)
    whole = SetMeasure(L * L - part.area, 4 * L + part.perimeter)
    s = _lattice_spacing(case.parameters)
    xs = -0.5 * L + a + delta + s * np.arange(int(N))
    centers = np.array([(x, y) for y in xs for x in xs])
    r1 = _opened_square_minus(L, part.perimeter, part.area)
    c1 = opened_square_minus_disks(L, centers, delta, r1)
    if abs(c1.area - (_opened_square(L, r1).area - part.area)) > 1e-12 * c1.area:
        # corner arcs cut particles: largest root of the exact balance instead
        def psi1(r):
            m = opened_square_minus_disks(L, centers, delta, r)
            return r * m.perimeter - m.area

        grid = np.linspace(1e-6 * L, 0.5 * L * (1 - 1e-9), 64)
        vals = [psi1(g) for g in grid]
        for k in range(len(grid) - 1, 0, -1):
            if vals[k - 1] < 0 <= vals[k]:
                r1 = brentq(psi1, grid[k - 1], grid[k], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
                break
        else:
            raise ParameterError("no self-consistent opening radius")
        c1 = opened_square_minus_disks(L, centers, delta, r1)
    lams = {WHOLE: whole.ratio, OPENED_DOMAIN: c1.ratio}
    sets = {WHOLE: (part, whole, False), OPENED_DOMAIN: (part, c1, False)}

    def ring(r):
        k = lattice_closing(L, N, a, delta, r)
        o = _opened_square(L, r)
        return SetMeasure(o.area - k.filled.area, o.perimeter + k.filled.perimeter)

    def psi(r):
        m = ring(r)
        return r * m.perimeter - m.area

    lo = (0.5 * s - delta) * (1 + 1e-12)
    hi = min(a + delta, 0.5 * L) * (1 - 1e-9)
    if lo < hi and psi(lo) < 0 < psi(hi):
        r = brentq(psi, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        lam = 1.0 / r
        k = lattice_closing(L, N, a, delta, r)
        e1 = k.filled
        if k.pocket is not None and lam * k.pocket.area >= k.pocket.perimeter:
            # pockets cheaper to leave out of the enclosure
            e1 = SetMeasure(e1.area - k.pockets * k.pocket.area, e1.perimeter + k.pockets * k.pocket.perimeter)
        if e1.perimeter + lam * e1.area < part.perimeter + lam * part.area:
            m = ring(r)
            lams[OPENED_CLOSED] = m.ratio
            sets[OPENED_CLOSED] = (e1, m, True)
    return _assemble(case, lams, sets, part.area)


# --------------------------------------------------------------------------
# dispatch and sweeps
# --------------------------------------------------------------------------


def solve_example(case: ExampleCase) -> ExampleSolution:
    k = case.kind
    if k == "disk-in-disk":
        return _centered_in_disk(case, case["R"], 2 * SQRT_PI, 1.0)
    if k == "square-in-disk":
        return _centered_in_disk(case, case["R"], 4.0, 1.0)
    if k == "square-in-square":
        return _centered_in_square(case, case["L"], 4.0, 1.0)
    if k == "disk-in-square":
        return _centered_in_square(case, case["L"], 2 * SQRT_PI, 1.0)
    if k == "rectangle-in-square":
        return _rectangle(case)
    if k == "offset-square":
        return _offset_square(case)
    if k == "two-squares":
        return _two_squares(case)
    return _periodic(case)


@dataclass(frozen=True)
class SweepRow:
    param: float
    lambda_c: float
    y_c: float
    config: str


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    rows: tuple
    transitions: tuple  # parameter values where the configuration changes

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def sweep(
    template: ExampleCase,
    parameter: str,
    grid: Sequence[float],
    solver: Callable[[ExampleCase], object] | None = None,
    xtol: float = 1e-10,
) -> SweepResult:
    """Solve on each grid value and bisect every configuration change.

    ``solver`` maps a case to an object with ``y_c``, ``lambda_c`` and
    ``config``; the closed-form solver is the default.
    """
    solver = solver or solve_example
    grid = [float(g) for g in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError("sweep grid must be strictly increasing")
    sols = [solver(template.with_param(parameter, g)) for g in grid]
    rows = tuple(SweepRow(g, s.lambda_c, s.y_c, s.config) for g, s in zip(grid, sols))
    trans = []
    for (a, sa), (b, sb) in zip(zip(grid, sols), zip(grid[1:], sols[1:])):
        if sa.config == sb.config:
            continue
        lo, hi, cfg = a, b, sa.config
        while hi - lo > xtol * max(1.0, abs(hi)):
            mid = 0.5 * (lo + hi)
            if solver(template.with_param(parameter, mid)).config == cfg:
                lo = mid
            else:
                hi = mid
        trans.append(0.5 * (lo + hi))
    return SweepResult(parameter, rows, tuple(trans))
