"""Critical yield number from the two consecutive shape problems.

Step one finds the maximal Cheeger set ``Omega_c`` of the fluid region and its
constant ``lam_c``; step two finds the minimal set ``Omega_1c`` containing the
particles that minimises ``Per(E) + lam_c |E|``.  Then

    Y_c = |Omega_s| / S(Omega_1c, Omega_c),
    S(E1, E-) = Per(E1) + |E1| / |E-| * Per(E-),

and ``u_c = 1 on Omega_1c, -|Omega_1c|/|Omega_c| on Omega_c, 0 elsewhere`` is
a three-valued minimiser of the total variation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import morph
from ._arrangement import boolean, region_predicate
from .cheeger import CheegerResult, cheeger_annular
from .enclosure import EnclosureResult, minimal_enclosure
from .errors import ConsistencyError, GeometryError
from .geom import ArcRegion, as_body, check_particles, envelope_body


@dataclass(frozen=True)
class ThreeLevelFunction:
    """``1`` on ``positive_set``, ``negative_value`` on ``negative_set``, ``0`` elsewhere."""

    positive_set: ArcRegion
    negative_set: ArcRegion
    negative_value: float

    @classmethod
    def balanced(cls, positive: ArcRegion, negative: ArcRegion) -> "ThreeLevelFunction":
        """Negative level chosen so that the integral vanishes."""
        return cls(positive, negative, -positive.area / negative.area)

    def integral(self) -> float:
        return self.positive_set.area + self.negative_value * self.negative_set.area

    def integral_layercake(self) -> float:
        """Integral from the measures of the super- and sub-level sets."""
        # |{u > t}| = |positive| on (0, 1); |{u < t}| = |negative| on (negative_value, 0)
        return 1.0 * self.positive_set.area - (0.0 - self.negative_value) * self.negative_set.area

    def total_variation(self) -> float:
        """Jump lengths weighted by jump heights (sets are disjoint)."""
        return self.positive_set.perimeter + abs(self.negative_value) * self.negative_set.perimeter

    def total_variation_coarea(self, levels: int = 0) -> float:
        """Integral over ``t`` of the perimeter of ``{u > t}``.

        The level sets are piecewise constant in ``t``; each interval
        contributes its length times the perimeter of the corresponding set.
        """
        v = self.negative_value
        # t in (v, 0): {u > t} is the plane minus the negative set
        # t in (0, 1): {u > t} is the positive set
        pieces = [(v, 0.0, self.negative_set.perimeter), (0.0, 1.0, self.positive_set.perimeter)]
        return math.fsum((b - a) * p for a, b, p in pieces)

    def __call__(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros(len(pts))
        out[region_predicate(self.negative_set)(pts)] = self.negative_value
        out[region_predicate(self.positive_set)(pts)] = 1.0
        return out


@dataclass(frozen=True)
class YieldSolution:
    omega_c: CheegerResult
    omega_1c: EnclosureResult
    y_c: float
    s_value: float
    u_c: ThreeLevelFunction
    particle_area: float
    particles: tuple = ()

    @property
    def lambda_c(self) -> float:
        return self.omega_c.lam

    @property
    def config(self) -> str:
        """Short tag of the optimal configuration."""
        tag = "bridged" if self.omega_1c.bridged else "particles"
        return f"{self.omega_c.family}/{tag}"


def s_functional(e1: ArcRegion, e_minus: ArcRegion) -> float:
    """``Per(E1) + |E1| / |E-| * Per(E-)``."""
    return e1.perimeter + e1.area / e_minus.area * e_minus.perimeter


def _scene_parts(scene):
    dom = getattr(scene, "domain", None)
    parts = getattr(scene, "particles", None)
    if dom is None or parts is None:
        raise GeometryError("scene needs a domain and particles")
    return dom, list(parts)


def solve_two_step(scene, grid: int = 24) -> YieldSolution:
    """Solve both shape problems for ``scene`` and assemble ``Y_c``."""
    dom, parts = _scene_parts(scene)
    if not parts:
        raise GeometryError("scene has no particles")
    check_particles(dom, parts)
    ps = morph.ParticleSet(parts)
    step1 = cheeger_annular(dom, ps, grid=grid)
    step2 = minimal_enclosure(ps, step1.lam)
    if step2.bridged:
        inter = boolean(step2.set, step1.set, "intersection")
        if inter is not None and inter.area > 1e-9 * step1.set.area:
            raise ConsistencyError(
                f"enclosure and Cheeger set overlap (area {inter.area:.3e}); "
                "the candidate families miss the optimal configuration"
            )
    s = s_functional(step2.set, step1.set)
    u = ThreeLevelFunction.balanced(step2.set, step1.set)
    return YieldSolution(step1, step2, ps.area / s, s, u, ps.area, tuple(ps.bodies))


def verify_feasible_ratio(solution: YieldSolution, trial: ThreeLevelFunction, tol: float = 1e-10) -> float:
    """``int_{Omega_s} v / TV(v)`` for an admissible three-level trial function.

    Raises ``ValueError`` when the trial violates the zero-mean constraint or
    is not equal to one on the particles.
    """
    scale = max(trial.positive_set.area, trial.negative_set.area)
    if abs(trial.integral()) > tol * max(1.0, scale):
        raise ValueError(f"trial function has nonzero mean {trial.integral():.3e}")
    if trial.negative_value >= 0:
        raise ValueError("negative level must be negative")
    probes = []
    for b in solution.particles:
        c = b.core.mean(axis=0)
        for e in b.boundary().edges:
            for t in (0.0, 0.5):
                p = np.asarray(e.point(t))
                probes.append(p + 1e-7 * (c - p))
    if not region_predicate(trial.positive_set)(np.array(probes)).all():
        raise ValueError("trial function is not one on every particle")
    return solution.particle_area / trial.total_variation()


# --------------------------------------------------------------------------
# large-domain limit
# --------------------------------------------------------------------------


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]
        yield [[first]] + part


def asymptotic_yield(particles: Sequence, max_exact: int = 7) -> float:
    """Limit of ``Y_c`` when the domain is blown up around the particles.

    Equals ``|Omega_s| / min Per(E)`` over sets containing the particles; the
    minimum is taken over groupings of the particles into convex envelopes
    (all groupings for up to ``max_exact`` particles, otherwise the joint
    envelope and the separate particles).
    """
    bodies = [as_body(p) for p in particles]
    if not bodies:
        raise GeometryError("no particles")
    total = math.fsum(b.area for b in bodies)
    n = len(bodies)
    cache = {}

    def per(group):
        key = tuple(sorted(group))
        if key not in cache:
            cache[key] = envelope_body([bodies[i] for i in key]).perimeter
        return cache[key]

    if n <= max_exact:
        groupings = _set_partitions(list(range(n)))
    else:
        groupings = [[list(range(n))], [[i] for i in range(n)]]
    best = min(math.fsum(per(g) for g in part) for part in groupings)
    return total / best
