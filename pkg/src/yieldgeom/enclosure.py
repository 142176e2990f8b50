"""Minimal enclosures: minimise ``Per(E) + lam |E|`` over sets containing the particles.

Candidates are the particles themselves, their closing with radius
``1/lam`` (with holes filled wherever that is cheaper) and, for small
clusters, closings of particle pairs.  The closing
of a particle set splits into clusters; because the functional is additive
over disjoint pieces each cluster independently keeps either its closing or
its bare particles.  Equal values are resolved in favour of the smaller set,
which picks the minimal minimiser with respect to inclusion.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import morph
from .errors import GeometryError
from .geom import ArcRegion

T_RTOL = 1e-12
PAIR_LIMIT = 8


@dataclass(frozen=True)
class EnclosureResult:
    set: ArcRegion
    t_value: float
    lambda_used: float
    bridged: bool

    @property
    def area(self) -> float:
        return self.set.area

    @property
    def perimeter(self) -> float:
        return self.set.perimeter


def t_value(region: ArcRegion, lam: float) -> float:
    """``Per(E) + lam |E|``."""
    return region.perimeter + lam * region.area


@dataclass
class _Piece:
    loops: tuple
    per: float
    area: float
    members: frozenset
    bridged: bool

    def t(self, lam):
        return self.per + lam * self.area


def _cluster_members(comp: ArcRegion, ps: morph.ParticleSet) -> frozenset:
    probes = np.array([b.core.mean(axis=0) for b in ps.bodies])
    from ._arrangement import region_predicate

    inside = region_predicate(comp)(probes)
    return frozenset(int(i) for i in np.nonzero(inside)[0])


def _bare(ps: morph.ParticleSet, idx) -> _Piece:
    loops = tuple(ps.bodies[i].boundary() for i in sorted(idx))
    return _Piece(
        loops,
        math.fsum(ps.bodies[i].perimeter for i in idx),
        math.fsum(ps.bodies[i].area for i in idx),
        frozenset(idx),
        False,
    )


def _closed(region: ArcRegion, members) -> _Piece:
    return _Piece(region.loops, region.perimeter, region.area, frozenset(members), True)


def fill_cheap_holes(comp: ArcRegion, lam: float, ps: morph.ParticleSet) -> ArcRegion:
    """Fill the particle-free holes of ``comp`` whose removal lowers ``Per + lam |.|``.

    Filling a hole ``h`` changes the functional by ``lam |h| - Per(h)``
    independently of the other holes; ties keep the hole (smaller set).
    """
    holes = [lp for lp in comp.loops if lp.signed_area < 0]
    if not holes:
        return comp
    from ._arrangement import EdgeArrays

    centers = np.array([b.core.mean(axis=0) for b in ps.bodies])
    keep = []
    for h in holes:
        occupied = (EdgeArrays(loops=[h.reversed()]).winding(centers) > 0).any()
        if occupied or lam * -h.signed_area >= h.length:
            keep.append(h)
    if len(keep) == len(holes):
        return comp
    return ArcRegion(tuple(lp for lp in comp.loops if lp.signed_area > 0) + tuple(keep))


def _best_for_cluster(ps, members: frozenset, closing: _Piece, lam: float, r: float) -> list[_Piece]:
    """Cheapest cover of one cluster by bare particles and closings."""
    bare = _bare(ps, members)
    options = [[bare], [closing]]
    if 2 < len(members) <= PAIR_LIMIT:
        for i, j in itertools.combinations(sorted(members), 2):
            sub = morph.close_r([ps.bodies[i], ps.bodies[j]], r)
            if len(sub.components()) != 1:
                continue
            rest = members - {i, j}
            options.append([_closed(sub, (i, j)), _bare(ps, rest)])

    def key(opt):
        return (sum(p.t(lam) for p in opt), sum(p.area for p in opt))

    best = min(options, key=key)
    tb = key(best)[0]
    ties = [o for o in options if key(o)[0] <= tb * (1 + T_RTOL)]
    return min(ties, key=lambda o: key(o)[1])


def minimal_enclosure(particles: Sequence, lam: float) -> EnclosureResult:
    """Minimal minimiser of ``Per(E) + lam |E|`` over ``E`` containing every particle."""
    if not lam > 0:
        raise GeometryError(f"lambda must be positive, got {lam}")
    ps = particles if isinstance(particles, morph.ParticleSet) else morph.ParticleSet(particles)
    if not len(ps):
        raise GeometryError("no particles to enclose")
    r = 1.0 / lam
    bare_all = ps.region()
    if len(ps) == 1 or ps.min_gap() >= 2 * r:
        return EnclosureResult(bare_all, t_value(bare_all, lam), lam, False)
    closing = morph.close_r(ps, r)
    chosen: list[_Piece] = []
    covered: set = set()
    for comp in closing.components():
        members = _cluster_members(comp, ps)
        covered |= members
        if len(members) <= 1:
            chosen.append(_bare(ps, members))
            continue
        comp = fill_cheap_holes(comp, lam, ps)
        chosen.extend(_best_for_cluster(ps, members, _closed(comp, members), lam, r))
    missing = set(range(len(ps))) - covered
    if missing:
        raise GeometryError(f"closing lost particles {sorted(missing)}")
    loops = tuple(lp for p in chosen for lp in p.loops)
    region = ArcRegion(loops)
    bridged = any(p.bridged for p in chosen)
    return EnclosureResult(region, t_value(region, lam), lam, bridged)
