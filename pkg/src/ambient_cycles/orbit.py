"""Orbit-distance minimisation: base distances and candidate enumeration.

The distance between two base points of a surface is the minimum of the
cover distance d(p, g.q) over the deck group; the elements attaining it
also carry the topological data (they are the transition-map values on
edges).  This module provides:

* `enumerate_candidates`: every deck element with d(p, g.q) <= bound,
  computed from a certified search region (integer windows for the flat
  lattices, the whole group for the projective plane, pruned word-ball
  deepening for genus two).
* `base_distance`: the minimum with the full tie set (tolerance 1e-9,
  configurable), ties sorted canonically.  Multiple minimisers flag a
  non-generic configuration and must be surfaced, never hidden.
* `base_distance_block`: vectorised distances + abelianized minimisers
  over many point pairs at once, the kernel under the Monte Carlo
  pipeline.  Tie-flagged pairs are reported so callers can exclude them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import genus2
from .errors import InputError
from .kinds import CLASS_SHAPE, SurfaceKind
from .surfaces import CoverPoint, GroupElement, act, cover_distance

DEFAULT_TIE_TOL = 1e-9
_EDGE_SLACK = 1e-12   # inclusive boundary slack for "<= bound" filters


# -- candidate enumeration ----------------------------------------------------

def enumerate_candidates(
    kind: SurfaceKind,
    p: CoverPoint,
    q: CoverPoint,
    bound: float,
    config: genus2.GenusTwoConfig = genus2.DEFAULT_CONFIG,
) -> list[GroupElement]:
    """All deck elements g with cover_distance(p, g.q) <= bound.

    The search region is certified to contain every such g; the returned
    list is filtered back to the bound (with 1e-12 boundary slack) and
    sorted canonically.
    """
    if bound < 0:
        raise InputError("bound must be non-negative")
    if p.kind is not kind or q.kind is not kind:
        raise InputError("point kind mismatch")

    if kind is SurfaceKind.TORUS:
        out = []
        w = math.ceil(bound) + 1
        cx = int(round(p.coords[0] - q.coords[0]))
        cy = int(round(p.coords[1] - q.coords[1]))
        for n in range(cx - w, cx + w + 1):
            for m in range(cy - w, cy + w + 1):
                d = math.hypot(
                    p.coords[0] - q.coords[0] - n, p.coords[1] - q.coords[1] - m
                )
                if d <= bound + _EDGE_SLACK:
                    out.append(GroupElement.torus(n, m))
        return sorted(out, key=GroupElement.sort_key)

    if kind is SurfaceKind.KLEIN_BOTTLE:
        out = []
        w = math.ceil(bound) + 1
        cm = int(round(p.coords[1] - q.coords[1]))
        for m in range(cm - w, cm + w + 1):
            qx = (-1) ** (m % 2) * q.coords[0]
            cn = int(round(p.coords[0] - qx))
            for n in range(cn - w, cn + w + 1):
                d = math.hypot(p.coords[0] - qx - n, p.coords[1] - q.coords[1] - m)
                if d <= bound + _EDGE_SLACK:
                    out.append(GroupElement.klein(n, m))
        return sorted(out, key=GroupElement.sort_key)

    if kind is SurfaceKind.PROJECTIVE_PLANE:
        out = []
        for a in (0, 1):
            g = GroupElement.projective(a)
            if cover_distance(kind, p, _act_rp2(g, q)) <= bound + _EDGE_SLACK:
                out.append(g)
        return out

    pairs = genus2.candidates_within(p.z, q.z, bound, config)
    return [GroupElement.genus_two(word, pair) for word, pair in pairs]


def _act_rp2(g: GroupElement, q: CoverPoint) -> CoverPoint:
    if g.data[0] == 0:
        return q
    return CoverPoint(q.kind, tuple(-c for c in q.coords))


# -- base distance ------------------------------------------------------------

def base_distance(
    kind: SurfaceKind,
    p: CoverPoint,
    q: CoverPoint,
    tie_tol: float = DEFAULT_TIE_TOL,
    config: genus2.GenusTwoConfig = genus2.DEFAULT_CONFIG,
) -> tuple[float, list[GroupElement]]:
    """Distance between the base points under p and q, with minimisers.

    Returns (length, [g, ...]): the infimum of d(p, g.q) over the deck
    group and every element within tie_tol of it, sorted canonically.
    More than one minimiser means the configuration is non-generic
    (a cut-locus tie); callers must surface the flag downstream.
    """
    if p.kind is not kind or q.kind is not kind:
        raise InputError("point kind mismatch")

    if kind is SurfaceKind.GENUS_TWO:
        dist, pairs = genus2.nearest_orbit_elements(p.z, q.z, tie_tol, config)
        return dist, [GroupElement.genus_two(w, m) for w, m in pairs]

    candidates = enumerate_candidates(kind, p, q, cover_distance(kind, p, q), config)
    best = math.inf
    dists = []
    for g in candidates:
        d = cover_distance(kind, p, act(g, q))
        dists.append(d)
        best = min(best, d)
    mins = [g for g, d in zip(candidates, dists) if d <= best + tie_tol]
    return best, sorted(mins, key=GroupElement.sort_key)


# -- vectorised kernels -------------------------------------------------------

@dataclass
class BlockResult:
    """Batched base distances with abelianized minimisers.

    dist: (n,) float; tied: (n,) bool, a second element within tie_tol;
    ab_free / ab_tors: (n, rank) integer abelianization of the minimiser
    t(p_i -> q_i) (the canonical one among exact ties).
    """

    dist: np.ndarray
    ab_free: np.ndarray
    ab_tors: np.ndarray
    tied: np.ndarray


def base_distance_block(
    kind: SurfaceKind,
    P: np.ndarray,
    Q: np.ndarray,
    tie_tol: float = DEFAULT_TIE_TOL,
    config: genus2.GenusTwoConfig = genus2.DEFAULT_CONFIG,
) -> BlockResult:
    """Vectorised `base_distance` over paired point arrays.

    Point layout per kind: (n,2) floats for the flat surfaces, (n,3) unit
    rows for the projective plane, (n,) complex inside the Dirichlet
    domain for genus two.
    """
    nf, nt = CLASS_SHAPE[kind]
    n = len(P)

    if kind is SurfaceKind.TORUS:
        delta = P - Q                                   # minimise |delta - (n,m)|
        base = np.floor(delta + 0.5)
        cand = base[:, :, None] + np.array([-1.0, 0.0, 1.0])
        r = np.abs(delta[:, :, None] - cand)            # (n, 2, 3)
        j = np.argmin(r, axis=2)
        rows = np.arange(n)
        best = np.stack([r[rows, 0, j[:, 0]], r[rows, 1, j[:, 1]]], axis=1)
        shift = np.stack([cand[rows, 0, j[:, 0]], cand[rows, 1, j[:, 1]]], axis=1)
        rs = np.sort(r, axis=2)
        tied = ((rs[:, 0, 1] - rs[:, 0, 0]) <= tie_tol) | (
            (rs[:, 1, 1] - rs[:, 1, 0]) <= tie_tol
        )
        dist = np.hypot(best[:, 0], best[:, 1])
        return BlockResult(dist, shift.astype(np.int64), np.empty((n, 0), np.int64), tied)

    if kind is SurfaceKind.KLEIN_BOTTLE:
        dy = P[:, 1] - Q[:, 1]
        m_cand = np.floor(dy + 0.5)[:, None] + np.array([-1.0, 0.0, 1.0])  # (n,3)
        sign = 1.0 - 2.0 * (np.mod(m_cand, 2.0))                            # (-1)^m
        dx_target = P[:, 0, None] - sign * Q[:, 0, None]                    # (n,3)
        n_cand = np.floor(dx_target + 0.5)[:, :, None] + np.array([-1.0, 0.0, 1.0])
        rx = np.abs(dx_target[:, :, None] - n_cand)                         # (n,3,3)
        ry = np.abs(dy[:, None] - m_cand)                                   # (n,3)
        d = np.sqrt(rx**2 + ry[:, :, None] ** 2).reshape(n, 9)
        flat_n = n_cand.reshape(n, 9)
        flat_m = np.repeat(m_cand, 3, axis=1)
        j = np.argmin(d, axis=1)
        rows = np.arange(n)
        dist = d[rows, j]
        ds = np.sort(d, axis=1)
        tied = (ds[:, 1] - ds[:, 0]) <= tie_tol
        n_min = flat_n[rows, j].astype(np.int64)
        m_min = flat_m[rows, j].astype(np.int64)
        ab_free = m_min[:, None]
        ab_tors = np.mod(n_min, 2)[:, None]
        return BlockResult(dist, ab_free, ab_tors, tied)

    if kind is SurfaceKind.PROJECTIVE_PLANE:
        diff = np.linalg.norm(P - Q, axis=1)
        summ = np.linalg.norm(P + Q, axis=1)
        d0 = 2.0 * np.arctan2(diff, summ)   # angle to q
        d1 = 2.0 * np.arctan2(summ, diff)   # angle to the antipode of q
        dist = np.minimum(d0, d1)
        tied = np.abs(d0 - d1) <= tie_tol
        bit = (d1 < d0).astype(np.int64)
        return BlockResult(dist, np.empty((n, 0), np.int64), bit[:, None], tied)

    dist, gidx, tied = genus2.base_distance_block(P, Q, tie_tol, config)
    ab = genus2.inventory_abelianized(gidx)
    return BlockResult(dist, ab, np.empty((n, 0), np.int64), tied)


def pairwise_base_distances(
    kind: SurfaceKind,
    points: list[CoverPoint],
    tie_tol: float = DEFAULT_TIE_TOL,
    config: genus2.GenusTwoConfig = genus2.DEFAULT_CONFIG,
) -> tuple[np.ndarray, np.ndarray]:
    """All-pairs base distances for a lifted cloud.

    Returns (dist, tied) as (n, n) symmetric arrays (zero diagonal).
    Genus-2 points are reduced to the fundamental domain first, which
    leaves orbit distances unchanged.
    """
    npts = len(points)
    iu, ju = np.triu_indices(npts, k=1)
    if npts < 2:
        return np.zeros((npts, npts)), np.zeros((npts, npts), dtype=bool)

    if kind is SurfaceKind.GENUS_TWO:
        reduced = np.array([genus2.reduce_to_domain(p.z)[0] for p in points])
        res = base_distance_block(kind, reduced[iu], reduced[ju], tie_tol, config)
    else:
        arr = np.array([p.coords for p in points])
        res = base_distance_block(kind, arr[iu], arr[ju], tie_tol, config)

    dist = np.zeros((npts, npts))
    tied = np.zeros((npts, npts), dtype=bool)
    dist[iu, ju] = res.dist
    dist[ju, iu] = res.dist
    tied[iu, ju] = res.tied
    tied[ju, iu] = res.tied
    return dist, tied
