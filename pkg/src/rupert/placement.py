"""Largest similar copy of one convex polygon inside another.

Every placement ``x -> rho R(alpha) x + (u, v)`` is a point ``(s, t, u, v)``
with ``s = rho cos(alpha)`` and ``t = rho sin(alpha)``.  Containment of each
vertex of ``p`` in each halfplane of ``q`` is a linear constraint on that
point, so the feasible placements form a convex 4-polytope.  Its vertices are
enumerated by polarity: the constraint rows are the vertices of the polar
polytope, whose facets (from a convex hull) are in turn the vertices of the
placement polytope.  The largest ``s^2 + t^2`` is attained at one of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegeneracyError, RupertError
from .geom3 import Polygon2

DEDUP_EPS = 1e-12
JOGGLE = 1e-12
RETRY_JOGGLES = (1e-10, 1e-8)
SNAP_TOL = 1e-10


@dataclass(frozen=True)
class HalfspaceSet4:
    """Rows ``beta`` of the constraints ``beta . (s, t, u, v) <= 1``."""

    rows: np.ndarray
    provenance: np.ndarray | None = None

    def __len__(self):
        return len(self.rows)

    def violation(self, point) -> float:
        """Largest amount by which ``point`` exceeds any constraint (<= 0 when feasible)."""
        return float(np.max(self.rows @ np.asarray(point, dtype=float)) - 1.0)


@dataclass(frozen=True)
class PlacementResult:
    rho: float
    alpha: float
    u: float
    v: float
    vertex: tuple

    @classmethod
    def from_vertex(cls, vertex) -> "PlacementResult":
        s, t, u, v = (float(c) for c in vertex)
        return cls(math.hypot(s, t), math.atan2(t, s), u, v, (s, t, u, v))


def build_constraints(p: Polygon2, q: Polygon2) -> HalfspaceSet4:
    """One row per (vertex of ``p``, halfplane of ``q``) pair, row-major in the vertex."""
    x = p.hull[:, 0][:, None]
    y = p.hull[:, 1][:, None]
    a = q.halfplanes[:, 0][None, :]
    b = q.halfplanes[:, 1][None, :]
    m, n = len(p.hull), len(q.halfplanes)
    rows = np.stack(
        (
            a * x + b * y,
            b * x - a * y,
            np.broadcast_to(a, (m, n)),
            np.broadcast_to(b, (m, n)),
        ),
        axis=-1,
    ).reshape(m * n, 4)
    ii, jj = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    prov = np.column_stack((ii.ravel(), jj.ravel()))
    return HalfspaceSet4(rows, prov)


def _first_unique(key: np.ndarray) -> np.ndarray:
    """Sorted indices of the first occurrence of each distinct row of ``key``."""
    order = np.lexsort(key.T[::-1])
    ranked = key[order]
    new = np.ones(len(key), dtype=bool)
    new[1:] = np.any(ranked[1:] != ranked[:-1], axis=1)
    # lexsort is stable, so each group starts at its smallest original index
    return np.sort(order[new])


def dedupe_rows(h: HalfspaceSet4, eps: float = DEDUP_EPS) -> HalfspaceSet4:
    """Drop rows equal to an earlier row within ``eps`` (relative to the largest entry)."""
    rows = h.rows
    scale = max(float(np.max(np.abs(rows))), 1.0)
    key = np.round(rows / (scale * eps)) if eps > 0 else rows
    first = _first_unique(key)
    prov = None if h.provenance is None else h.provenance[first]
    return HalfspaceSet4(rows[first], prov)


def dual_vertices(h: HalfspaceSet4) -> np.ndarray:
    # normalized halfspaces map to their coefficient vectors
    return np.array(h.rows, dtype=float, copy=True)


def _joggle(points: np.ndarray, magnitude: float) -> np.ndarray:
    # deterministic: a fixed irrational-phase pattern, independent of any RNG state
    k = np.arange(points.size, dtype=float).reshape(points.shape)
    pattern = np.sin(k * 12.9898 + 78.233) * 43758.5453
    pattern -= np.floor(pattern)
    scale = float(np.max(np.abs(points)))
    return points + magnitude * scale * (2.0 * pattern - 1.0)


def affine_rank(points, tol: float = 1e-10) -> int:
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def convex_hull_4d(points, joggle: float = 0.0) -> np.ndarray:
    """Facets ``gamma . x <= 1`` of the hull of 4-D points around the origin.

    Coplanar simplicial facets are merged, so each supporting hyperplane
    appears once.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 4:
        raise DegeneracyError("expected an (n, 4) array", rank=None)
    rank = affine_rank(pts)
    if len(pts) < 5 or rank < 4:
        raise DegeneracyError(f"points span an affine space of dimension {rank}", rank=rank)
    work = _joggle(pts, joggle) if joggle else pts
    try:
        hull = ConvexHull(work)
    except QhullError as exc:
        msg = str(exc).strip().splitlines()[0]
        raise DegeneracyError(f"hull computation failed: {msg}", rank=rank) from exc
    normals = hull.equations[:, :4]
    offsets = hull.equations[:, 4]
    if np.any(offsets >= 0.0):
        raise RupertError("origin is not strictly inside the hull")
    gammas = normals / (-offsets)[:, None]
    return _unique_rows(gammas)


def _unique_rows(rows: np.ndarray, rel: float = 1e-10) -> np.ndarray:
    scale = max(float(np.max(np.abs(rows))), 1e-300)
    return rows[_first_unique(np.round(rows / (scale * rel)))]


def primal_vertices(facets) -> np.ndarray:
    return np.array(facets, dtype=float, copy=True)


def max_rho(vertices) -> PlacementResult:
    verts = np.asarray(vertices, dtype=float)
    if verts.size == 0:
        raise RupertError("no placement vertices")
    rho2 = verts[:, 0] ** 2 + verts[:, 1] ** 2
    return PlacementResult.from_vertex(verts[int(np.argmax(rho2))])


def snap_vertex(rows: np.ndarray, vertex: np.ndarray, tol: float = SNAP_TOL) -> np.ndarray:
    """Move ``vertex`` onto the exact intersection of the constraints it nearly meets.

    The snapped point is kept only if it violates the constraints less than
    the input did.
    """
    resid = rows @ vertex - 1.0
    active = np.abs(resid) <= tol
    if np.count_nonzero(active) < 4:
        return vertex
    a = rows[active]
    sol, _, rank, _ = np.linalg.lstsq(a, np.ones(len(a)), rcond=None)
    if rank < 4 or np.max(rows @ sol) > max(np.max(resid) + 1.0, 1.0):
        return vertex
    return sol


def _pull_inside(rows: np.ndarray, vertex: np.ndarray) -> np.ndarray:
    # the origin is strictly feasible, so shrinking towards it restores feasibility
    worst = float(np.max(rows @ vertex))
    return vertex / worst if worst > 1.0 else vertex


def placement_vertices(h: HalfspaceSet4, joggle: float = JOGGLE) -> np.ndarray:
    """All vertices of the placement polytope, via the dual hull."""
    h = dedupe_rows(h)
    return primal_vertices(convex_hull_4d(dual_vertices(h), joggle=joggle))


def _hull_with_retries(points: np.ndarray, joggle: float):
    # qhull can hit topology errors on the highly degenerate dual point sets;
    # a coarser joggle always resolves them and snapping restores accuracy
    last = None
    for jog in (joggle, *(j for j in RETRY_JOGGLES if j > joggle)):
        try:
            return convex_hull_4d(points, joggle=jog), jog
        except DegeneracyError as exc:
            if exc.rank is not None and exc.rank < 4:
                raise
            last = exc
    raise last


def solve_placement(p: Polygon2, q: Polygon2, joggle: float = JOGGLE) -> PlacementResult:
    h = dedupe_rows(build_constraints(p, q))
    facets, used = _hull_with_retries(dual_vertices(h), joggle)
    return _best_feasible(h.rows, primal_vertices(facets), snap_tol=max(SNAP_TOL, 100 * used))


def _best_feasible(rows, verts, width: float = 1e-6, snap_tol: float = 1e-10) -> PlacementResult:
    rho2 = verts[:, 0] ** 2 + verts[:, 1] ** 2
    top = float(np.max(rho2))
    best = None
    for idx in np.flatnonzero(rho2 >= top - width * max(top, 1.0)):
        x = _pull_inside(rows, snap_vertex(rows, verts[idx], snap_tol))
        r2 = x[0] ** 2 + x[1] ** 2
        if best is None or r2 > best[0]:
            best = (r2, x)
    return PlacementResult.from_vertex(best[1])
