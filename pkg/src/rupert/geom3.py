"""Projection directions, 3-D to 2-D projection and planar convex hulls."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateProjectionError, FlatSolidError, InvalidArgumentError, NormalizationError

ORIENT_EPS = 1e-12
HALFPLANE_EPS = 1e-9


@dataclass(frozen=True)
class Polyhedron3:
    """A convex solid given by its vertex cloud."""

    name: str
    vertices: np.ndarray = field(repr=False)

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise InvalidArgumentError(f"{self.name}: vertices must be an (n, 3) array")
        if len(verts) < 4:
            raise InvalidArgumentError(f"{self.name}: need at least 4 vertices, got {len(verts)}")
        if not np.all(np.isfinite(verts)):
            raise InvalidArgumentError(f"{self.name}: non-finite vertex coordinates")
        sv = np.linalg.svd(verts - verts.mean(axis=0), compute_uv=False)
        if sv[2] <= 1e-10 * sv[0]:
            raise FlatSolidError(f"{self.name}: vertices are coplanar (rank < 3)")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def scaled(self, factor: float) -> "Polyhedron3":
        return Polyhedron3(self.name, self.vertices * factor)

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class ProjectionAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise InvalidArgumentError(f"non-finite angles ({self.theta}, {self.phi})")


@dataclass(frozen=True)
class PlanarTransform:
    """Rotation by ``alpha``, scaling by ``rho`` and translation by ``(u, v)``."""

    alpha: float
    rho: float
    u: float
    v: float

    def __post_init__(self):
        if not self.rho >= 0:
            raise InvalidArgumentError("scale must be nonnegative")

    @classmethod
    def from_st(cls, s: float, t: float, u: float, v: float) -> "PlanarTransform":
        return cls(math.atan2(t, s), math.hypot(s, t), u, v)

    @property
    def s(self) -> float:
        return self.rho * math.cos(self.alpha)

    @property
    def t(self) -> float:
        return self.rho * math.sin(self.alpha)

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        s, t = self.s, self.t
        x, y = pts[:, 0], pts[:, 1]
        return np.column_stack((s * x - t * y + self.u, t * x + s * y + self.v))


@dataclass(frozen=True)
class Polygon2:
    """Convex polygon as CCW hull vertices plus halfplanes ``a x + b y <= 1``."""

    hull: np.ndarray
    halfplanes: np.ndarray

    def __len__(self):
        return len(self.hull)

    def slacks(self, points) -> np.ndarray:
        """Slack ``1 - (a x + b y)`` of every point against every halfplane, shape (k, n)."""
        pts = np.asarray(points, dtype=float)
        return 1.0 - pts @ self.halfplanes.T


def _as_angles(angles) -> ProjectionAngles:
    if isinstance(angles, ProjectionAngles):
        return angles
    theta, phi = angles
    return ProjectionAngles(float(theta), float(phi))


def sphere_point(angles) -> np.ndarray:
    a = _as_angles(angles)
    st, ct = math.sin(a.theta), math.cos(a.theta)
    sp, cp = math.sin(a.phi), math.cos(a.phi)
    return np.array([ct * sp, st * sp, cp])


def projection_matrix(angles) -> np.ndarray:
    """The 2x3 matrix projecting onto the plane orthogonal to ``sphere_point(angles)``."""
    a = _as_angles(angles)
    st, ct = math.sin(a.theta), math.cos(a.theta)
    sp, cp = math.sin(a.phi), math.cos(a.phi)
    return np.array([[-st, ct, 0.0], [-ct * cp, -st * cp, sp]])


def project(poly: Polyhedron3, angles) -> np.ndarray:
    return poly.vertices @ projection_matrix(angles).T


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points) -> np.ndarray:
    """Strictly convex CCW hull by Andrew's monotone chain.

    Collinear points on hull edges are dropped.  The orientation test is
    thresholded at ``ORIENT_EPS`` times the squared coordinate scale, so
    nearly coincident silhouette vertices collapse to one.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise DegenerateProjectionError("need at least 3 planar points")
    scale = float(np.max(np.abs(pts - pts.mean(axis=0))))
    if scale == 0.0:
        raise DegenerateProjectionError("all points coincide")
    eps = ORIENT_EPS * scale * scale

    order = np.lexsort((pts[:, 1], pts[:, 0]))
    srt = [tuple(p) for p in pts[order].tolist()]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= eps:
                out.pop()
            out.append(p)
        return out

    lower = chain(srt)
    upper = chain(reversed(srt))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateProjectionError("points are collinear")
    return np.array(hull)


def halfplanes_of(hull) -> Polygon2:
    """Normalized edge halfplanes of a CCW hull containing the origin."""
    h = np.asarray(hull, dtype=float)
    nxt = np.roll(h, -1, axis=0)
    # outward normal of a CCW edge (p -> q) is (dy, -dx)
    normals = np.column_stack((nxt[:, 1] - h[:, 1], h[:, 0] - nxt[:, 0]))
    offsets = np.einsum("ij,ij->i", normals, h)
    lengths = np.hypot(normals[:, 0], normals[:, 1])
    if np.any(lengths == 0.0) or np.min(offsets / lengths) <= HALFPLANE_EPS:
        raise NormalizationError(
            "origin is not strictly inside the polygon; was the solid centered?"
        )
    return Polygon2(h, normals / offsets[:, None])


def silhouette(poly: Polyhedron3, angles) -> Polygon2:
    """Convex outline of the solid seen along ``sphere_point(angles)``."""
    return halfplanes_of(convex_hull_2d(project(poly, angles)))
