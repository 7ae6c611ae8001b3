"""Search over projection angles for a Rupert passage, and certificate checks.

The objective is the largest scale ``rho`` at which the silhouette along
direction ``(theta_p, phi_p)`` fits inside the silhouette along
``(theta_q, phi_q)``.  A value above 1 means an unscaled copy passes through
a tunnel cut along the second direction.
"""

from __future__ import annotations

import concurrent.futures as cf
import itertools
import logging
import math
from dataclasses import dataclass, field, fields, replace

import numpy as np
from scipy.spatial import ConvexHull

from .errors import (
    DegeneracyError,
    DegenerateProjectionError,
    InvalidArgumentError,
    NormalizationError,
    ObjectiveError,
    ParseError,
)
from .geom3 import Polyhedron3, project, projection_matrix, silhouette
from .placement import PlacementResult, solve_placement

log = logging.getLogger(__name__)

RUPERT_EPS = 1e-7
# certificates rounded to 7 decimals may claim a scale that overshoots by that much
CLAIM_TOL = 1e-6
NUMERIC_ZERO = 1e-12


@dataclass(frozen=True)
class AngleQuad:
    theta_p: float
    phi_p: float
    theta_q: float
    phi_q: float

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise InvalidArgumentError(f"{f.name} is not finite")

    @classmethod
    def of(cls, values) -> "AngleQuad":
        if isinstance(values, AngleQuad):
            return values
        vals = [float(v) for v in values]
        if len(vals) != 4:
            raise InvalidArgumentError("expected four angles")
        return cls(*vals)

    @property
    def p(self):
        return (self.theta_p, self.phi_p)

    @property
    def q(self):
        return (self.theta_q, self.phi_q)

    def as_array(self) -> np.ndarray:
        return np.array([self.theta_p, self.phi_p, self.theta_q, self.phi_q])


@dataclass(frozen=True)
class SearchConfig:
    k: int = 5
    max_evals: int = 2000
    f_tol: float = 1e-10
    x_tol: float = 1e-9
    target: float = math.inf
    workers: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgumentError("k must be at least 1")
        if self.max_evals < 1 or self.f_tol <= 0 or self.x_tol <= 0:
            raise InvalidArgumentError("budget and tolerances must be positive")
        if self.workers < 1:
            raise InvalidArgumentError("workers must be at least 1")


# ---------------------------------------------------------------- objective


def evaluate_placement(poly: Polyhedron3, angles) -> PlacementResult:
    """Best placement of the p-silhouette inside the q-silhouette."""
    q = AngleQuad.of(angles)
    return solve_placement(silhouette(poly, q.p), silhouette(poly, q.q))


def evaluate_f(poly: Polyhedron3, angles) -> float:
    """Largest scale ``rho``; 0 when a silhouette degenerates."""
    try:
        return evaluate_placement(poly, angles).rho
    except (DegenerateProjectionError, NormalizationError, DegeneracyError) as exc:
        log.warning("objective set to 0 at %s: %s", tuple(AngleQuad.of(angles).as_array()), exc)
        return 0.0


# ---------------------------------------------------------------- Nelder-Mead


def nelder_mead(objective, x0, cfg: SearchConfig = SearchConfig()):
    """Maximize ``objective`` from ``x0``; returns ``(best AngleQuad, best value)``.

    Stops when the spread of simplex values drops below ``cfg.f_tol``, the
    simplex diameter below ``cfg.x_tol``, or after ``cfg.max_evals``
    evaluations.  The initial simplex steps 0.1 rad along each coordinate.
    """
    x0 = AngleQuad.of(x0).as_array()
    n = len(x0)
    evals = 0

    def g(x):
        nonlocal evals
        evals += 1
        val = float(objective(x))
        if not math.isfinite(val):
            raise ObjectiveError(f"objective returned {val} at {x.tolist()}")
        return -val

    pts = [x0] + [x0 + 0.1 * np.eye(n)[i] for i in range(n)]
    vals = [g(p) for p in pts]
    reason = "max_evals"
    while True:
        order = np.argsort(vals, kind="stable")
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        if vals[-1] - vals[0] < cfg.f_tol:
            reason = "f_tol"
            break
        if max(np.linalg.norm(p - pts[0]) for p in pts[1:]) < cfg.x_tol:
            reason = "x_tol"
            break
        if evals >= cfg.max_evals:
            break

        c = np.mean(pts[:-1], axis=0)
        xr = c + (c - pts[-1])
        fr = g(xr)
        if fr < vals[0]:
            xe = c + 2.0 * (c - pts[-1])
            fe = g(xe)
            pts[-1], vals[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
        else:
            if fr < vals[-1]:
                xc = c + 0.5 * (xr - c)
                fc = g(xc)
                accept = fc <= fr
            else:
                xc = c + 0.5 * (pts[-1] - c)
                fc = g(xc)
                accept = fc < vals[-1]
            if accept:
                pts[-1], vals[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
                    vals[i] = g(pts[i])
    best = int(np.argmin(vals))
    log.debug("nelder-mead stopped (%s) after %d evaluations", reason, evals)
    return AngleQuad.of(pts[best]), -vals[best]


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class RupertCertificate:
    """Angles plus the placement ``(alpha, u, v)`` and its scale ``rho``.

    ``frame`` is ``"centroid"`` for coordinates centered at the vertex
    centroid (what the search produces) or ``"source"`` for the coordinate
    frame of the solid's data file.
    """

    solid: str
    angles: AngleQuad
    alpha: float
    u: float
    v: float
    rho: float
    frame: str = "centroid"

    KEYS = ("solid", "theta_p", "phi_p", "theta_q", "phi_q", "alpha", "u", "v", "rho")

    def __post_init__(self):
        if not self.rho > 0:
            raise InvalidArgumentError("rho must be positive")
        if self.frame not in ("centroid", "source"):
            raise InvalidArgumentError(f"unknown frame {self.frame!r}")

    def to_text(self) -> str:
        a = self.angles
        vals = [a.theta_p, a.phi_p, a.theta_q, a.phi_q, self.alpha, self.u, self.v, self.rho]
        lines = [f"solid = {self.solid}"]
        lines += [f"{k} = {x!r}" for k, x in zip(self.KEYS[1:], map(float, vals))]
        if self.frame != "centroid":
            lines.append(f"frame = {self.frame}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RupertCertificate":
        found = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in cls.KEYS and key != "frame":
                raise ParseError(f"unknown key {key!r}", lineno)
            if key in found:
                raise ParseError(f"duplicate key {key!r}", lineno)
            found[key] = (val, lineno)
        missing = [k for k in cls.KEYS if k not in found]
        if missing:
            raise ParseError(f"missing keys: {', '.join(missing)}")
        nums = {}
        for key in cls.KEYS[1:]:
            val, lineno = found[key]
            try:
                nums[key] = float(val)
            except ValueError:
                raise ParseError(f"{key}: not a number: {val!r}", lineno) from None
            if not math.isfinite(nums[key]):
                raise ParseError(f"{key}: not finite", lineno)
        frame = found.get("frame", ("centroid", 0))[0]
        try:
            return cls(
                found["solid"][0],
                AngleQuad(nums["theta_p"], nums["phi_p"], nums["theta_q"], nums["phi_q"]),
                nums["alpha"],
                nums["u"],
                nums["v"],
                nums["rho"],
                frame,
            )
        except InvalidArgumentError as exc:
            raise ParseError(str(exc)) from None

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "RupertCertificate":
        with open(path) as fh:
            return cls.from_text(fh.read())


def certificate_from(poly: Polyhedron3, angles, placement: PlacementResult) -> RupertCertificate:
    return RupertCertificate(
        poly.name, AngleQuad.of(angles), placement.alpha, placement.u, placement.v, placement.rho
    )


def rebase_certificate(cert: RupertCertificate, shift) -> RupertCertificate:
    """Re-express a source-frame certificate for the centroid-centered solid.

    ``shift`` is the source-frame centroid that canonicalization subtracted.
    The translation is exact at the claimed scale ``cert.rho``.
    """
    if cert.frame == "centroid":
        return cert
    c = np.asarray(shift, dtype=float)
    a = cert.angles
    rot = np.array([[math.cos(cert.alpha), -math.sin(cert.alpha)],
                    [math.sin(cert.alpha), math.cos(cert.alpha)]])  # fmt: skip
    # inner points move by M_p c (then scaled), outer by M_q c
    w = (np.array([cert.u, cert.v]) + cert.rho * rot @ (projection_matrix(a.p) @ c)
         - projection_matrix(a.q) @ c)  # fmt: skip
    return replace(cert, u=float(w[0]), v=float(w[1]), frame="centroid")


@dataclass
class VerificationReport:
    passed: bool
    min_slack: float
    binding: tuple
    claimed_slack: float
    claimed_binding: tuple
    margin: float
    diameter: float
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def _outer_edges(points: np.ndarray):
    hull = ConvexHull(points)
    return hull.equations[:, :2], hull.equations[:, 2]


def _slacks(inner, normals, offsets):
    # distance of each inner point to each outer edge line, positive inside
    return -(inner @ normals.T + offsets[None, :])


def _frame_vertices(poly, cert: RupertCertificate) -> np.ndarray:
    if hasattr(poly, "lookup"):
        rec = poly.lookup(cert.solid)
        verts = rec.polyhedron.vertices
        return verts + rec.origin_shift if cert.frame == "source" else verts
    if cert.frame != "centroid":
        raise InvalidArgumentError("source-frame certificate needs the solid's origin shift")
    return poly.vertices


def placed_points(poly, cert: RupertCertificate, scale: float = 1.0):
    """Projected vertices ``(inner, outer)`` with the placement applied to ``inner``.

    The default scale 1 places an identical copy.
    """
    verts = _frame_vertices(poly, cert)
    a = cert.angles
    c, s = math.cos(cert.alpha), math.sin(cert.alpha)
    rot = np.array([[c, -s], [s, c]])
    inner = verts @ projection_matrix(a.p).T
    outer = verts @ projection_matrix(a.q).T
    return scale * inner @ rot.T + np.array([cert.u, cert.v]), outer


def verify_certificate(poly, cert: RupertCertificate, margin: float = 0.0) -> VerificationReport:
    """Check that the placed silhouette lies strictly inside the other one.

    The placement is applied at unit scale (an identical copy must pass), and
    every projected vertex must clear every outer edge by more than
    ``margin`` (a length).  Separately the claimed ``rho`` is checked: at
    that scale no vertex may cross the outer boundary by more than
    ``CLAIM_TOL`` times the outer diameter.

    ``poly`` may be a catalogue, in which case the solid is looked up by the
    certificate's name, and source-frame certificates are checked against
    the solid's coordinates as read.
    """
    if margin < 0:
        raise InvalidArgumentError("margin must be nonnegative")
    inner, outer = placed_points(poly, cert, cert.rho)
    unit_inner, _ = placed_points(poly, cert)
    normals, offsets = _outer_edges(outer)
    diameter = float(np.max(np.linalg.norm(outer[:, None, :] - outer[None, :, :], axis=-1)))

    unit = _slacks(unit_inner, normals, offsets)
    i, j = np.unravel_index(int(np.argmin(unit)), unit.shape)
    min_slack = float(unit[i, j])

    claimed = _slacks(inner, normals, offsets)
    ci, cj = np.unravel_index(int(np.argmin(claimed)), claimed.shape)
    claimed_slack = float(claimed[ci, cj])

    notes = []
    ok_unit = min_slack > margin + NUMERIC_ZERO * diameter
    if not ok_unit:
        notes.append("placed copy is not strictly inside" + (" the margin" if margin else ""))
    ok_claim = claimed_slack >= -CLAIM_TOL * diameter
    if not ok_claim:
        notes.append(f"claimed scale rho={cert.rho!r} does not fit")
    return VerificationReport(
        ok_unit and ok_claim,
        min_slack,
        (int(i), int(j)),
        claimed_slack,
        (int(ci), int(cj)),
        margin,
        diameter,
        notes,
    )


def outer_diameter(poly: Polyhedron3, angles) -> float:
    outer = project(poly, AngleQuad.of(angles).q)
    return float(np.max(np.linalg.norm(outer[:, None, :] - outer[None, :, :], axis=-1)))


def is_rupert(poly: Polyhedron3, cert: RupertCertificate) -> bool:
    """Acceptance policy for a search result."""
    if cert.rho <= 1 + RUPERT_EPS:
        return False
    margin = 1e-9 * outer_diameter(poly, cert.angles)
    return verify_certificate(poly, cert, margin).passed


# ---------------------------------------------------------------- grid search


def grid_starts(k: int) -> list[AngleQuad]:
    """``k`` thetas covering [0, 2pi) and ``k`` phis inset half a step inside [0, pi]."""
    thetas = [2 * math.pi * i / k for i in range(k)]
    phis = [math.pi * (i + 0.5) / k for i in range(k)]
    return [AngleQuad(tp, pp, tq, pq) for tp, pp, tq, pq in itertools.product(thetas, phis, thetas, phis)]


_WORKER_POLY = None


def _init_worker(poly):
    global _WORKER_POLY
    _WORKER_POLY = poly


def _objective(poly):
    return lambda x: evaluate_f(poly, x)


def _run_start(poly, start, cfg):
    try:
        return nelder_mead(_objective(poly), start, cfg)
    except Exception as exc:  # noqa: BLE001 - one bad start must not end the sweep
        log.warning("start %s failed: %s", tuple(start.as_array()), exc)
        return None


def _run_start_in_worker(index, start, cfg):
    return index, _run_start(_WORKER_POLY, start, cfg)


def grid_search(poly: Polyhedron3, cfg: SearchConfig = SearchConfig(), progress=None) -> RupertCertificate:
    """Nelder-Mead from every point of the k^4 start grid; keep the largest rho.

    Stops early once a start reaches ``cfg.target``.  ``progress(done,
    total)`` is called after each start.  Ties go to the earlier start.
    """
    starts = grid_starts(cfg.k)
    total = len(starts)
    best = None  # (value, index, angles)

    def consider(index, result):
        nonlocal best
        if result is None:
            return False
        angles, value = result
        if best is None or value > best[0] or (value == best[0] and index < best[1]):
            best = (value, index, angles)
        return value >= cfg.target

    if cfg.workers == 1:
        for done, start in enumerate(starts, start=1):
            stop = consider(done - 1, _run_start(poly, start, cfg))
            if progress:
                progress(done, total)
            if stop:
                break
    else:
        with cf.ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(poly,)) as pool:
            futures = [pool.submit(_run_start_in_worker, i, s, cfg) for i, s in enumerate(starts)]
            done = 0
            try:
                for fut in cf.as_completed(futures):
                    index, result = fut.result()
                    done += 1
                    if progress:
                        progress(done, total)
                    if consider(index, result):
                        break
            finally:
                for fut in futures:
                    fut.cancel()

    if best is None:
        raise ObjectiveError("every start failed")
    angles = best[2]
    return certificate_from(poly, angles, evaluate_placement(poly, angles))
