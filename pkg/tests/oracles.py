"""Brute-force reference computations used by the tests.

Nothing here imports the package's placement or optimization code.  The
placement oracle works in the primal: for a fixed rotation angle the best
scale and translation solve a 3-variable linear program whose constraints
use the support function of the rotated inner point set along each outer
edge normal.  That LP is solved exactly by trying every triple of
constraints, vectorized over a grid of angles, and the best angle is then
refined on successively finer local grids.
"""

import itertools
import math

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull


def outer_halfplanes(points):
    """Rows (a, b) with a x + b y <= 1 for the hull of ``points`` (origin inside)."""
    eq = ConvexHull(np.asarray(points, float)).equations
    return eq[:, :2] / (-eq[:, 2])[:, None]


def _lp_best(inner, halfplanes, alphas):
    """Max scale over (scale, u, v) for each angle; returns (rho, u, v) arrays."""
    c, s = np.cos(alphas), np.sin(alphas)
    x, y = inner[:, 0], inner[:, 1]
    a, b = halfplanes[:, 0], halfplanes[:, 1]
    # rotated point i along normal j: a (c x - s y) + b (s x + c y)
    proj = (a[None, None, :] * (c[:, None, None] * x[None, :, None] - s[:, None, None] * y[None, :, None])
            + b[None, None, :] * (s[:, None, None] * x[None, :, None] + c[:, None, None] * y[None, :, None]))  # fmt: skip
    h = proj.max(axis=1)  # (A, n) support values
    n = len(a)
    triples = np.array(list(itertools.combinations(range(n), 3)))
    m = np.empty((len(alphas), len(triples), 3, 3))
    m[..., 0] = h[:, triples]
    m[..., 1] = a[triples][None]
    m[..., 2] = b[triples][None]
    det = np.linalg.det(m)
    ok = np.abs(det) > 1e-12
    m[~ok] = np.eye(3)
    sol = np.linalg.solve(m, np.ones(m.shape[:-1] + (1,)))[..., 0]  # (A, T, 3)
    lhs = sol[..., 0:1] * h[:, None, :] + sol[..., 1:2] * a + sol[..., 2:3] * b
    feasible = ok & np.all(lhs <= 1 + 1e-9, axis=-1) & (sol[..., 0] > 0)
    rho = np.where(feasible, sol[..., 0], -np.inf)
    best = np.argmax(rho, axis=1)
    idx = np.arange(len(alphas))
    return rho[idx, best], sol[idx, best, 1], sol[idx, best, 2]


def placement_oracle(inner, outer, n_alpha=3600, refine=3):
    """Largest ``rho`` with ``rho R(alpha) inner + w`` inside hull(outer).

    Returns ``(rho, alpha, u, v)``.
    """
    inner = np.asarray(inner, float)
    hp = outer_halfplanes(outer)
    alphas = np.linspace(0.0, 2 * math.pi, n_alpha, endpoint=False)
    step = 2 * math.pi / n_alpha
    rho, u, v = _lp_best(inner, hp, alphas)
    k = int(np.argmax(rho))
    best = (rho[k], alphas[k], u[k], v[k])
    for _ in range(refine):
        # refine around the few best coarse angles, not just the top one
        centers = [best[1]] + list(alphas[np.argsort(rho)[::-1][:3]])
        fine = np.concatenate([np.linspace(c0 - step, c0 + step, 201) for c0 in centers])
        r, uu, vv = _lp_best(inner, hp, fine)
        j = int(np.argmax(r))
        if r[j] > best[0]:
            best = (r[j], fine[j], uu[j], vv[j])
        alphas, rho, step = fine, r, step / 50
    return float(best[0]), float(best[1] % (2 * math.pi)), float(best[2]), float(best[3])


def proj_matrix(theta, phi):
    # rows: d/dtheta direction (normalized) and minus d/dphi direction of the view vector
    return np.array(
        [
            [-math.sin(theta), math.cos(theta), 0.0],
            [-math.cos(theta) * math.cos(phi), -math.sin(theta) * math.cos(phi), math.sin(phi)],
        ]
    )


def angles_oracle_value(vertices, angles, n_alpha=360):
    tp, pp, tq, pq = angles
    v = np.asarray(vertices, float)
    v = v - v.mean(axis=0)
    inner = v @ proj_matrix(tp, pp).T
    outer = v @ proj_matrix(tq, pq).T
    try:
        return placement_oracle(inner, outer, n_alpha=n_alpha, refine=2)[0]
    except Exception:
        return 0.0


def cube_optimum_oracle(n_p=(24, 12), n_q=(6, 8), top=6):
    """Best cube passage scale from a dense angle grid plus local refinement.

    The outer direction is restricted to the octant wedge 0 <= theta <= pi/4,
    0 <= phi <= pi/2, which meets every orbit of the cube's symmetry group;
    the inner direction ranges over the whole sphere.
    """
    cube = np.array(list(itertools.product((-0.5, 0.5), repeat=3)))
    tq = np.linspace(0, math.pi / 4, n_q[0])
    pq = np.linspace(0.05, math.pi / 2, n_q[1])
    tp = np.linspace(0, 2 * math.pi, n_p[0], endpoint=False)
    pp = (np.arange(n_p[1]) + 0.5) * math.pi / n_p[1]
    scored = []
    for a in itertools.product(tp, pp, tq, pq):
        scored.append((angles_oracle_value(cube, a, n_alpha=180), a))
    scored.sort(key=lambda t: -t[0])
    best = scored[0][0]
    for _, a in scored[:top]:
        res = minimize(lambda x: -angles_oracle_value(cube, x, n_alpha=720), np.array(a),
                       method="Nelder-Mead", options={"xatol": 1e-9, "fatol": 1e-12, "maxfev": 3000})  # fmt: skip
        best = max(best, -res.fun)
    return best


def brute_hull_ccw(points):
    """Extreme points by pairwise orientation tests, sorted counter-clockwise."""
    pts = np.unique(np.asarray(points, float), axis=0)
    keep = []
    for i, p in enumerate(pts):
        extreme = False
        for j, q in enumerate(pts):
            if i == j:
                continue
            d = q - p
            cross = d[0] * (pts[:, 1] - p[1]) - d[1] * (pts[:, 0] - p[0])
            # p is extreme if some line through p has all points weakly on one side,
            # with no point beyond p along that line
            if np.all(cross >= -1e-12):
                along = (pts - p) @ d
                on_line = np.abs(cross) <= 1e-12
                if np.all(along[on_line] >= -1e-12):
                    extreme = True
                    break
        if extreme:
            keep.append(p)
    keep = np.array(keep)
    c = keep.mean(axis=0)
    order = np.argsort(np.arctan2(keep[:, 1] - c[1], keep[:, 0] - c[0]))
    return keep[order]


def random_convex_polygon(rng, k, scale=1.0):
    """``k`` points on a random ellipse around a point near the origin (strictly convex)."""
    while True:
        t = np.sort(rng.uniform(0, 2 * math.pi, k))
        # keep vertices apart so the polygon is not nearly degenerate
        if np.min(np.diff(np.concatenate([t, [t[0] + 2 * math.pi]]))) < 0.25:
            continue
        circ = np.column_stack((np.cos(t), np.sin(t)))
        m = np.array([[rng.uniform(0.6, 1.4), rng.uniform(-0.4, 0.4)], [0.0, rng.uniform(0.6, 1.4)]])
        poly = circ @ m.T + rng.uniform(-0.2, 0.2, 2)
        eq = ConvexHull(poly).equations
        # origin well inside: every edge line at distance >= 0.1
        if len(eq) == k and np.min(-eq[:, 2]) >= 0.1:
            return scale * poly
