"""Acceptance criteria, one test per criterion.

Each test prints a single ``CRITERION n PASS|FAIL: ...`` line, which is also
collected into the terminal summary.  Tolerances are pinned as constants.
"""

import math
import re
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, KNOWN
from oracles import angles_oracle_value, placement_oracle, random_convex_polygon

from rupert.geom3 import (
    Polyhedron3,
    convex_hull_2d,
    halfplanes_of,
    projection_matrix,
    sphere_point,
)
from rupert.optimize import RUPERT_EPS, RupertCertificate, evaluate_f
from rupert.placement import solve_placement
from rupert.solids import full_catalogue

EVAL_TOL = 1e-5
EVAL_SECONDS = 1.0
CUBE_TOL = 1e-3
CUBE_SECONDS = 60.0
SWEEP_SECONDS = 600.0
SWEEP_TARGET = "1.000001"
ORACLE_TOL = 1e-3
PROPERTY_TOL = 1e-9
ORTHO_TOL = 1e-12
TRIALS = 200
RANDOM_PAIRS = 50

# reference angle quadruples and scales for two Catalan solids
EVAL_ROWS = {
    "triakis_tetrahedron": ((6.2831304, 0.8172340, 1.5481073, 2.3561501), 1.0000041),
    "pentagonal_icositetrahedron": ((0.4660288, 1.4676689, 2.3301605, 3.0267874), 1.0004361),
}
KNOWN_SOLIDS = ["triakis_tetrahedron", "pentagonal_icositetrahedron", "J25", "J45", "J47", "J71", "J76"]
PLATONIC = ["tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron"]

# best cube scale from tests/oracles.py::cube_optimum_oracle(n_p=(16, 8), n_q=(4, 6), top=4),
# frozen; test_cube_oracle_value recomputes it
CUBE_ORACLE_RHO = 1.0606601440701504


def report(n, ok, detail):
    line = f"CRITERION {n} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def table_row(out):
    """Solid id and the five numbers of the first table printed by ``solve``."""
    cols = out.splitlines()[1].split()
    return cols[0], [float(c) for c in cols[1:]]


def test_criterion_1_reference_evaluations(rupert, catalogue):
    details, ok = [], True
    for sid, (angles, expected) in EVAL_ROWS.items():
        start = time.perf_counter()
        r = rupert("eval", sid, *angles)
        seconds = time.perf_counter() - start
        got = float(r.out)
        good = r.code == 0 and abs(got - expected) <= EVAL_TOL and seconds < EVAL_SECONDS
        # second route: the brute-force placement oracle on the raw source vertices
        rec = catalogue[sid]
        oracle = angles_oracle_value(rec.polyhedron.vertices + rec.origin_shift, angles, n_alpha=720)
        good = good and abs(oracle - expected) <= EVAL_TOL
        ok = ok and good
        details.append(f"{sid} rho={got:.7f} oracle={oracle:.7f} want {expected} ({seconds:.3f} s)")
    # the other hand of the chiral solid, reported either way
    mirror = rupert("eval", "pentagonal_icositetrahedron_mirror", *EVAL_ROWS["pentagonal_icositetrahedron"][0])
    details.append(f"mirror hand rho={float(mirror.out):.7f}")
    report(1, ok, "; ".join(details))


def test_criterion_2_known_certificates_verify(rupert):
    details, ok = [], True
    for sid in KNOWN_SOLIDS:
        r = rupert("verify", sid, "--cert", KNOWN / f"{sid}.cert", "--margin", "0")
        slack = float(re.search(r"min_slack=(\S+)", r.out).group(1))
        ok = ok and r.code == 0 and r.out.startswith("PASS") and slack > 0
        details.append(f"{sid} {slack:.2e}")
    report(2, ok, "min slack " + ", ".join(details))


def test_criterion_3_cube_optimum(rupert, tmp_path):
    start = time.perf_counter()
    r = rupert("solve", "cube", "--k", "3", "--out", tmp_path / "cube.cert", "-q")
    seconds = time.perf_counter() - start
    _, row = table_row(r.out)
    rho = row[-1]
    ok = r.code == 0 and abs(rho - CUBE_ORACLE_RHO) <= CUBE_TOL and seconds < CUBE_SECONDS
    report(3, ok, f"rho={rho:.7f} oracle={CUBE_ORACLE_RHO:.7f} in {seconds:.1f} s")


@pytest.mark.slow
def test_cube_oracle_value():
    from oracles import cube_optimum_oracle

    value = cube_optimum_oracle(n_p=(16, 8), n_q=(4, 6), top=4)
    assert abs(value - CUBE_ORACLE_RHO) < 1e-9
    # the classical value for the cube
    assert abs(value - 3 * math.sqrt(2) / 4) < 1e-6


def test_criterion_4_platonic_sweep(rupert, tmp_path):
    details, ok, total = [], True, 0.0
    for sid in PLATONIC:
        cert = tmp_path / f"{sid}.cert"
        start = time.perf_counter()
        r = rupert("solve", sid, "--k", "5", "--target", SWEEP_TARGET, "--out", cert, "-q")
        total += time.perf_counter() - start
        rho = table_row(r.out)[1][-1]
        verified = rupert("verify", sid, "--cert", cert).code == 0
        ok = ok and r.code == 0 and rho > 1 + RUPERT_EPS and verified
        details.append(f"{sid} {rho:.7f}")
    ok = ok and total < SWEEP_SECONDS
    report(4, ok, f"k=5 target {SWEEP_TARGET}: " + ", ".join(details) + f" in {total:.0f} s")


def test_criterion_5_snub_cube_negative(rupert, tmp_path):
    start = time.perf_counter()
    r = rupert("solve", "snub_cube", "--k", "5", "--out", tmp_path / "snub.cert", "-q")
    seconds = time.perf_counter() - start
    rho = table_row(r.out)[1][-1]
    report(5, r.code == 2, f"exit {r.code}, best rho={rho:.7f} in {seconds:.0f} s")


def test_criterion_6_placement_oracle():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(RANDOM_PAIRS):
        inner = random_convex_polygon(rng, int(rng.integers(5, 9)))
        outer = random_convex_polygon(rng, int(rng.integers(5, 9)))
        mine = solve_placement(halfplanes_of(convex_hull_2d(inner)), halfplanes_of(convex_hull_2d(outer))).rho
        worst = max(worst, abs(mine - placement_oracle(inner, outer)[0]))
    report(6, worst <= ORACLE_TOL, f"{RANDOM_PAIRS} pairs, worst |rho - oracle| = {worst:.2e}")


def _random_angles(rng):
    return rng.uniform([0, 0, 0, 0], [2 * math.pi, math.pi, 2 * math.pi, math.pi])


def test_criterion_7_property_suites():
    rng = np.random.default_rng(7)
    cat = full_catalogue()
    solids = [cat[s].polyhedron for s in PLATONIC + ["triakis_tetrahedron", "cuboctahedron", "J25", "J45"]]
    worst = dict.fromkeys(["self", "period", "scale", "ortho"], 0.0)
    hull_ok = True
    for _ in range(TRIALS):
        pts = random_convex_polygon(rng, int(rng.integers(3, 11)), scale=rng.uniform(0.1, 10))
        p = halfplanes_of(convex_hull_2d(pts))
        worst["self"] = max(worst["self"], abs(solve_placement(p, p).rho - 1))

        poly = solids[rng.integers(len(solids))]
        a = _random_angles(rng)
        base = evaluate_f(poly, a)
        shifted = a + 2 * math.pi * rng.integers(-2, 3, 4)
        worst["period"] = max(worst["period"], abs(evaluate_f(poly, shifted) - base))
        c = rng.uniform(0.1, 10)
        scaled = Polyhedron3(poly.name, c * poly.vertices)
        worst["scale"] = max(worst["scale"], abs(evaluate_f(scaled, a) - base))

        t, ph = rng.uniform(-10, 10, 2)
        m = projection_matrix((t, ph))
        dev = max(np.max(np.abs(m @ m.T - np.eye(2))), np.max(np.abs(m @ sphere_point((t, ph)))))
        worst["ortho"] = max(worst["ortho"], dev)

        cloud = rng.normal(size=(int(rng.integers(3, 60)), 2)) * rng.uniform(0.01, 100)
        hull = convex_hull_2d(cloud)
        hull_ok = hull_ok and np.array_equal(convex_hull_2d(hull), hull)
    ok = (worst["self"] <= PROPERTY_TOL and worst["period"] <= PROPERTY_TOL
          and worst["scale"] <= PROPERTY_TOL and worst["ortho"] <= ORTHO_TOL and hull_ok)  # fmt: skip
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(7, ok, f"{TRIALS} trials each; worst {detail}; hull idempotent {hull_ok}")


def test_criterion_8_determinism(rupert, tmp_path):
    paths = [tmp_path / "a.cert", tmp_path / "b.cert"]
    for path in paths:
        assert rupert("solve", "tetrahedron", "--k", "3", "--threads", "1", "--out", path, "-q").code == 0
    a, b = (p.read_bytes() for p in paths)
    rho = RupertCertificate.from_text(a.decode()).rho
    report(8, a == b, f"two certificates {'identical' if a == b else 'differ'}, rho={rho:.7f}")
