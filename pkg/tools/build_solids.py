#!/usr/bin/env python3
"""Regenerate the OFF coordinate files under src/rupert/data/.

Archimedean solids come from their closed-form coordinates (the snub
dodecahedron from a numerically solved orbit of the icosahedral rotation
group), Catalan solids are their midsphere reciprocals, and the Johnson
solids are assembled from unit-edge cupolae, rotundae and antiprisms.

The coordinate frames (axis placement, chirality, origin) are meant to
reproduce the dmccooey.com polyhedron tables.  Those files were not
available offline, so each frame was rebuilt from the standard
construction and then checked against angle quadruples quoted in that
frame (see the README).  All solids have unit edge length
except the Catalan solids, which share the midsphere of their unit-edge
Archimedean duals.

    python tools/build_solids.py [--out src/rupert/data]
"""

import argparse
import itertools
import math
from pathlib import Path

import numpy as np
from scipy.optimize import fsolve
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

PHI = (1 + math.sqrt(5)) / 2
TRIBONACCI = (1 + (19 + 3 * math.sqrt(33)) ** (1 / 3) + (19 - 3 * math.sqrt(33)) ** (1 / 3)) / 3
EPS = 1e-9


# ---------------------------------------------------------------- helpers


def unique_points(pts, tol=1e-9):
    out = []
    for p in np.asarray(pts, dtype=float):
        if not any(np.linalg.norm(p - q) < tol for q in out):
            out.append(p)
    return np.array(out)


def sign_variants(p, parity=None):
    """All sign changes of ``p``; ``parity`` 0/1 keeps an even/odd number of minus signs."""
    out = []
    for s in itertools.product((1, -1), repeat=3):
        if parity is not None and sum(x < 0 for x in s) % 2 != parity:
            continue
        out.append([s[i] * p[i] for i in range(3)])
    return out


def cyclic(p):
    return [[p[k % 3], p[(k + 1) % 3], p[(k + 2) % 3]] for k in range(3)]


def all_perms(p):
    return [list(q) for q in itertools.permutations(p)]


def expand(bases, perms=cyclic, parity=None):
    pts = []
    for b in bases:
        for q in sign_variants(b, parity):
            pts.extend(perms(q))
    return unique_points(pts)


def unit_edge(verts):
    return verts / np.min(pdist(verts))


def rotation(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + math.sin(angle) * k + (1 - math.cos(angle)) * k @ k


def rot_z(angle):
    return rotation([0, 0, 1], angle)


def align_to_z(v):
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    z = np.array([0.0, 0.0, 1.0])
    axis = np.cross(v, z)
    s = np.linalg.norm(axis)
    if s < 1e-15:
        return np.eye(3) if v @ z > 0 else np.diag([1.0, -1.0, -1.0])
    return rotation(axis, math.atan2(s, v @ z))


def invariant_under(verts, mat):
    moved = verts @ mat.T
    return all(np.min(np.linalg.norm(verts - m, axis=1)) < 1e-7 for m in moved)


def icosahedral_frame(verts):
    """Swap x and y if needed so that (0, phi, 1) is a 5-fold axis."""
    if invariant_under(verts, rotation([0, PHI, 1], 2 * math.pi / 5)):
        return verts
    swapped = verts[:, [1, 0, 2]]
    assert invariant_under(swapped, rotation([0, PHI, 1], 2 * math.pi / 5))
    return swapped


def face_planes(verts):
    """Distinct supporting planes (unit normal n, offset d) with n.x = d on the face."""
    hull = ConvexHull(verts)
    planes = []
    for eq in hull.equations:
        n, d = eq[:3], -eq[3]
        if not any(np.allclose(n, m, atol=1e-7) and abs(d - e) < 1e-7 for m, e in planes):
            planes.append((n, d))
    return planes


def faces_of(verts):
    faces = []
    for n, d in face_planes(verts):
        idx = np.flatnonzero(np.abs(verts @ n - d) < 1e-7)
        c = verts[idx].mean(axis=0)
        e1 = verts[idx[0]] - c
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        ang = np.arctan2((verts[idx] - c) @ e2, (verts[idx] - c) @ e1)
        faces.append([int(i) for i in idx[np.argsort(ang)]])
    return faces


def edges_of(verts, faces):
    out = set()
    for f in faces:
        for a, b in zip(f, f[1:] + f[:1]):
            out.add((min(a, b), max(a, b)))
    return sorted(out)


# ---------------------------------------------------------------- Archimedean


def snub_cube(chirality=0):
    t = TRIBONACCI
    base = (1.0, 1.0 / t, t)
    even = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    odd = [(0, 2, 1), (2, 1, 0), (1, 0, 2)]
    pts = []
    for s in itertools.product((1, -1), repeat=3):
        plus_even = sum(x > 0 for x in s) % 2 == 0
        perms = even if plus_even == (chirality == 0) else odd
        for p in perms:
            pts.append([s[i] * base[p[i]] for i in range(3)])
    return np.array(pts)


def rotation_group(generators):
    group = [np.eye(3)]
    frontier = [np.eye(3)]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                m = h @ g
                if not any(np.allclose(m, q, atol=1e-9) for q in group):
                    group.append(m)
                    nxt.append(m)
        frontier = nxt
    return group


def snub_dodecahedron():
    """Orbit of one point under the icosahedral rotations with all edges equal."""
    a5 = np.array([0.0, PHI, 1.0])
    a3 = np.array([1.0, 1.0, 1.0])
    # pick the 3-fold axis nearest to a5 and the rotation sense making r5 r3 a half-turn
    axes3 = [np.array(p, float) for p in sign_variants([1, 1, 1])]
    a3 = max(axes3, key=lambda v: v @ a5 / np.linalg.norm(v))
    r5 = rotation(a5, 2 * math.pi / 5)
    for sense in (1, -1):
        r3 = rotation(a3, sense * 2 * math.pi / 3)
        if abs(np.trace(r5 @ r3) + 1) < 1e-9:
            break
    else:
        raise RuntimeError("no half-turn product")
    r2 = r5 @ r3
    group = rotation_group([r5, r3])
    assert len(group) == 60

    def point(params):
        th, ph = params
        return np.array([math.cos(th) * math.sin(ph), math.sin(th) * math.sin(ph), math.cos(ph)])

    def residual(params):
        x = point(params)
        d5 = np.linalg.norm(x - r5 @ x)
        d3 = np.linalg.norm(x - r3 @ x)
        d2 = np.linalg.norm(x - r2 @ x)
        return [d5 - d3, d5 - d2]

    mid = a5 / np.linalg.norm(a5) + a3 / np.linalg.norm(a3)
    mid /= np.linalg.norm(mid)
    guess = [math.atan2(mid[1], mid[0]), math.acos(mid[2])]
    best = None
    for dth, dph in itertools.product((-0.2, 0.0, 0.2), repeat=2):
        sol, info, ok, _ = fsolve(residual, [guess[0] + dth, guess[1] + dph], full_output=True, xtol=1e-15)
        if ok != 1 or max(abs(r) for r in residual(sol)) > 1e-13:
            continue
        verts = unique_points([g @ point(sol) for g in group])
        if len(verts) == 60 and len(edges_of(verts, faces_of(verts))) == 150:
            best = verts
            break
    assert best is not None, "snub dodecahedron solve failed"
    return best


def archimedean():
    s2 = math.sqrt(2)
    p = PHI
    solids = {
        "truncated_tetrahedron": expand([(3, 1, 1)], all_perms, parity=1),
        "cuboctahedron": expand([(1, 1, 0)], all_perms),
        "truncated_cube": expand([(s2 - 1, 1, 1)], all_perms),
        "truncated_octahedron": expand([(0, 1, 2)], all_perms),
        "rhombicuboctahedron": expand([(1, 1, 1 + s2)], all_perms),
        "truncated_cuboctahedron": expand([(1, 1 + s2, 1 + 2 * s2)], all_perms),
        "snub_cube": snub_cube(0),
        "icosidodecahedron": expand([(0, 0, p), (0.5, p / 2, p * p / 2)]),
        "truncated_dodecahedron": expand([(0, 1 / p, 2 + p), (1 / p, p, 2 * p), (p, 2, p + 1)]),
        "truncated_icosahedron": expand([(0, 1, 3 * p), (1, 2 + p, 2 * p), (p, 2, p**3)]),
        "rhombicosidodecahedron": expand([(1, 1, p**3), (p * p, p, 2 * p), (2 + p, 0, p * p)]),
        "truncated_icosidodecahedron": expand(
            [
                (1 / p, 1 / p, 3 + p),
                (2 / p, p, 1 + 2 * p),
                (1 / p, p * p, -1 + 3 * p),
                (2 * p - 1, 2, 2 + p),
                (p, 3, 2 * p),
            ]
        ),
        "snub_dodecahedron": snub_dodecahedron(),
    }
    out = {}
    for name, verts in solids.items():
        verts = unit_edge(np.asarray(verts, float))
        if "icosi" in name or "dodeca" in name or name == "truncated_icosahedron":
            verts = icosahedral_frame(verts)
        out[name] = verts
    return out


EXPECTED_COUNTS = {
    "truncated_tetrahedron": 12, "cuboctahedron": 12, "truncated_cube": 24,
    "truncated_octahedron": 24, "rhombicuboctahedron": 24, "truncated_cuboctahedron": 48,
    "snub_cube": 24, "icosidodecahedron": 30, "truncated_dodecahedron": 60,
    "truncated_icosahedron": 60, "rhombicosidodecahedron": 60,
    "truncated_icosidodecahedron": 120, "snub_dodecahedron": 60,
}  # fmt: skip


# ---------------------------------------------------------------- Catalan

DUALS = {
    "truncated_tetrahedron": "triakis_tetrahedron",
    "cuboctahedron": "rhombic_dodecahedron",
    "truncated_cube": "triakis_octahedron",
    "truncated_octahedron": "tetrakis_hexahedron",
    "rhombicuboctahedron": "deltoidal_icositetrahedron",
    "truncated_cuboctahedron": "disdyakis_dodecahedron",
    "snub_cube": "pentagonal_icositetrahedron",
    "icosidodecahedron": "rhombic_triacontahedron",
    "truncated_dodecahedron": "triakis_icosahedron",
    "truncated_icosahedron": "pentakis_dodecahedron",
    "rhombicosidodecahedron": "deltoidal_hexecontahedron",
    "truncated_icosidodecahedron": "disdyakis_triacontahedron",
    "snub_dodecahedron": "pentagonal_hexecontahedron",
}


def midradius(verts):
    faces = faces_of(verts)
    a, b = edges_of(verts, faces)[0]
    return np.linalg.norm(verts[a] + verts[b]) / 2


def midsphere_dual(verts):
    r = midradius(verts)
    return np.array([r * r * n / d for n, d in face_planes(verts)])


# ---------------------------------------------------------------- Johnson


def ring(n, radius, z, phase):
    a = phase + 2 * np.pi * np.arange(n) / n
    return np.column_stack((radius * np.cos(a), radius * np.sin(a), np.full(n, z)))


def circumradius(n):
    return 1 / (2 * math.sin(math.pi / n))


def antiprism_height(n):
    chord = 2 * circumradius(n) * math.sin(math.pi / (2 * n))
    return math.sqrt(1 - chord * chord)


def cupola_height(n):
    dm = circumradius(2 * n) * math.cos(math.pi / (2 * n)) - circumradius(n) * math.cos(math.pi / n)
    return math.sqrt(1 - dm * dm)


def cupola(n, z0, phase, up=1):
    """Unit-edge n-gonal cupola with its 2n-gon base at height ``z0``."""
    base = ring(2 * n, circumradius(2 * n), z0, phase)
    top = ring(n, circumradius(n), z0 + up * cupola_height(n), phase - math.pi / (2 * n))
    return np.vstack((base, top))


def rotunda(z0, phase):
    """Unit-edge pentagonal rotunda (half an icosidodecahedron) standing on its decagon."""
    ico = archimedean_cache()["icosidodecahedron"]
    w = ico @ align_to_z([0, PHI, 1]).T
    w = w[w[:, 2] > -EPS]
    eq = w[np.abs(w[:, 2]) < EPS]
    w = w @ rot_z(phase - math.atan2(eq[0, 1], eq[0, 0])).T
    w[:, 2] += z0
    return w


_ARCH = {}


def archimedean_cache():
    if not _ARCH:
        _ARCH.update(archimedean())
    return _ARCH


def regular_faces(verts, k):
    out = []
    for n, d in face_planes(verts):
        idx = np.flatnonzero(np.abs(verts @ n - d) < 1e-7)
        if len(idx) == k:
            out.append((n, idx))
    return out


def find_face(verts, k, direction):
    direction = np.asarray(direction, float) / np.linalg.norm(direction)
    for n, idx in regular_faces(verts, k):
        if np.allclose(n, direction, atol=1e-7):
            return n, idx
    raise ValueError(f"no {k}-gonal face with normal {direction}")


def augment_decagon(verts, direction):
    """Attach a pentagonal cupola to a decagonal face of a truncated dodecahedron.

    The cupola's top vertices sit over the decagon edges shared with other
    decagons (the other twist is not a Johnson solid).
    """
    n, idx = find_face(verts, 10, direction)
    c = verts[idx].mean(axis=0)
    rest = [k for k in range(len(verts)) if k not in set(idx)]
    apex = []
    for a, b in itertools.combinations(idx, 2):
        if abs(np.linalg.norm(verts[a] - verts[b]) - 1) > 1e-9:
            continue
        shared_triangle = any(
            abs(np.linalg.norm(verts[k] - verts[a]) - 1) < 1e-9
            and abs(np.linalg.norm(verts[k] - verts[b]) - 1) < 1e-9
            for k in rest
        )
        if not shared_triangle:
            m = (verts[a] + verts[b]) / 2 - c
            apex.append(m / np.linalg.norm(m))
    assert len(apex) == 5
    top = [c + cupola_height(5) * n + circumradius(5) * d for d in apex]
    return np.vstack((verts, top))


def gyrate_pentagon(verts, direction):
    n, idx = find_face(verts, 5, direction)
    c = verts[idx].mean(axis=0)
    out = verts.copy()
    out[idx] = (verts[idx] - c) @ rotation(n, math.pi / 5).T + c
    return out


def remove_pentagon(verts, direction):
    _, idx = find_face(verts, 5, direction)
    return np.delete(verts, idx, axis=0)


def johnson():
    ha = antiprism_height(10)
    j25 = np.vstack((ring(10, circumradius(10), 0.0, 0.0), rotunda(ha, math.pi / 10)))
    j47 = np.vstack((cupola(5, 0.0, 0.0, up=-1), rotunda(ha, math.pi / 10)))
    frame = rot_z(0.3 * math.pi)
    j25 = j25 @ frame.T - [0, 0, ha / 2]
    j47 = j47 @ frame.T - [0, 0, ha / 2]

    h8 = antiprism_height(8)
    j45 = np.vstack((cupola(4, 0.0, 0.0, up=-1), cupola(4, h8, 3 * math.pi / 8))) - [0, 0, h8 / 2]

    td = archimedean_cache()["truncated_dodecahedron"]
    j71 = td
    for d in ([-PHI, 1, 0], [0, -PHI, 1], [PHI, 1, 0]):
        j71 = augment_decagon(j71, d)

    rid = archimedean_cache()["rhombicosidodecahedron"]
    top = [0, -PHI, -1]
    opposite = [0, PHI, 1]
    # two further pentagons, mutually and with ``top`` in meta position
    axes = [np.asarray(a, float) / math.sqrt(PHI * PHI + 1) for a in expand([(0, PHI, 1)])]
    unit_top = np.asarray(top) / math.sqrt(PHI * PHI + 1)

    def meta(a, b):
        return abs(a @ b + 1 / math.sqrt(5)) < 1e-9

    meta1 = next(a for a in axes if meta(a, unit_top))
    meta2 = next(a for a in axes if meta(a, unit_top) and meta(a, meta1))
    j72 = gyrate_pentagon(rid, top)
    j73 = gyrate_pentagon(gyrate_pentagon(rid, top), opposite)
    j74 = gyrate_pentagon(gyrate_pentagon(rid, top), meta1)
    j75 = gyrate_pentagon(gyrate_pentagon(gyrate_pentagon(rid, top), meta1), meta2)
    # the diminished pentagon faces (0, phi, 1); the other choice is the point reflection
    j76 = remove_pentagon(rid, opposite)
    j77 = gyrate_pentagon(remove_pentagon(rid, opposite), top)
    return {
        "J25": j25, "J45": j45, "J47": j47, "J71": j71, "J72": j72, "J73": j73,
        "J74": j74, "J75": j75, "J76": j76, "J77": j77,
    }  # fmt: skip


JOHNSON_COUNTS = {"J25": 30, "J45": 24, "J47": 35, "J71": 75, "J72": 60, "J73": 60,
                  "J74": 60, "J75": 60, "J76": 55, "J77": 55}  # fmt: skip


# ---------------------------------------------------------------- output


def write_off(path, verts, faces, comment):
    lines = ["OFF", f"# {comment}", f"{len(verts)} {len(faces)} {len(edges_of(verts, faces))}"]
    lines += [" ".join(repr(float(c)) for c in v) for v in verts]
    lines += [" ".join(str(x) for x in [len(f)] + f) for f in faces]
    path.write_text("\n".join(lines) + "\n")


def check_unit_edges(name, verts):
    faces = faces_of(verts)
    lengths = [np.linalg.norm(verts[a] - verts[b]) for a, b in edges_of(verts, faces)]
    assert np.allclose(lengths, 1.0, atol=1e-9), (name, min(lengths), max(lengths))
    return faces


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/rupert/data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    manifests = {"archimedean": [], "catalan": [], "johnson": [], "chiral": []}

    for name, verts in archimedean_cache().items():
        assert len(verts) == EXPECTED_COUNTS[name], name
        faces = check_unit_edges(name, verts)
        write_off(out / f"{name}.off", verts, faces, f"{name}, unit edge")
        manifests["archimedean"].append(name)

        dual = midsphere_dual(verts)
        dname = DUALS[name]
        write_off(out / f"{dname}.off", dual, faces_of(dual), f"{dname}, midsphere dual of unit-edge {name}")
        manifests["catalan"].append(dname)

    for name in ("snub_cube", "snub_dodecahedron"):
        mirror = archimedean_cache()[name] * [-1, 1, 1]
        dname = DUALS[name] + "_mirror"
        dual = midsphere_dual(mirror)
        write_off(out / f"{dname}.off", dual, faces_of(dual), f"{dname}, opposite chirality")
        manifests["chiral"].append(dname)

    for name, verts in johnson().items():
        assert len(verts) == JOHNSON_COUNTS[name], (name, len(verts))
        faces = check_unit_edges(name, verts)
        write_off(out / f"{name}.off", verts, faces, f"{name}, unit edge")
        manifests["johnson"].append(name)

    for family, ids in manifests.items():
        stem = "catalan_mirror" if family == "chiral" else family
        text = [f"# {stem.replace('_', ' ')} solids: id, OFF file"] + [f"{i} {i}.off" for i in ids]
        (out / f"{stem}.manifest").write_text("\n".join(text) + "\n")


if __name__ == "__main__":
    main()
