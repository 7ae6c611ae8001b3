"""Polyhedron catalogue: built-in Platonic solids and OFF-file ingestion."""

from __future__ import annotations

import difflib
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import FlatSolidError, InvalidArgumentError, LookupFailure, ParseError
from .geom3 import Polyhedron3

FAMILIES = ("platonic", "archimedean", "catalan", "johnson", "custom")
SHIPPED_MANIFESTS = ("archimedean", "catalan", "catalan_mirror", "johnson")
MERGE_EPS = 1e-12
PHI = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class SolidRecord:
    id: str
    family: str
    source: str
    polyhedron: Polyhedron3
    # centroid of the coordinates as read, i.e. where the source frame's origin moved from
    origin_shift: np.ndarray = field(default_factory=lambda: np.zeros(3), repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f"unknown family {self.family!r}")


def _merge_duplicates(pts: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(pts))) or 1.0
    keep = []
    for i, p in enumerate(pts):
        if not any(np.max(np.abs(p - pts[j])) <= MERGE_EPS * scale for j in keep):
            keep.append(i)
    return pts[keep]


def canonicalize(raw, name: str = "custom") -> Polyhedron3:
    """Merge duplicate vertices and move the vertex centroid to the origin."""
    poly, _ = canonicalize_with_shift(raw, name)
    return poly


def canonicalize_with_shift(raw, name: str = "custom") -> tuple[Polyhedron3, np.ndarray]:
    pts = np.asarray(raw, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise InvalidArgumentError("vertices must be 3-D points")
    if not np.all(np.isfinite(pts)):
        raise InvalidArgumentError("non-finite vertex coordinates")
    pts = _merge_duplicates(pts)
    if len(pts) < 4:
        raise FlatSolidError(f"{name}: need at least 4 distinct vertices, got {len(pts)}")
    shift = pts.mean(axis=0)
    scale = float(np.max(np.abs(pts)))
    if np.max(np.abs(shift)) <= MERGE_EPS * scale:
        # already centered; leaving it untouched makes canonicalization idempotent
        shift = np.zeros(3)
    centered = pts - shift
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[2] <= 1e-10 * sv[0]:
        raise FlatSolidError(f"{name}: vertices are coplanar (rank < 3)")
    return Polyhedron3(name, centered), shift


# ---------------------------------------------------------------- OFF files


def _numbers(tokens, lineno, kind):
    try:
        return [kind(t) for t in tokens]
    except ValueError:
        raise ParseError(f"non-numeric token in {tokens!r}", lineno) from None


def parse_off(text: str) -> np.ndarray:
    """Vertices of an OFF document, in file order.  Faces are checked for shape only."""
    lines = [
        (i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines(), start=1)
    ]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines or lines[0][1].split()[0] != "OFF":
        raise ParseError("missing OFF header", lines[0][0] if lines else 1)
    rest = lines[0][1].split()[1:]
    it = iter(lines[1:])
    if rest:
        lineno, counts = lines[0][0], rest
    else:
        try:
            lineno, line = next(it)
        except StopIteration:
            raise ParseError("missing counts line", lines[0][0] + 1) from None
        counts = line.split()
    if len(counts) != 3:
        raise ParseError("counts line must be 'V F E'", lineno)
    nv, nf, _ = _numbers(counts, lineno, int)

    verts = []
    for _ in range(nv):
        try:
            lineno, line = next(it)
        except StopIteration:
            raise ParseError(f"expected {nv} vertices, found {len(verts)}", lineno + 1) from None
        tok = line.split()
        if len(tok) != 3:
            raise ParseError(f"vertex line needs 3 coordinates, got {len(tok)}", lineno)
        verts.append(_numbers(tok, lineno, float))

    for k in range(nf):
        try:
            lineno, line = next(it)
        except StopIteration:
            raise ParseError(f"expected {nf} faces, found {k}", lineno + 1) from None
        tok = _numbers(line.split(), lineno, int)
        if not tok or len(tok) < tok[0] + 1:
            raise ParseError("face line shorter than its vertex count", lineno)
        if any(not 0 <= j < nv for j in tok[1 : tok[0] + 1]):
            raise ParseError("face refers to a missing vertex", lineno)
    return np.array(verts, dtype=float).reshape(-1, 3)


def format_off(vertices, faces=(), comment: str | None = None) -> str:
    verts = np.asarray(vertices, dtype=float)
    edges = {tuple(sorted((f[i], f[(i + 1) % len(f)]))) for f in faces for i in range(len(f))}
    out = ["OFF"]
    if comment:
        out.append(f"# {comment}")
    out.append(f"{len(verts)} {len(faces)} {len(edges)}")
    out += [" ".join(repr(float(c)) for c in v) for v in verts]
    out += [" ".join(str(x) for x in (len(f), *f)) for f in faces]
    return "\n".join(out) + "\n"


def read_off(path) -> np.ndarray:
    return parse_off(Path(path).read_text())


# ---------------------------------------------------------------- built-ins


def platonic_vertices() -> dict[str, np.ndarray]:
    """Unit-edge Platonic solids centered at the origin."""
    p = PHI
    cube = [(x, y, z) for x in (-0.5, 0.5) for y in (-0.5, 0.5) for z in (-0.5, 0.5)]
    tetra = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    octa = []
    for k in range(3):
        for s in (1, -1):
            v = [0.0, 0.0, 0.0]
            v[k] = s / math.sqrt(2)
            octa.append(v)
    ico = []
    for a in (0.5, -0.5):
        for b in (p / 2, -p / 2):
            ico += [(0, a, b), (a, b, 0), (b, 0, a)]
    dodeca = [(x, y, z) for x in (1, -1) for y in (1, -1) for z in (1, -1)]
    for a in (1 / p, -1 / p):
        for b in (p, -p):
            dodeca += [(0, a, b), (a, b, 0), (b, 0, a)]
    return {
        "tetrahedron": np.array(tetra, float) * (math.sqrt(2) / 4),
        "cube": np.array(cube, float),
        "octahedron": np.array(octa, float),
        "dodecahedron": np.array(dodeca, float) * (p / 2),
        "icosahedron": np.array(ico, float),
    }


def builtin_records() -> list[SolidRecord]:
    out = []
    for name, verts in platonic_vertices().items():
        poly, shift = canonicalize_with_shift(verts, name)
        out.append(SolidRecord(name, "platonic", "closed form, unit edge", poly, shift))
    return out


# ---------------------------------------------------------------- manifests


def data_dir() -> Path:
    return Path(str(resources.files("rupert") / "data"))


def shipped_manifest(name: str) -> Path:
    if name not in SHIPPED_MANIFESTS:
        raise LookupFailure(name, difflib.get_close_matches(name, SHIPPED_MANIFESTS))
    return data_dir() / f"{name}.manifest"


def family_of_manifest(path) -> str:
    stem = Path(path).stem.lower()
    for fam in FAMILIES:
        if stem.startswith(fam):
            return fam
    return "custom"


def read_manifest(path) -> list[tuple[str, Path]]:
    """``(id, path)`` pairs; relative paths resolve against the manifest's directory."""
    path = Path(path)
    out = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise ParseError(f"{path}: expected 'id path'", lineno)
        sid, rel = parts[0], Path(parts[1].strip())
        out.append((sid, rel if rel.is_absolute() else path.parent / rel))
    return out


class Catalogue:
    """Solids by id.  Starts with the Platonic built-ins."""

    def __init__(self, records=None):
        self._records: dict[str, SolidRecord] = {}
        for rec in builtin_records() if records is None else records:
            self.add(rec)

    def add(self, record: SolidRecord):
        if record.id in self._records:
            raise InvalidArgumentError(f"duplicate solid id {record.id!r}")
        self._records[record.id] = record

    def ingest_manifest(self, path, family: str | None = None) -> list[str]:
        family = family or family_of_manifest(path)
        added = []
        for sid, off in read_manifest(path):
            if sid in self._records:
                continue
            try:
                raw = read_off(off)
            except ParseError as exc:
                raise ParseError(f"{off}: {exc}") from None
            poly, shift = canonicalize_with_shift(raw, sid)
            self.add(SolidRecord(sid, family, str(off), poly, shift))
            added.append(sid)
        return added

    def lookup(self, sid: str) -> SolidRecord:
        try:
            return self._records[sid]
        except KeyError:
            near = difflib.get_close_matches(sid, list(self._records), n=5, cutoff=0.5)
            raise LookupFailure(sid, near) from None

    def __getitem__(self, sid):
        return self.lookup(sid)

    def __contains__(self, sid):
        return sid in self._records

    def __iter__(self):
        return iter(self._records.values())

    def __len__(self):
        return len(self._records)

    def ids(self) -> list[str]:
        return list(self._records)


def full_catalogue() -> Catalogue:
    """Built-ins plus every manifest shipped with the package."""
    cat = Catalogue()
    for name in SHIPPED_MANIFESTS:
        cat.ingest_manifest(shipped_manifest(name))
    return cat
