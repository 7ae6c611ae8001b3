"""SVG drawing of a certificate: the outer silhouette and the placed copy inside it."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull

from .errors import InvalidArgumentError
from .optimize import RupertCertificate, placed_points


def _default_outer():
    return {"fill": "#e4eaf5", "stroke": "#1d3557", "stroke-width": "1.5"}


def _default_inner():
    return {"fill": "#f4a261", "fill-opacity": "0.6", "stroke": "#9c3d10", "stroke-width": "1.5"}


@dataclass(frozen=True)
class RenderSpec:
    width: int = 480
    height: int = 480
    outer_style: dict = field(default_factory=_default_outer)
    inner_style: dict = field(default_factory=_default_inner)
    margin: float = 0.05  # fraction of the larger side of the outer bounding box

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise InvalidArgumentError("width and height must be positive")
        if not 0.0 <= self.margin <= 0.4:
            raise InvalidArgumentError("margin must lie in [0, 0.4]")


def _ccw_hull(points: np.ndarray) -> np.ndarray:
    # scipy lists 2-D hull vertices counter-clockwise
    return points[ConvexHull(points).vertices]


def _num(x: float) -> str:
    s = format(float(x), ".12g")
    return "0" if s == "-0" else s


def _path(points: np.ndarray, style: dict, label: str) -> str:
    # flip y so the picture has the usual mathematical orientation
    pts = [f"{_num(x)},{_num(-y)}" for x, y in points]
    d = "M" + " L".join(pts) + " Z"
    attrs = " ".join(f'{k}="{v}"' for k, v in sorted(style.items()))
    return f'  <path id="{label}" d="{d}" {attrs} vector-effect="non-scaling-stroke"/>'


def view_box(outer: np.ndarray, margin: float) -> tuple[float, float, float, float]:
    """``(min_x, min_y, width, height)`` in flipped-y drawing coordinates."""
    lo = outer.min(axis=0)
    hi = outer.max(axis=0)
    pad = margin * float(np.max(hi - lo))
    return (lo[0] - pad, -hi[1] - pad, hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad)


def render_svg(poly, cert: RupertCertificate, spec: RenderSpec = RenderSpec()) -> str:
    """SVG 1.1 document with the outer silhouette and the placed unit-scale copy."""
    inner, outer = placed_points(poly, cert)
    outer_hull = _ccw_hull(outer)
    inner_hull = _ccw_hull(inner)
    vb = " ".join(_num(x) for x in view_box(outer_hull, spec.margin))
    return "\n".join(
        [
            '<?xml version="1.0" encoding="UTF-8"?>',
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{spec.width}" height="{spec.height}" viewBox="{vb}">',
            f"  <title>{cert.solid}: rho = {cert.rho:.7f}</title>",
            _path(outer_hull, spec.outer_style, "outer"),
            _path(inner_hull, spec.inner_style, "inner"),
            "</svg>",
            "",
        ]
    )
