"""Search for and verify Rupert passages of convex polyhedra."""

__version__ = "0.1.0"

from .errors import (
    DegeneracyError,
    DegenerateProjectionError,
    FlatSolidError,
    InvalidArgumentError,
    LookupFailure,
    NormalizationError,
    ObjectiveError,
    ParseError,
    RupertError,
)
from .geom3 import (
    PlanarTransform,
    Polygon2,
    Polyhedron3,
    ProjectionAngles,
    convex_hull_2d,
    halfplanes_of,
    project,
    projection_matrix,
    silhouette,
    sphere_point,
)
from .optimize import (
    AngleQuad,
    RupertCertificate,
    SearchConfig,
    VerificationReport,
    evaluate_f,
    evaluate_placement,
    grid_search,
    grid_starts,
    is_rupert,
    nelder_mead,
    verify_certificate,
)
from .placement import HalfspaceSet4, PlacementResult, build_constraints, solve_placement
from .solids import Catalogue, SolidRecord, canonicalize, full_catalogue, parse_off

__all__ = [name for name in dir() if not name.startswith("_")]
