"""Normalized epipolar error and its geometric interpretations."""

__version__ = "0.1.0"

from .errors import normalized_epipolar_error, plane_distance_error, standard_epipolar_error
from .geom import (
    CoincidentCentersError,
    DegeneratePlaneError,
    GeometryError,
    ObservationPair,
    ParallelRaysError,
    RelativePose,
    UndefinedCoordinatesError,
    ZeroVectorError,
    acute_angle_between,
    angle_between,
    essential_from_pose,
    relative_pose_from_world,
)
from .interpretations import (
    ErrorBreakdown,
    dihedral_angle,
    dihedral_identity,
    distance_identity,
    full_breakdown,
    incidence_angles,
    l1_identity,
    parallax_angle,
    quadruple_product_check,
    ray_distance,
    tetrahedron_volume,
)
from .triangulation import (
    CorrectedPair,
    PerpendicularRayError,
    TriangulatedPoint,
    intersect_corrected,
    l1_correct_rays,
    l1_optimal_angle,
)
