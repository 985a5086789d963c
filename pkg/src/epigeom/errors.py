"""Epipolar error measures for a calibrated two-view observation."""

from __future__ import annotations

import numpy as np

from .geom import UNIT_TOL, DegeneratePlaneError, ObservationPair, RelativePose


def normalized_epipolar_error(pose: RelativePose, obs: ObservationPair) -> float:
    """Absolute triple product of the unit vectors ``t_hat``, ``R f0`` and ``f1``.

    Lies in ``[0, 1]`` and vanishes exactly when the three vectors are coplanar.
    """
    return float(abs(np.dot(obs.f1, np.cross(pose.t_hat, pose.R @ obs.f0))))


def standard_epipolar_error(pose: RelativePose, obs: ObservationPair) -> float:
    """Same triple product, but with rays scaled to unit depth instead of unit length.

    Raises ``UndefinedCoordinatesError`` for rays at or behind the principal plane.
    """
    f0, f1 = obs.f0_norm, obs.f1_norm
    return float(abs(np.dot(f1, np.cross(pose.t_hat, pose.R @ f0))))


def plane_distance_error(pose: RelativePose, obs: ObservationPair) -> float:
    """Distance from the tip of ``f1`` to the plane spanned by ``t_hat`` and ``R f0``."""
    n = np.cross(pose.t_hat, pose.R @ obs.f0)
    s = np.linalg.norm(n)
    if s <= UNIT_TOL:
        raise DegeneratePlaneError("ray 0 is parallel to the baseline")
    return float(abs(np.dot(obs.f1, n)) / s)
