"""L1-optimal angular correction of two rays and intersection of the result."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geom import (
    UNIT_TOL,
    DegeneratePlaneError,
    GeometryError,
    ObservationPair,
    ParallelRaysError,
    RelativePose,
    angle_between,
    unit,
)
from .interpretations import l1_angle_kernel

# corrections this close to pi/2 have no well-defined projection
PERPENDICULAR_MARGIN = 1e-9


class PerpendicularRayError(GeometryError):
    pass


@dataclass(frozen=True)
class CorrectedPair:
    f0: np.ndarray
    f1: np.ndarray
    theta0: float
    theta1: float
    corrected_ray_index: int

    @property
    def theta(self) -> float:
        return self.theta0 + self.theta1


@dataclass(frozen=True)
class TriangulatedPoint:
    """Point in the camera 1 frame with its signed depths along both corrected rays."""

    point: np.ndarray
    depth0: float
    depth1: float

    @property
    def negative_depth(self) -> bool:
        return self.depth0 < 0 or self.depth1 < 0


def _bounding_normals(pose: RelativePose, obs: ObservationPair):
    rf0 = pose.R @ obs.f0
    n0 = np.cross(rf0, pose.t_hat)
    n1 = np.cross(obs.f1, pose.t_hat)
    return rf0, n0, n1, np.linalg.norm(n0), np.linalg.norm(n1)


def l1_optimal_angle(pose: RelativePose, obs: ObservationPair) -> float:
    """Smallest total angle ``theta0 + theta1`` that makes the two rays coplanar with the baseline."""
    _, _, _, s0, s1 = _bounding_normals(pose, obs)
    if max(s0, s1) <= UNIT_TOL:
        raise DegeneratePlaneError("both rays are parallel to the baseline")
    return float(l1_angle_kernel(pose.t_hat, pose.R @ obs.f0, obs.f1))


def l1_correct_rays(pose: RelativePose, obs: ObservationPair) -> CorrectedPair:
    """Move one ray onto the other ray's bounding epipolar plane by orthogonal projection.

    The ray with the smaller plane-distance quotient is moved (ray 1 on ties);
    its rotation angle is the L1-optimal angle.
    """
    rf0, n0, n1, s0, s1 = _bounding_normals(pose, obs)
    if max(s0, s1) <= UNIT_TOL:
        raise DegeneratePlaneError("both rays are parallel to the baseline")
    e = abs(np.dot(pose.t_hat, np.cross(rf0, obs.f1)))
    q1 = e / s0 if s0 > UNIT_TOL else np.inf
    q0 = e / s1 if s1 > UNIT_TOL else np.inf

    if q1 <= q0 + 1e-15:
        n = n0 / s0
        f1c = obs.f1 - np.dot(obs.f1, n) * n
        if np.linalg.norm(f1c) < PERPENDICULAR_MARGIN:
            raise PerpendicularRayError("ray 1 is perpendicular to the target plane")
        f1c = unit(f1c)
        theta = angle_between(obs.f1, f1c)
        out = CorrectedPair(obs.f0, f1c, 0.0, theta, 1)
    else:
        n = n1 / s1
        rf0c = rf0 - np.dot(rf0, n) * n
        if np.linalg.norm(rf0c) < PERPENDICULAR_MARGIN:
            raise PerpendicularRayError("ray 0 is perpendicular to the target plane")
        rf0c = unit(rf0c)
        theta = angle_between(rf0, rf0c)
        out = CorrectedPair(unit(pose.R.T @ rf0c), obs.f1, theta, 0.0, 0)
    if theta >= np.pi / 2 - PERPENDICULAR_MARGIN:
        raise PerpendicularRayError("correction angle reaches pi/2")
    return out


def intersect_corrected(pose: RelativePose, corrected: CorrectedPair) -> TriangulatedPoint:
    """Least-squares depths on ``t + s0 R f0'`` and ``s1 f1'``; returns the midpoint."""
    m0 = pose.R @ corrected.f0
    m1 = corrected.f1
    if np.linalg.norm(np.cross(m0, m1)) <= UNIT_TOL:
        raise ParallelRaysError("corrected rays are parallel")
    A = np.column_stack([m0, -m1])
    (s0, s1), *_ = np.linalg.lstsq(A, -pose.t, rcond=None)
    p0 = pose.t + s0 * m0
    p1 = s1 * m1
    return TriangulatedPoint(0.5 * (p0 + p1), float(s0), float(s1))


def angular_cost(pose: RelativePose, obs: ObservationPair, points) -> np.ndarray:
    """Angles between the measured rays and the rays to ``points`` (camera 1 frame), summed.

    ``points`` may be a single point or an ``(n, 3)`` array.
    """
    X = np.asarray(points, dtype=float)
    rf0 = pose.R @ obs.f0

    def ang(u, v):
        return np.arctan2(np.linalg.norm(np.cross(u, v), axis=-1), np.sum(u * v, axis=-1))

    return ang(rf0, X - pose.t) + ang(obs.f1, X)
