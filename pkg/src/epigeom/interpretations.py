"""Geometric quantities that reproduce the normalized epipolar error exactly.

Every kernel here works on arrays of shape ``(..., 3)`` so the same code
serves single observations and the vectorized identity suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import normalized_epipolar_error
from .geom import (
    UNIT_TOL,
    DegeneratePlaneError,
    GeometryError,
    ObservationPair,
    ParallelRaysError,
    RelativePose,
)

IDENTITIES = ("volume", "distance", "dihedral", "l1_angle", "quadruple_product")


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def _norm(a):
    return np.linalg.norm(a, axis=-1)


def _acute(u, v):
    return np.arctan2(_norm(np.cross(u, v)), np.abs(_dot(u, v)))


def triple_product(t_hat, rf0, f1):
    return np.abs(_dot(t_hat, np.cross(rf0, f1)))


def volume_kernel(t_hat, rf0, f1):
    return triple_product(t_hat, rf0, f1) / 6.0


def distance_kernel(t, rf0, f1):
    m = np.cross(rf0, f1)
    return np.abs(_dot(t, m)) / _norm(m)


def dihedral_kernel(t_hat, rf0, f1):
    n0 = np.cross(rf0, t_hat)
    n1 = np.cross(f1, t_hat)
    n0 = n0 / _norm(n0)[..., None]
    n1 = n1 / _norm(n1)[..., None]
    return np.arcsin(np.clip(_norm(np.cross(n0, n1)), -1.0, 1.0))


def quadruple_kernel(t_hat, rf0, f1):
    return _norm(np.cross(np.cross(rf0, t_hat), np.cross(f1, t_hat)))


def l1_angle_kernel(t_hat, rf0, f1):
    """L1-optimal angular correction, ``asin`` of the smaller plane-distance quotient.

    Evaluated as ``atan2(sin, cos)`` of the ray moved onto the other ray's
    bounding plane; ``asin`` loses half the digits near ``pi/2``.
    """
    n0 = np.cross(rf0, t_hat)
    n1 = np.cross(f1, t_hat)
    s0, s1 = _norm(n0), _norm(n1)
    e = triple_product(t_hat, rf0, f1)
    # quotient for moving ray 1 onto plane 0, and ray 0 onto plane 1
    with np.errstate(divide="ignore", invalid="ignore"):
        q1 = np.where(s0 > UNIT_TOL, e / s0, np.inf)
        q0 = np.where(s1 > UNIT_TOL, e / s1, np.inf)
        use1 = q1 <= q0 + 1e-15
        n = np.where(use1[..., None], n0, n1) / np.where(use1, s0, s1)[..., None]
        f = np.where(use1[..., None], f1, rf0)
        along = np.abs(_dot(f, n))
        ortho = _norm(f - _dot(f, n)[..., None] * n)
        return np.arctan2(along, ortho)


def identity_estimates(t, rf0, f1):
    """Each interpretation's reconstruction of the normalized error, plus the error itself.

    Inputs broadcast over leading axes. Degenerate entries come out as ``nan``.
    """
    t_norm = _norm(t)
    t_hat = t / t_norm[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = _acute(rf0, f1)
        phi0 = _acute(rf0, t_hat)
        phi1 = _acute(f1, t_hat)
        alpha = dihedral_kernel(t_hat, rf0, f1)
        theta = l1_angle_kernel(t_hat, rf0, f1)
        return {
            "e_hat": np.abs(_dot(f1, np.cross(t_hat, rf0))),
            "volume": 6.0 * volume_kernel(t_hat, rf0, f1),
            "distance": np.sin(beta) * distance_kernel(t, rf0, f1) / t_norm,
            "dihedral": np.sin(phi0) * np.sin(phi1) * np.sin(alpha),
            "l1_angle": np.sin(np.maximum(phi0, phi1)) * np.sin(theta),
            "quadruple_product": quadruple_kernel(t_hat, rf0, f1),
        }


def _parts(pose: RelativePose, obs: ObservationPair):
    return pose.t_hat, pose.R @ obs.f0, obs.f1


def tetrahedron_volume(pose: RelativePose, obs: ObservationPair) -> float:
    """Volume of the tetrahedron with edges ``t_hat``, ``R f0``, ``f1`` at the camera 1 center."""
    return float(volume_kernel(*_parts(pose, obs)))


def ray_distance(pose: RelativePose, obs: ObservationPair) -> float:
    """Distance between the lines ``t + s0 R f0`` and ``s1 f1`` (lines, not half-rays)."""
    rf0 = pose.R @ obs.f0
    if np.linalg.norm(np.cross(rf0, obs.f1)) <= UNIT_TOL:
        raise ParallelRaysError("rays are parallel")
    return float(distance_kernel(pose.t, rf0, obs.f1))


def parallax_angle(pose: RelativePose, obs: ObservationPair) -> float:
    return float(_acute(pose.R @ obs.f0, obs.f1))


def distance_identity(pose: RelativePose, obs: ObservationPair) -> float:
    d = ray_distance(pose, obs)
    return float(np.sin(parallax_angle(pose, obs)) * d / pose.t_norm)


def incidence_angles(pose: RelativePose, obs: ObservationPair) -> tuple[float, float]:
    """Acute angles of ``R f0`` and ``f1`` to the baseline direction."""
    t_hat, rf0, f1 = _parts(pose, obs)
    return float(_acute(rf0, t_hat)), float(_acute(f1, t_hat))


def _check_planes(t_hat, rf0, f1):
    if _norm(np.cross(rf0, t_hat)) <= UNIT_TOL:
        raise DegeneratePlaneError("ray 0 is parallel to the baseline")
    if _norm(np.cross(f1, t_hat)) <= UNIT_TOL:
        raise DegeneratePlaneError("ray 1 is parallel to the baseline")


def dihedral_angle(pose: RelativePose, obs: ObservationPair) -> float:
    """Angle in ``[0, pi/2]`` between the two bounding epipolar planes."""
    parts = _parts(pose, obs)
    _check_planes(*parts)
    return float(dihedral_kernel(*parts))


def dihedral_identity(pose: RelativePose, obs: ObservationPair) -> float:
    alpha = dihedral_angle(pose, obs)
    phi0, phi1 = incidence_angles(pose, obs)
    return float(np.sin(phi0) * np.sin(phi1) * np.sin(alpha))


def quadruple_product_check(pose: RelativePose, obs: ObservationPair) -> float:
    """Norm of ``(R f0 x t_hat) x (f1 x t_hat)``, which collapses to the normalized error."""
    return float(quadruple_kernel(*_parts(pose, obs)))


def l1_identity(pose: RelativePose, obs: ObservationPair, theta_l1: float) -> float:
    """Estimate of the normalized error from the L1-optimal angle."""
    phi0, phi1 = incidence_angles(pose, obs)
    return float(np.sin(max(phi0, phi1)) * np.sin(theta_l1))


@dataclass
class ErrorBreakdown:
    """All interpretation quantities for one observation.

    Undefined quantities are ``None`` and the reason is kept in ``degenerate``.
    """

    e_hat: float
    volume: float
    parallax: float
    phi0: float
    phi1: float
    quadruple: float
    ray_distance: float | None = None
    dihedral: float | None = None
    theta_l1: float | None = None
    t_norm: float = 1.0
    degenerate: dict[str, str] = field(default_factory=dict)

    def estimates(self) -> dict[str, float | None]:
        """Each identity's estimate of ``e_hat``; ``None`` where undefined."""
        if self.ray_distance is not None:
            distance = np.sin(self.parallax) * self.ray_distance / self.t_norm
        elif self.degenerate.get("ray_distance") == "parallel":
            distance = 0.0
        else:
            distance = None
        dihedral = None
        if self.dihedral is not None:
            dihedral = np.sin(self.phi0) * np.sin(self.phi1) * np.sin(self.dihedral)
        l1 = None
        if self.theta_l1 is not None:
            l1 = np.sin(max(self.phi0, self.phi1)) * np.sin(self.theta_l1)
        out = {
            "volume": 6.0 * self.volume,
            "distance": distance,
            "dihedral": dihedral,
            "l1_angle": l1,
            "quadruple_product": self.quadruple,
        }
        return {k: None if v is None else float(v) for k, v in out.items()}


def full_breakdown(pose: RelativePose, obs: ObservationPair) -> ErrorBreakdown:
    """Compute every interpretation; degeneracies are recorded, never raised."""
    from .triangulation import l1_optimal_angle

    phi0, phi1 = incidence_angles(pose, obs)
    b = ErrorBreakdown(
        e_hat=normalized_epipolar_error(pose, obs),
        volume=tetrahedron_volume(pose, obs),
        parallax=parallax_angle(pose, obs),
        phi0=phi0,
        phi1=phi1,
        quadruple=quadruple_product_check(pose, obs),
        t_norm=pose.t_norm,
    )
    try:
        b.ray_distance = ray_distance(pose, obs)
    except ParallelRaysError:
        b.degenerate["ray_distance"] = "parallel"
    try:
        b.dihedral = dihedral_angle(pose, obs)
    except DegeneratePlaneError as exc:
        b.degenerate["dihedral"] = str(exc)
    try:
        b.theta_l1 = l1_optimal_angle(pose, obs)
    except GeometryError as exc:
        b.degenerate["theta_l1"] = str(exc)
    return b
