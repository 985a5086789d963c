"""Vector, rotation and two-view pose primitives.

Vectors are plain ``numpy`` arrays of shape ``(3,)``. The small dataclasses
here only exist to validate their invariants once, at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNIT_TOL = 1e-12
ROTATION_TOL = 1e-10
MIN_NORM = 1e-300


class GeometryError(ValueError):
    """Base class for degenerate or invalid geometric input."""


class ZeroVectorError(GeometryError):
    pass


class InvalidRotationError(GeometryError):
    pass


class CoincidentCentersError(GeometryError):
    pass


class DegeneratePlaneError(GeometryError):
    """A bounding epipolar plane is undefined (ray parallel to the baseline)."""


class ParallelRaysError(GeometryError):
    pass


class UndefinedCoordinatesError(GeometryError):
    """A ray cannot be expressed with its last coordinate equal to 1."""


def vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise GeometryError(f"expected a 3-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise GeometryError("vector has non-finite components")
    return a


def unit(v) -> np.ndarray:
    """Return ``v / ||v||``, rejecting (near) zero vectors."""
    a = vec3(v)
    n = np.linalg.norm(a)
    if n < MIN_NORM:
        raise ZeroVectorError("cannot normalize a zero vector")
    return a / n


def rotation(m) -> np.ndarray:
    """Validate a 3x3 rotation matrix and return it as a float array."""
    r = np.asarray(m, dtype=float)
    if r.shape != (3, 3):
        raise InvalidRotationError(f"expected a 3x3 matrix, got shape {r.shape}")
    if np.max(np.abs(r.T @ r - np.eye(3))) > ROTATION_TOL:
        raise InvalidRotationError("matrix is not orthonormal")
    if abs(np.linalg.det(r) - 1.0) > ROTATION_TOL:
        raise InvalidRotationError("matrix has determinant != 1")
    return r


def skew(v) -> np.ndarray:
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


@dataclass(frozen=True)
class RelativePose:
    """Rigid transform ``x1 = R @ x0 + t`` from camera 0 to camera 1."""

    R: np.ndarray
    t: np.ndarray
    t_hat: np.ndarray = field(init=False, repr=False)
    t_norm: float = field(init=False, repr=False)

    def __post_init__(self):
        R = rotation(self.R)
        t = vec3(self.t)
        n = float(np.linalg.norm(t))
        if n < UNIT_TOL:
            raise CoincidentCentersError("translation has zero length")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "t_hat", t / n)
        object.__setattr__(self, "t_norm", n)

    def inverse(self) -> RelativePose:
        return RelativePose(self.R.T, -self.R.T @ self.t)

    def scaled(self, s: float) -> RelativePose:
        return RelativePose(self.R, s * self.t)


@dataclass(frozen=True)
class ObservationPair:
    """Unit backprojected rays, ``f0`` in camera 0 and ``f1`` in camera 1."""

    f0: np.ndarray
    f1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f0", unit(self.f0))
        object.__setattr__(self, "f1", unit(self.f1))

    @property
    def f0_norm(self) -> np.ndarray:
        return z_normalized(self.f0)

    @property
    def f1_norm(self) -> np.ndarray:
        return z_normalized(self.f1)

    def swapped(self) -> ObservationPair:
        return ObservationPair(self.f1, self.f0)


def z_normalized(f: np.ndarray) -> np.ndarray:
    """Rescale a ray so that its third component is 1."""
    if f[2] <= UNIT_TOL:
        raise UndefinedCoordinatesError(
            "ray does not point in front of the principal plane"
        )
    return f / f[2]


def relative_pose_from_world(c0, R0, c1, R1) -> RelativePose:
    """Relative pose of two cameras given world centers and world-to-camera rotations.

    A world point ``X`` has camera coordinates ``x_i = R_i @ (X - c_i)``.
    """
    c0, c1 = vec3(c0), vec3(c1)
    R0, R1 = rotation(R0), rotation(R1)
    if np.linalg.norm(c0 - c1) < UNIT_TOL:
        raise CoincidentCentersError("camera centers coincide")
    return RelativePose(R1 @ R0.T, R1 @ (c0 - c1))


def essential_from_pose(pose: RelativePose) -> np.ndarray:
    # E = [t_hat]_x R
    return skew(pose.t_hat) @ pose.R


def angle_between(u, v) -> float:
    """Angle in ``[0, pi]``; atan2 form stays accurate near 0 and pi."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if np.linalg.norm(u) < MIN_NORM or np.linalg.norm(v) < MIN_NORM:
        raise ZeroVectorError("angle with a zero vector is undefined")
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v)))


def acute_angle_between(u, v) -> float:
    """Angle in ``[0, pi/2]`` between the lines spanned by ``u`` and ``v``."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if np.linalg.norm(u) < MIN_NORM or np.linalg.norm(v) < MIN_NORM:
        raise ZeroVectorError("angle with a zero vector is undefined")
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), abs(np.dot(u, v))))


def random_rotations(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` rotation matrices drawn uniformly from SO(3), shape ``(n, 3, 3)``."""
    # unit quaternions from a normalized 4D Gaussian are uniform on S^3
    q = rng.standard_normal((n, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    w, x, y, z = q.T
    return np.stack(
        [
            np.stack([1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)], -1),
            np.stack([2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)], -1),
            np.stack([2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)], -1),
        ],
        axis=1,
    )


def random_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
