"""Synthetic two-camera simulation that checks the L1 identity trial by trial.

Each trial places two cameras at ``+-c0`` with ``||c0|| = 0.5`` so that the
baseline has unit length, puts a point on the world z axis, orients both
cameras at random until the point is visible, adds pixel noise, and then
compares the normalized epipolar error against its L1-angle reconstruction.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import normalized_epipolar_error
from .geom import (
    GeometryError,
    ObservationPair,
    RelativePose,
    random_rotations,
    random_unit_vectors,
    relative_pose_from_world,
    unit,
)
from .interpretations import IDENTITIES, identity_estimates, l1_identity
from .triangulation import (
    TriangulatedPoint,
    angular_cost,
    intersect_corrected,
    l1_correct_rays,
    l1_optimal_angle,
)


class VisibilityTimeoutError(RuntimeError):
    pass


class BehindCameraError(GeometryError):
    pass


@dataclass(frozen=True)
class SimConfig:
    image_width: int = 640
    image_height: int = 480
    focal: float = 525.0
    sigma_px: float = 10.0
    depth_min: float = 1.0
    depth_max: float = 10.0
    half_baseline: float = 0.5
    trials: int = 10_000
    seed: int = 0
    perturb_exponents: tuple[int, ...] = (-24, -21, -18, -15, -12, -9, -6)
    perturbs_per_magnitude: int = 100
    max_visibility_attempts: int = 10_000

    def __post_init__(self):
        if not 0 < self.depth_min < self.depth_max:
            raise ValueError("need 0 < depth_min < depth_max")
        if self.sigma_px < 0:
            raise ValueError("sigma_px must be non-negative")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "perturb_exponents", tuple(int(m) for m in self.perturb_exponents))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["perturb_exponents"] = list(self.perturb_exponents)
        return d


@dataclass(frozen=True)
class Camera:
    """Pinhole camera; ``R`` maps world to camera coordinates, ``x = R (X - center)``."""

    center: np.ndarray
    R: np.ndarray
    focal: float = 525.0
    width: int = 640
    height: int = 480

    @classmethod
    def from_config(cls, center, R, config: SimConfig) -> Camera:
        return cls(np.asarray(center, float), np.asarray(R, float),
                   config.focal, config.image_width, config.image_height)


@dataclass(frozen=True)
class Scene:
    cam0: Camera
    cam1: Camera
    point: np.ndarray

    @property
    def pose(self) -> RelativePose:
        return relative_pose_from_world(self.cam0.center, self.cam0.R, self.cam1.center, self.cam1.R)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream per trial, so results do not depend on scheduling."""
    return np.random.default_rng([seed, index])


def project(camera: Camera, point) -> np.ndarray:
    x = camera.R @ (np.asarray(point, float) - camera.center)
    if x[2] <= 1e-9:
        raise BehindCameraError("point is behind the camera")
    return np.array([camera.focal * x[0] / x[2] + camera.width / 2,
                     camera.focal * x[1] / x[2] + camera.height / 2])


def backproject(camera: Camera, pixel) -> np.ndarray:
    u, v = pixel
    return unit([(u - camera.width / 2) / camera.focal, (v - camera.height / 2) / camera.focal, 1.0])


def perturb_pixels(rng: np.random.Generator, pixel, sigma_px: float) -> np.ndarray:
    if sigma_px < 0:
        raise ValueError("sigma_px must be non-negative")
    return np.asarray(pixel, float) + rng.normal(0.0, sigma_px, size=2)


def _visible(Rs, center, point, config: SimConfig):
    # batched pinhole visibility for rotations Rs of shape (n, 3, 3)
    x = Rs @ (point - center)
    z = x[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = config.focal * x[:, 0] / z + config.image_width / 2
        v = config.focal * x[:, 1] / z + config.image_height / 2
    return (z > 1e-9) & (u >= 0) & (u <= config.image_width) & (v >= 0) & (v <= config.image_height)


def sample_scene(rng: np.random.Generator, config: SimConfig, batch: int = 256) -> Scene:
    """Random cameras at ``+-c0`` with random orientations that both see the point."""
    c0 = config.half_baseline * random_unit_vectors(rng, 1)[0]
    c1 = -c0
    point = np.array([0.0, 0.0, rng.uniform(config.depth_min, config.depth_max)])
    attempts = 0
    while attempts < config.max_visibility_attempts:
        n = min(batch, config.max_visibility_attempts - attempts)
        R0s = random_rotations(rng, n)
        R1s = random_rotations(rng, n)
        ok = _visible(R0s, c0, point, config) & _visible(R1s, c1, point, config)
        if ok.any():
            i = int(np.argmax(ok))
            return Scene(Camera.from_config(c0, R0s[i], config),
                         Camera.from_config(c1, R1s[i], config), point)
        attempts += n
    raise VisibilityTimeoutError(f"point not visible after {attempts} orientation draws")


@dataclass
class TrialRecord:
    index: int
    e_hat_before: float = float("nan")
    e_hat_after: float = float("nan")
    e_hat_est: float = float("nan")
    theta_l1: float = float("nan")
    abs_diff: float = float("nan")
    rel_diff: float = float("nan")
    optimality: dict[int, float] = field(default_factory=dict)
    identity_errors: dict[str, float] = field(default_factory=dict)
    negative_depth: bool = False
    degenerate: str | None = None


def perturbation_optimality_check(
    pose: RelativePose,
    tri_point: TriangulatedPoint,
    measured: ObservationPair,
    theta_l1: float,
    config: SimConfig,
    rng: np.random.Generator,
) -> dict[int, float]:
    """Fraction of random point perturbations of size ``10**m`` that do not beat ``theta_l1``."""
    out = {}
    for m in config.perturb_exponents:
        k = config.perturbs_per_magnitude
        offsets = random_unit_vectors(rng, k) * 10.0**m
        cost = angular_cost(pose, measured, tri_point.point + offsets)
        out[m] = float(np.count_nonzero(cost >= theta_l1)) / k
    return out


def run_trial(rng: np.random.Generator, config: SimConfig, index: int = 0) -> TrialRecord:
    rec = TrialRecord(index)
    try:
        scene = sample_scene(rng, config)
    except VisibilityTimeoutError:
        rec.degenerate = "visibility_timeout"
        return rec
    pose = scene.pose
    px0 = perturb_pixels(rng, project(scene.cam0, scene.point), config.sigma_px)
    px1 = perturb_pixels(rng, project(scene.cam1, scene.point), config.sigma_px)
    obs = ObservationPair(backproject(scene.cam0, px0), backproject(scene.cam1, px1))

    e_hat = normalized_epipolar_error(pose, obs)
    rec.e_hat_before = e_hat
    est = identity_estimates(pose.t, pose.R @ obs.f0, obs.f1)
    rec.identity_errors = {k: float(abs(est[k] - e_hat)) for k in IDENTITIES}
    try:
        corrected = l1_correct_rays(pose, obs)
        theta = l1_optimal_angle(pose, obs)
        tri = intersect_corrected(pose, corrected)
    except GeometryError as exc:
        rec.degenerate = type(exc).__name__
        return rec
    rec.e_hat_after = normalized_epipolar_error(pose, ObservationPair(corrected.f0, corrected.f1))
    rec.theta_l1 = theta
    rec.e_hat_est = l1_identity(pose, obs, theta)
    rec.abs_diff = abs(rec.e_hat_est - e_hat)
    rec.rel_diff = rec.abs_diff / max(e_hat, np.finfo(float).tiny)
    if tri.negative_depth:
        # the corrected rays meet behind a camera; point-based angular cost is not comparable
        rec.negative_depth = True
        return rec
    rec.optimality = perturbation_optimality_check(pose, tri, obs, theta, config, rng)
    return rec


def _run_one(args):
    config, index = args
    return run_trial(trial_rng(config.seed, index), config, index)


def run_trials(config: SimConfig, workers: int = 1) -> list[TrialRecord]:
    """All trials in index order; identical output for any ``workers``."""
    jobs = [(config, i) for i in range(config.trials)]
    if workers <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(workers) as ex:
        return list(ex.map(_run_one, jobs, chunksize=max(1, len(jobs) // (8 * workers))))


# ---------------------------------------------------------------------------
# random configurations for the identity suite


IDENTITY_CHUNK = 10_000


def random_configurations(rng: np.random.Generator, n: int, min_angle: float = 1e-3):
    """``n`` random ``(t, R f0, f1)`` triples with all of phi0, phi1, beta >= ``min_angle``.

    ``||t||`` is log-uniform on ``[0.1, 10]`` so the distance identity sees
    baselines other than one.
    """
    ts, rf0s, f1s = [], [], []
    have = 0
    while have < n:
        k = 2 * (n - have) + 16
        R = random_rotations(rng, k)
        f0 = random_unit_vectors(rng, k)
        f1 = random_unit_vectors(rng, k)
        t = random_unit_vectors(rng, k) * 10.0 ** rng.uniform(-1, 1, size=(k, 1))
        rf0 = np.einsum("nij,nj->ni", R, f0)
        t_hat = t / np.linalg.norm(t, axis=1, keepdims=True)

        def acute(u, v):
            return np.arctan2(np.linalg.norm(np.cross(u, v), axis=1), np.abs(np.sum(u * v, axis=1)))

        ok = (acute(rf0, t_hat) >= min_angle) & (acute(f1, t_hat) >= min_angle) & (acute(rf0, f1) >= min_angle)
        ts.append(t[ok])
        rf0s.append(rf0[ok])
        f1s.append(f1[ok])
        have += int(ok.sum())
    return np.concatenate(ts)[:n], np.concatenate(rf0s)[:n], np.concatenate(f1s)[:n]


def _identity_chunk(args):
    seed, chunk, n = args
    t, rf0, f1 = random_configurations(np.random.default_rng([seed, chunk]), n)
    est = identity_estimates(t, rf0, f1)
    return {k: np.abs(est[k] - est["e_hat"]) for k in IDENTITIES}


def identity_suite(trials: int, seed: int, workers: int = 1) -> dict[str, np.ndarray]:
    """Absolute deviation of each identity from the normalized error, per configuration."""
    jobs = []
    for chunk, start in enumerate(range(0, trials, IDENTITY_CHUNK)):
        jobs.append((seed, chunk, min(IDENTITY_CHUNK, trials - start)))
    if workers <= 1:
        parts = [_identity_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_identity_chunk, jobs))
    return {k: np.concatenate([p[k] for p in parts]) for k in IDENTITIES}
