import numpy as np
import pytest
from hypothesis import strategies as st

from epigeom.geom import ObservationPair, RelativePose, random_rotations, random_unit_vectors

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def ortho_triple():
    """t_hat, R f0, f1 mutually orthogonal; every interpretation is at its maximum."""
    return RelativePose(np.eye(3), [1.0, 0, 0]), ObservationPair([0, 0, 1.0], [0, 1.0, 0])


@pytest.fixture
def coplanar():
    return RelativePose(np.eye(3), [1.0, 0, 0]), ObservationPair([0, 0, 1.0], unit_np([1.0, 0, 1]))


def unit_np(v):
    v = np.asarray(v, float)
    return v / np.linalg.norm(v)


def random_case(rng, t_scale=True):
    R = random_rotations(rng, 1)[0]
    t = random_unit_vectors(rng, 1)[0]
    if t_scale:
        t = t * 10.0 ** rng.uniform(-1, 1)
    f0, f1 = random_unit_vectors(rng, 2)
    return RelativePose(R, t), ObservationPair(f0, f1)


def random_cases(rng, n, **kw):
    for _ in range(n):
        yield random_case(rng, **kw)


# independent oracles -------------------------------------------------------


def closest_point_distance(p0, m0, p1, m1):
    """Distance between lines p0 + s0 m0 and p1 + s1 m1 from the 2x2 normal equations."""
    a, b, c = m0 @ m0, m0 @ m1, m1 @ m1
    w = p0 - p1
    d, e = m0 @ w, m1 @ w
    den = a * c - b * b
    s0 = (b * e - c * d) / den
    s1 = (a * e - b * d) / den
    return np.linalg.norm((p0 + s0 * m0) - (p1 + s1 * m1))


def dense_plane_search(pose, obs, samples=1_000_000):
    """Brute-force min of theta0 + theta1 over every epipolar plane through the baseline.

    For a fixed plane the cheapest correction of a ray is its angle to that
    plane, ``asin(|f . n|)``; the plane normals sweep a half circle around ``t``.
    """
    t = pose.t_hat
    a = np.cross(t, [1.0, 0, 0] if abs(t[0]) < 0.9 else [0, 1.0, 0])
    a /= np.linalg.norm(a)
    b = np.cross(t, a)
    psi = np.linspace(0.0, np.pi, samples, endpoint=False)
    n = np.cos(psi)[:, None] * a + np.sin(psi)[:, None] * b
    cost = np.arcsin(np.clip(np.abs(n @ (pose.R @ obs.f0)), 0, 1)) + np.arcsin(np.clip(np.abs(n @ obs.f1), 0, 1))
    return cost.min()


# hypothesis strategies ------------------------------------------------------

_coord = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def unit_vectors(draw):
    v = np.array([draw(_coord) for _ in range(3)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return v / n


@st.composite
def rotations(draw):
    q = np.array([draw(_coord) for _ in range(4)])
    if np.linalg.norm(q) < 1e-3:
        q = np.array([1.0, 0, 0, 0])
    w, x, y, z = q / np.linalg.norm(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


@st.composite
def cases(draw):
    R = draw(rotations())
    t = draw(unit_vectors()) * draw(st.floats(0.1, 10.0))
    return RelativePose(R, t), ObservationPair(draw(unit_vectors()), draw(unit_vectors()))
