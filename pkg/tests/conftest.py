import numpy as np
import pytest

from tangles.core import TangentChain, TangleCurve, angles_to_chain

CIRCLE_VECTORS = np.array(
    [
        [0.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ]
)


@pytest.fixture
def circle_chain():
    return TangentChain(CIRCLE_VECTORS.copy())


@pytest.fixture
def circle_curve(circle_chain):
    return TangleCurve(circle_chain)


@pytest.fixture
def doubled_circle_chain():
    V = np.vstack([CIRCLE_VECTORS[:4], CIRCLE_VECTORS[:4], CIRCLE_VECTORS[:1]])
    return TangentChain(V)


def random_seed_pair(rng):
    """Random orthonormal (V_0, V_1) via QR of a Gaussian matrix."""
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    return q[:, 0].copy(), q[:, 1].copy()


def random_chain(rng, n):
    """Random valid n-link chain from random joint angles and seeds."""
    v0, v1 = random_seed_pair(rng)
    angles = rng.uniform(-np.pi, np.pi, size=n - 1)
    return angles_to_chain(angles, v0, v1)
