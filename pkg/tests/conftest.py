import sys
from pathlib import Path

import numpy as np
import pytest

root = Path(__file__).resolve().parents[1]
sys.path.append(str(root))

from frameq import tolerances  # noqa: E402
from frameq.frame_constructions import orthonormal_frame  # noqa: E402
from frameq.helpers import make_rng  # noqa: E402


@pytest.fixture
def onb4():
    return orthonormal_frame(4)


@pytest.fixture
def rng():
    return make_rng(1234)


@pytest.fixture
def restore_tolerances():
    saved = tolerances.get_tolerances()
    yield
    tolerances.apply_tolerances(saved)


def random_frame(seed, n=3, N=7):
    """A generic (non-tight) frame with its canonical dual."""
    from frameq.frame_core import canonical_dual
    from frameq.models import Frame

    vectors = make_rng(seed).standard_normal((N, n))
    return canonical_dual(Frame(synthesis=vectors, analysis=vectors))


@pytest.fixture
def generic_frame():
    return random_frame(7)


@pytest.fixture
def unit_vectors():
    def draw(count, n, seed=0):
        g = np.random.default_rng(seed).standard_normal((count, n))
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    return draw
