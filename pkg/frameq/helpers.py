import hashlib
import json
import logging
import os
from typing import Any, Dict, Optional

import numpy as np

from . import tolerances
from .errors import FrameInputError

logger = logging.getLogger(__name__)

SEED_ENV = "FRAMEQ_SEED"
_MAX_REJECTION_ROUNDS = 1000


def default_seed(fallback: int = 0) -> int:
    """Return the seed from ``FRAMEQ_SEED`` or *fallback* when unset."""
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return fallback
    try:
        return int(raw)
    except ValueError as exc:
        raise FrameInputError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """Build a generator from the configured bit generator and *seed*.

    The bit generator is looked up by name on :mod:`numpy.random` so config
    files can pin it (``"PCG64"``, ``"Philox"``, ...).
    """
    bit_generator = getattr(np.random, tolerances.RNG_NAME, None)
    if bit_generator is None:
        raise FrameInputError(f"Unknown bit generator {tolerances.RNG_NAME!r}")
    return np.random.Generator(bit_generator(seed))


def lp_norms(values: np.ndarray, p: float) -> np.ndarray:
    """Vector p-norms along the last axis."""
    return np.linalg.norm(values, ord=p, axis=-1)


def sample_sphere(rng: np.random.Generator, count: int, n: int, p: float = 2.0) -> np.ndarray:
    """Return *count* points on the unit sphere of the l_p norm in R^n.

    Gaussian directions normalised in the target norm; uniform on the sphere
    for p = 2 only.
    """
    g = rng.standard_normal((count, n))
    norms = lp_norms(g, p)
    # a zero draw has probability zero; guard anyway to avoid nan rows
    norms[norms == 0.0] = 1.0
    return g / norms[:, None]


def sample_ball(rng: np.random.Generator, count: int, n: int, p: float = 2.0) -> np.ndarray:
    """Return *count* uniform samples of the unit l_p ball in R^n.

    Euclidean balls use normalised Gaussians scaled by ``U**(1/n)``; the cube
    is sampled directly; every other ball by rejection from ``[-1, 1]^n``.
    """
    if count <= 0:
        return np.zeros((0, n))
    if p == 2.0:
        directions = sample_sphere(rng, count, n, 2.0)
        radii = rng.random(count) ** (1.0 / n)
        return directions * radii[:, None]
    if np.isinf(p):
        return rng.uniform(-1.0, 1.0, size=(count, n))

    accepted = []
    total = 0
    for _ in range(_MAX_REJECTION_ROUNDS):
        candidates = rng.uniform(-1.0, 1.0, size=(max(count, 64), n))
        inside = candidates[lp_norms(candidates, p) <= 1.0]
        accepted.append(inside)
        total += len(inside)
        if total >= count:
            return np.concatenate(accepted)[:count]
    raise FrameInputError(
        f"Rejection sampling of the l_{p:g} ball in dimension {n} accepted only {total} points"
    )


def canonical_json(payload: Any) -> str:
    """Serialise *payload* with sorted keys and no insignificant whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_json_default)


def manifest_hash(payload: Dict[str, Any]) -> str:
    """SHA-256 hex digest of the canonical JSON form of *payload*."""
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")
