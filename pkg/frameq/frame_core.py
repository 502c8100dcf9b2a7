"""Frame operator, frame bounds, canonical duals and associated Z-norms.

Frames are stored row-wise (see :class:`frameq.models.Frame`), so analysis
is ``A @ x`` and synthesis is ``a @ X``.  Every randomized routine takes an
explicit seed and is deterministic for that seed.
"""

from __future__ import annotations

import json
import logging
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from scipy import linalg

from . import tolerances
from .errors import ContractViolation, FrameInputError, NotAFrameError
from .helpers import lp_norms, make_rng, sample_sphere
from .models import Frame, HilbertFrameBounds, NormSpec

logger = logging.getLogger(__name__)

ZVariant = Literal["interval_max", "sign_max"]

# Upper limit on floats materialised at once by windowed partial sums.
_CHUNK_FLOATS = 2_000_000


class ZNormReport(BaseModel):
    value: float
    variant: str
    sampled: bool
    patterns: int


def as_vector(x: object, dim: Optional[int] = None, name: str = "x") -> np.ndarray:
    """Coerce *x* to a finite 1-D float array, optionally of length *dim*."""
    vector = np.asarray(x, dtype=float)
    if vector.ndim != 1:
        raise FrameInputError(f"{name} must be a vector, got shape {vector.shape}")
    if dim is not None and vector.shape[0] != dim:
        raise FrameInputError(f"{name} has length {vector.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(vector)):
        raise FrameInputError(f"{name} has non-finite entries")
    return vector


def evaluate_norm(spec: NormSpec, v: object) -> float | np.ndarray:
    """Evaluate *spec* on *v*.

    ``lp`` norms are batched along the last axis.  Z-norms take a single
    coefficient vector whose length matches the referenced atoms.
    """
    values = np.asarray(v, dtype=float)
    if spec.kind == "lp":
        result = lp_norms(values, spec.p)
        return float(result) if np.ndim(result) == 0 else result
    assert spec.atoms is not None and spec.ambient is not None
    coeffs = as_vector(values, spec.atoms.shape[0], name="coefficients")
    if spec.kind == "z_interval_max":
        return _interval_max_norm(spec.atoms, spec.ambient.p, coeffs)
    value, _, _ = _sign_max_norm(spec.atoms, spec.ambient.p, coeffs, seed=0)
    return value


def analysis(frame: Frame, x: object) -> np.ndarray:
    """Return the coefficients ``(f_i(x))_{i<=N}``."""
    return frame.analysis @ as_vector(x, frame.n)


def synthesis(frame: Frame, a: object) -> np.ndarray:
    """Return ``sum_i a_i x_i``."""
    return as_vector(a, frame.N, name="coefficients") @ frame.synthesis


def frame_operator(frame: Frame) -> np.ndarray:
    """Return ``S = sum_i x_i x_i^T`` (symmetric positive semidefinite)."""
    X = frame.synthesis
    S = X.T @ X
    return (S + S.T) / 2.0


def frame_bounds(frame: Frame) -> HilbertFrameBounds:
    """Optimal Hilbert frame bounds from the spectrum of the frame operator.

    A family that does not span gets ``a = 0`` and ``is_frame = False``
    instead of an exception.
    """
    eigenvalues = linalg.eigvalsh(frame_operator(frame))
    b = max(float(eigenvalues[-1]), 0.0)
    a = float(eigenvalues[0])
    rank_tol = frame.n * np.finfo(float).eps * max(b, 1.0) * 10.0
    if a <= rank_tol:
        logger.info("Synthesis family does not span R^%d (smallest eigenvalue %.3e)", frame.n, a)
        return HilbertFrameBounds(a=0.0, b=b, is_frame=False)
    return HilbertFrameBounds(a=a, b=b, is_frame=True)


def canonical_dual(frame: Frame) -> Frame:
    """Return the frame with the same synthesis vectors and analysis ``S^{-1} x_j``."""
    bounds = frame_bounds(frame)
    if not bounds.is_frame:
        raise NotAFrameError("frame operator is singular; no canonical dual exists")
    S = frame_operator(frame)
    dual = linalg.solve(S, frame.synthesis.T, assume_a="pos").T
    return Frame(
        synthesis=frame.synthesis,
        analysis=dual,
        ambient_norm=frame.ambient_norm,
        construction=frame.construction,
    )


def reconstruction_error(frame: Frame, samples: int = 100, seed: int = 0) -> float:
    """Largest relative error of ``x -> sum f_i(x) x_i`` over random *x*."""
    rng = make_rng(seed)
    xs = rng.standard_normal((samples, frame.n))
    rebuilt = (xs @ frame.analysis.T) @ frame.synthesis
    p = frame.ambient_norm.p
    errors = lp_norms(xs - rebuilt, p) / lp_norms(xs, p)
    return float(errors.max()) if samples else 0.0


def check_reconstruction(frame: Frame, samples: int = 100, seed: int = 0) -> float:
    """Raise :class:`ContractViolation` unless the reconstruction identity holds."""
    error = reconstruction_error(frame, samples, seed)
    if error > tolerances.RECONSTRUCTION_TOL:
        raise ContractViolation(
            "reconstruction identity fails",
            {"relative_error": error, "tolerance": tolerances.RECONSTRUCTION_TOL, "kind": frame.kind},
        )
    return error


def _window_max(terms: np.ndarray, p: float) -> np.ndarray:
    """Max over windows ``m <= k`` of the p-norm of ``sum_{i=m}^{k} terms_i``.

    *terms* has shape ``(..., N, n)``; the result has shape ``(...)``.
    """
    count = terms.shape[-2]
    lead = terms.shape[:-2]
    if count == 0:
        return np.zeros(lead)
    zero = np.zeros(lead + (1, terms.shape[-1]))
    prefix = np.concatenate([zero, np.cumsum(terms, axis=-2)], axis=-2)
    best = np.zeros(lead)
    for m in range(count):
        windows = prefix[..., m + 1 :, :] - prefix[..., m : m + 1, :]
        best = np.maximum(best, lp_norms(windows, p).max(axis=-1))
    return best


def projection_constant_estimate(frame: Frame, samples: int = 200, seed: int = 0) -> float:
    """Sampled lower estimate of the projection constant K.

    Maximises ``||sum_{i=m}^{k} f_i(x) x_i||`` over sampled unit vectors x
    (unit in the ambient norm) and every index window.
    """
    if samples < 1:
        raise FrameInputError("samples must be >= 1")
    p = frame.ambient_norm.p
    xs = sample_sphere(make_rng(seed), samples, frame.n, p)
    chunk = max(1, _CHUNK_FLOATS // (frame.N * frame.n))
    best = 0.0
    for start in range(0, samples, chunk):
        block = xs[start : start + chunk]
        coeffs = block @ frame.analysis.T
        terms = coeffs[:, :, None] * frame.synthesis[None, :, :]
        best = max(best, float(_window_max(terms, p).max()))
    return best


def dual_projection_bound(frame: Frame) -> float:
    """Return ``max_i ||x_i|| * ||f_i||_*``, the single-index window norm.

    Exact, and never larger than the projection constant.
    """
    ambient = frame.ambient_norm
    x_norms = lp_norms(frame.synthesis, ambient.p)
    f_norms = lp_norms(frame.analysis, ambient.dual_p)
    return float(np.max(x_norms * f_norms))


def unconditional_constant_estimate(
    frame: Frame, samples: int = 100, seed: int = 0, patterns: int = 256
) -> float:
    """Sampled lower estimate of ``sup_x max_signs ||sum +-f_i(x) x_i||``."""
    rng = make_rng(seed)
    p = frame.ambient_norm.p
    xs = sample_sphere(rng, samples, frame.n, p)
    signs = rng.choice(np.array([-1.0, 1.0]), size=(patterns, frame.N))
    signs[0] = 1.0
    best = 0.0
    for x in xs:
        coeffs = frame.analysis @ x
        sums = (signs * coeffs[None, :]) @ frame.synthesis
        best = max(best, float(lp_norms(sums, p).max()))
    return best


def _split_atoms(atoms: np.ndarray, a: np.ndarray) -> Tuple[np.ndarray, float]:
    nonzero = np.any(atoms != 0.0, axis=1)
    terms = a[nonzero, None] * atoms[nonzero]
    tail = float(np.sqrt(np.sum(a[~nonzero] ** 2)))
    return terms, tail


def _interval_max_norm(atoms: np.ndarray, p: float, a: np.ndarray) -> float:
    terms, tail = _split_atoms(atoms, a)
    if terms.shape[0] == 0:
        return tail
    return float(_window_max(terms, p)) + tail


def coefficient_norms(spec: NormSpec, coeffs: np.ndarray) -> np.ndarray:
    """Evaluate *spec* on every row of *coeffs*.

    Rows may be shorter than the atom family; missing trailing coefficients
    count as zero.
    """
    rows = np.atleast_2d(np.asarray(coeffs, dtype=float))
    if spec.kind == "lp":
        return lp_norms(rows, spec.p)
    assert spec.atoms is not None and spec.ambient is not None
    atoms = spec.atoms[: rows.shape[1]]
    if spec.kind == "z_sign_max":
        return np.array([_sign_max_norm(atoms, spec.ambient.p, row, seed=0)[0] for row in rows])
    nonzero = np.any(atoms != 0.0, axis=1)
    tail = np.sqrt(np.sum(rows[:, ~nonzero] ** 2, axis=1))
    terms = rows[:, nonzero, None] * atoms[None, nonzero, :]
    return _window_max(terms, spec.ambient.p) + tail


def _sign_patterns(count: int, start: int, stop: int) -> np.ndarray:
    """Rows ``(+1, s_2, ..., s_count)`` for pattern ids in ``[start, stop)``."""
    ids = np.arange(start, stop, dtype=np.int64)[:, None]
    bits = (ids >> np.arange(count - 1, dtype=np.int64)[None, :]) & 1
    tail = 1.0 - 2.0 * bits
    return np.hstack([np.ones((stop - start, 1)), tail])


def _sign_max_norm(
    atoms: np.ndarray, p: float, a: np.ndarray, seed: int
) -> Tuple[float, bool, int]:
    terms, tail = _split_atoms(atoms, a)
    count = terms.shape[0]
    if count == 0:
        return tail, False, 0
    if count <= tolerances.SIGN_MAX_EXHAUSTIVE_LIMIT:
        # sigma and -sigma give the same norm, so fix the first sign
        total = 1 << (count - 1)
        chunk = max(1, _CHUNK_FLOATS // max(count, 1))
        best = 0.0
        for start in range(0, total, chunk):
            signs = _sign_patterns(count, start, min(total, start + chunk))
            best = max(best, float(lp_norms(signs @ terms, p).max()))
        return best + tail, False, total
    rng = make_rng(seed)
    signs = rng.choice(np.array([-1.0, 1.0]), size=(tolerances.SIGN_MAX_SAMPLES, count))
    best = float(lp_norms(signs @ terms, p).max())
    log_data = {
        "event": "sign_max_sampled",
        "atoms": count,
        "patterns": tolerances.SIGN_MAX_SAMPLES,
        "seed": seed,
    }
    logger.warning(json.dumps(log_data))
    return best + tail, True, tolerances.SIGN_MAX_SAMPLES


def z_norm_report(
    frame: Frame, a: object, variant: ZVariant = "interval_max", seed: int = 0
) -> ZNormReport:
    """Z-norm of the coefficient vector *a* with sampling provenance."""
    coeffs = as_vector(a, frame.N, name="coefficients")
    p = frame.ambient_norm.p
    if variant == "interval_max":
        value = _interval_max_norm(frame.synthesis, p, coeffs)
        return ZNormReport(value=value, variant=variant, sampled=False, patterns=0)
    if variant == "sign_max":
        value, sampled, patterns = _sign_max_norm(frame.synthesis, p, coeffs, seed)
        return ZNormReport(value=value, variant=variant, sampled=sampled, patterns=patterns)
    raise FrameInputError(f"unknown Z-norm variant {variant!r}")


def z_norm(frame: Frame, a: object, variant: ZVariant = "interval_max", seed: int = 0) -> float:
    """Associated-space norm of the coefficient vector *a*.

    ``interval_max`` is the largest ambient norm of a partial sum over an
    index interval, restricted to nonzero atoms, plus the l2 norm of the
    coefficients sitting on zero atoms.  ``sign_max`` replaces intervals by
    sign patterns; above ``SIGN_MAX_EXHAUSTIVE_LIMIT`` nonzero atoms the
    patterns are sampled and a warning is logged.
    """
    return z_norm_report(frame, a, variant, seed).value
