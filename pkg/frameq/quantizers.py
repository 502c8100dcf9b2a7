"""Quantization algorithms over frames.

Two calling conventions are used:

* a *vector quantizer* ``(x, delta) -> k`` maps a vector of the ambient
  space to integer coefficients on the step ``delta`` (the base quantizers
  of the iterative construction);
* a *coefficient quantizer* ``(frame, a) -> QuantizationResult`` quantizes
  the zonotope point ``sum a_i x_i`` for ``a`` in ``[-1, 1]^N``.
"""

from __future__ import annotations

import json
import logging
import math
from functools import lru_cache
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import tolerances
from .errors import ContractViolation, ConvergenceError, FrameInputError
from .frame_constructions import KashinFrame, dyadic_base, dyadic_weights, kashin_from_frame
from .frame_core import as_vector, evaluate_norm
from .helpers import lp_norms, make_rng, sample_ball, sample_sphere
from .models import Frame, NormSpec, QuantizationResult

logger = logging.getLogger(__name__)

VectorQuantizer = Callable[[np.ndarray, float], np.ndarray]
CoefficientQuantizer = Callable[[Frame, np.ndarray], QuantizationResult]

# Clip target inside the cube for the Kashin projections; the affine
# iterate then lands in [-1, 1] after finitely many steps.
_BOX_SHRINK = 1e-6
_REPRESENTATION_TOL = 1e-9


class KashinRepresentation(NamedTuple):
    coefficients: np.ndarray
    level: float
    escalations: int


class SigmaDeltaState(BaseModel):
    """Integrator state of the first-order Sigma-Delta recursion."""

    u: float = 0.0
    step_index: int = 0

    def step(self, y: float) -> int:
        """Consume one input sample and return the emitted bit."""
        if abs(y) > 1.0:
            raise FrameInputError(f"Sigma-Delta input {y!r} outside [-1, 1]")
        bit = 1 if self.u + y >= 0.0 else -1
        self.u = self.u + y - bit
        self.step_index += 1
        return bit


class SigmaDeltaOutput(NamedTuple):
    bits: np.ndarray
    states: np.ndarray
    final: SigmaDeltaState


class IterativeQuantizerConfig(BaseModel):
    """Constants of the bounded-to-global quantizer extension.

    ``q1 = (n1 + 1) / n1 * q0``, ``delta1 = delta0 / n1`` and
    ``C1 = 2 * C0 / (1 - q1)``.
    """

    model_config = ConfigDict(frozen=True)

    delta0: float = Field(gt=0.0)
    C0: float = Field(ge=1.0)
    q0: float = Field(gt=0.0, lt=1.0)
    n1: int = Field(ge=1)
    q1: float = Field(gt=0.0, lt=1.0)
    delta1: float = Field(gt=0.0)
    C1: float

    @model_validator(mode="after")
    def _check_derived(self) -> IterativeQuantizerConfig:
        if not math.isclose(self.q1, (self.n1 + 1) / self.n1 * self.q0, rel_tol=1e-12):
            raise ValueError("q1 must equal (n1 + 1) / n1 * q0")
        if not math.isclose(self.delta1, self.delta0 / self.n1, rel_tol=1e-12):
            raise ValueError("delta1 must equal delta0 / n1")
        if not math.isclose(self.C1, 2.0 * self.C0 / (1.0 - self.q1), rel_tol=1e-12):
            raise ValueError("C1 must equal 2 * C0 / (1 - q1)")
        return self

    @classmethod
    def from_base(cls, delta0: float, C0: float, q0: float) -> IterativeQuantizerConfig:
        """Derive the constants from a base quantizer with smallest admissible n1."""
        if not 0.0 < q0 < 1.0:
            raise FrameInputError("q0 must lie in (0, 1)")
        n1 = max(1, int(math.floor(q0 / (1.0 - q0))) + 1)
        while (n1 + 1) / n1 * q0 >= 1.0:
            n1 += 1
        q1 = (n1 + 1) / n1 * q0
        return cls(
            delta0=delta0,
            C0=C0,
            q0=q0,
            n1=n1,
            q1=q1,
            delta1=delta0 / n1,
            C1=2.0 * C0 / (1.0 - q1),
        )


class BaseConstants(BaseModel):
    """Measured constants of a base quantizer on sampled points of B_X."""

    C0: float
    q0: float
    samples: int


def round_coeffs(a: object, delta: float) -> np.ndarray:
    """Nearest integer to ``a / delta`` with ties rounded away from zero."""
    if delta <= 0.0:
        raise FrameInputError("delta must be positive")
    scaled = np.asarray(a, dtype=float) / delta
    return (np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)).astype(np.int64)


def round_quantizer(frame: Frame) -> VectorQuantizer:
    """Baseline vector quantizer ``k_i = round(f_i(x) / delta)``."""

    def quantize(x: np.ndarray, delta: float) -> np.ndarray:
        return round_coeffs(frame.analysis @ x, delta)

    return quantize


def round_quantize(frame: Frame, x: object, delta: float) -> QuantizationResult:
    x_vec = as_vector(x, frame.n)
    k = round_coeffs(frame.analysis @ x_vec, delta)
    return _result(frame, x_vec, k, delta, "round", {})


def _result(
    frame: Frame,
    target: np.ndarray,
    k: np.ndarray,
    delta: float,
    algorithm: str,
    params: Dict[str, object],
    z_norm_value: Optional[float] = None,
) -> QuantizationResult:
    error = float(lp_norms(target - delta * (k @ frame.synthesis), frame.ambient_norm.p))
    coeff_bound = float(delta * np.max(np.abs(k))) if k.size else 0.0
    return QuantizationResult(
        k=k,
        delta=delta,
        error=error,
        coeff_bound=coeff_bound,
        z_norm_value=z_norm_value,
        algorithm=algorithm,
        params=params,
        target=target,
    )


def verify_result(frame: Frame, result: QuantizationResult) -> float:
    """Recompute the error of *result* and check it against the stored value."""
    if result.target is None:
        raise FrameInputError("result carries no target vector")
    k = result.k_array
    if k.shape != (frame.N,):
        raise FrameInputError(f"result has {k.size} coefficients, frame has {frame.N}")
    target = np.asarray(result.target, dtype=float)
    error = float(lp_norms(target - result.delta * (k @ frame.synthesis), frame.ambient_norm.p))
    if abs(error - result.error) > 1e-12 * max(1.0, result.error):
        raise ContractViolation(
            "stored error does not match recomputed error",
            {"stored": result.error, "recomputed": error, "algorithm": result.algorithm},
        )
    bound = float(result.delta * np.max(np.abs(k))) if k.size else 0.0
    if abs(bound - result.coeff_bound) > 1e-12 * max(1.0, bound):
        raise ContractViolation(
            "stored coefficient bound does not match",
            {"stored": result.coeff_bound, "recomputed": bound},
        )
    return error


@lru_cache(maxsize=None)
def _digit_table(m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted distinct values of ``sum sigma_j 2^-j`` with a sparsest digit vector each."""
    grids = np.meshgrid(*([np.array([-1, 0, 1], dtype=np.int8)] * m), indexing="ij")
    digits = np.stack([g.reshape(-1) for g in grids], axis=1)
    sums = digits @ (2.0 ** -np.arange(1, m + 1))
    weight = np.count_nonzero(digits, axis=1)
    order = np.lexsort(tuple(digits[:, ::-1].T) + (weight, sums))
    digits, sums = digits[order], sums[order]
    keep = np.concatenate([[True], np.diff(sums) > 0.5 * 2.0 ** (-m)])
    return sums[keep], digits[keep]


def signed_dyadic_digits(t: float, m: int) -> np.ndarray:
    """Digits ``sigma`` in ``{-1, 0, 1}^m`` with ``sum sigma_j 2^-j`` nearest to *t*.

    Exhaustive (sparsest digits among ties) for ``m <= DYADIC_EXHAUSTIVE_MAX_M``,
    greedy most-significant digit first above that.  Both leave a residual of
    at most ``2^-m`` for ``|t| <= 1``.
    """
    if m < 1:
        raise FrameInputError("m must be >= 1")
    if m <= tolerances.DYADIC_EXHAUSTIVE_MAX_M:
        sums, digits = _digit_table(m)
        pos = int(np.searchsorted(sums, t))
        candidates = [c for c in (pos - 1, pos) if 0 <= c < len(sums)]
        best = min(candidates, key=lambda c: abs(sums[c] - t))
        return digits[best].astype(np.int64)
    sigma = np.zeros(m, dtype=np.int64)
    residual = t
    for j in range(1, m + 1):
        scaled = residual * 2.0**j
        sigma[j - 1] = int(np.clip(np.sign(scaled) * np.floor(abs(scaled) + 0.5), -1, 1))
        residual -= sigma[j - 1] * 2.0 ** (-j)
    return sigma


def dyadic_quantize(frame: Frame, a: object) -> QuantizationResult:
    """Quantize ``sum a_i x_i`` over a dyadic frame with step 1 and ``|k| <= 3``.

    Per row i the digits ``k_(i,j,1)`` approximate ``sum_j a_(i,j,1) 2^-j``;
    the remaining mass on ``e_1`` is rounded and spread over the
    ``k_(i,j,0)`` in chunks of at most 3.
    """
    if frame.kind != "dyadic":
        raise FrameInputError("dyadic_quantize needs a frame built by dyadic_frame")
    n, m = int(frame.construction.params["n"]), int(frame.construction.params["m"])
    coeffs = as_vector(a, frame.N, name="coefficients")
    if np.any(np.abs(coeffs) > 1.0):
        raise FrameInputError("coefficients must lie in [-1, 1]")

    grid = coeffs.reshape(n, m, 2)
    powers = 2.0 ** -np.arange(1, m + 1)
    k = np.zeros((n, m, 2), dtype=np.int64)
    for i in range(n):
        k[i, :, 1] = signed_dyadic_digits(float(grid[i, :, 1] @ powers), m)

    mass = float(coeffs.sum() - k[:, :, 1].sum())
    total = int(round_coeffs(mass, 1.0))
    slots = k[:, :, 0].reshape(-1)
    remaining = total
    for slot in range(slots.size):
        if remaining == 0:
            break
        chunk = int(np.sign(remaining)) * min(3, abs(remaining))
        slots[slot] = chunk
        remaining -= chunk
    k[:, :, 0] = slots.reshape(n, m)
    k_flat = k.reshape(-1)

    target = coeffs @ frame.synthesis
    result = _result(frame, target, k_flat, 1.0, "dyadic", {"n": n, "m": m})
    vectors, _ = dyadic_base(frame)
    tail = dyadic_weights(m)[-1]
    bound = (1.0 + n * tail) * float(np.max(lp_norms(vectors, frame.ambient_norm.p)))
    if result.error > bound + 1e-12 or np.max(np.abs(k_flat), initial=0) > 3:
        raise ContractViolation(
            "dyadic quantization exceeded its bound",
            {"error": result.error, "bound": bound, "max_k": int(np.max(np.abs(k_flat)))},
        )
    return result


def _kashin_project(
    U: np.ndarray, x: np.ndarray, level: float, max_iter: int
) -> Tuple[Optional[np.ndarray], float]:
    """Alternate projections onto ``{(level/sqrt N) U a = x}`` and the cube.

    Returns the affine iterate once it lies in ``[-1, 1]^N`` (up to 1e-9),
    or ``None`` with the smallest residual reached by a clipped iterate.
    """
    scale = math.sqrt(U.shape[1]) / level
    cap = 1.0 - _BOX_SHRINK
    a = np.zeros(U.shape[1])
    best = float("inf")
    for _ in range(max_iter):
        affine = a + scale * (U.T @ (x - (U @ a) / scale))
        if np.max(np.abs(affine)) <= 1.0 + _REPRESENTATION_TOL:
            return affine, 0.0
        a = np.clip(affine, -cap, cap)
        best = min(best, float(np.linalg.norm(x - (U @ a) / scale)))
    return None, best


def kashin_represent(
    kf: KashinFrame,
    x: object,
    max_iter: Optional[int] = None,
    level: Optional[float] = None,
) -> KashinRepresentation:
    """Coefficients ``a`` with ``(level / sqrt N) U a = x`` and ``|a_i| <= 1``.

    Starts at *level* (``K_hat`` by default) and multiplies it by
    ``KASHIN_ESCALATION`` when the projections do not converge, at most
    ``KASHIN_MAX_ESCALATIONS`` times.
    """
    x_vec = as_vector(x, kf.n)
    if np.linalg.norm(x_vec) > 1.0 + 1e-12:
        raise FrameInputError("Kashin representation needs ||x||_2 <= 1")
    iterations = max_iter or tolerances.KASHIN_MAX_ITER
    current = kf.K_hat if level is None else float(level)
    if current <= 0.0:
        raise FrameInputError("Kashin level must be positive")
    if not np.any(x_vec):
        return KashinRepresentation(np.zeros(kf.N), current, 0)

    attempted: List[float] = []
    best = float("inf")
    for escalation in range(tolerances.KASHIN_MAX_ESCALATIONS + 1):
        coefficients, residual = _kashin_project(kf.U, x_vec, current, iterations)
        if coefficients is not None:
            return KashinRepresentation(coefficients, current, escalation)
        attempted.append(current)
        best = min(best, residual)
        log_data = {
            "event": "kashin_escalation",
            "level": current,
            "next_level": current * tolerances.KASHIN_ESCALATION,
            "residual": residual,
        }
        logger.warning(json.dumps(log_data))
        current *= tolerances.KASHIN_ESCALATION
    raise ConvergenceError(
        "Kashin representation did not converge",
        {"best_residual": best, "levels": attempted, "max_iter": iterations},
    )


def _succeeds(kf: KashinFrame, x: np.ndarray, level: float, max_iter: int) -> bool:
    coefficients, _ = _kashin_project(kf.U, x, level, max_iter)
    return coefficients is not None


def kashin_level(
    kf: KashinFrame, x: object, max_iter: Optional[int] = None, rtol: float = 1e-4
) -> float:
    """Smallest level at which :func:`kashin_represent` succeeds for *x*, by bisection.

    The search starts between the certificate ``sqrt(N) ||x||^2 / ||U^T x||_1``
    and the least-squares level ``sqrt(N) ||U^T x||_inf``.
    """
    x_vec = as_vector(x, kf.n)
    if not np.any(x_vec):
        return 0.0
    iterations = max_iter or tolerances.KASHIN_MAX_ITER
    coords = kf.U.T @ x_vec
    root = math.sqrt(kf.N)
    lo = root * float(x_vec @ x_vec) / float(np.abs(coords).sum())
    hi = root * float(np.max(np.abs(coords)))
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if _succeeds(kf, x_vec, mid, iterations):
            hi = mid
        else:
            lo = mid
    return hi


def kashin_quantize(
    kf: KashinFrame, x: object, delta: float, level: Optional[float] = None
) -> QuantizationResult:
    """Round a Kashin representation of *x* on the dictionary ``u_i / sqrt(N)``.

    The rounding residual passes through orthonormal rows, so the error is at
    most ``delta / 2`` and ``max |delta k_i| <= level + delta / 2``.
    """
    x_vec = as_vector(x, kf.n)
    representation = kashin_represent(kf, x_vec, level=level)
    coefficients = representation.level * representation.coefficients
    k = round_coeffs(coefficients, delta)
    frame = kf.to_frame()
    result = _result(
        frame,
        x_vec,
        k,
        delta,
        "kashin",
        {"level": representation.level, "escalations": representation.escalations, "K_hat": kf.K_hat},
    )
    if result.error > delta / 2.0 + 1e-9:
        raise ContractViolation(
            "Kashin quantization error above delta / 2",
            {"error": result.error, "delta": delta},
        )
    return result


def kashin_coefficient_quantizer(delta: float) -> CoefficientQuantizer:
    """Coefficient quantizer over a serialized Kashin dictionary frame."""

    def quantize(frame: Frame, a: np.ndarray) -> QuantizationResult:
        kf = kashin_from_frame(frame)
        coeffs = as_vector(a, frame.N, name="coefficients")
        if np.any(np.abs(coeffs) > 1.0):
            raise FrameInputError("coefficients must lie in [-1, 1]")
        return kashin_quantize(kf, coeffs @ frame.synthesis, delta)

    return quantize


def round_coefficient_quantizer(delta: float) -> CoefficientQuantizer:
    """Round the coefficients themselves: ``k = round(a / delta)``."""

    def quantize(frame: Frame, a: np.ndarray) -> QuantizationResult:
        coeffs = as_vector(a, frame.N, name="coefficients")
        target = coeffs @ frame.synthesis
        return _result(frame, target, round_coeffs(coeffs, delta), delta, "round", {})

    return quantize


def rescale_bcnqp(
    quantizer: CoefficientQuantizer, frame: Frame, a: object, lam: float, delta: float = 1.0
) -> QuantizationResult:
    """Run an (eps, delta, C) quantizer as an (lam eps, lam delta, 1 + lam C) one.

    ``a / lam`` is split into ``delta m`` with ``m`` truncated toward zero and
    a remainder in ``(-delta, delta)`` that *quantizer* handles.
    """
    if not 0.0 < lam <= 1.0:
        raise FrameInputError("lam must lie in (0, 1]")
    coeffs = as_vector(a, frame.N, name="coefficients")
    if np.any(np.abs(coeffs) > 1.0):
        raise FrameInputError("coefficients must lie in [-1, 1]")
    whole = np.trunc(coeffs / (lam * delta)).astype(np.int64)
    remainder = coeffs / lam - delta * whole
    inner = quantizer(frame, remainder)
    if not math.isclose(inner.delta, delta, rel_tol=1e-12):
        raise FrameInputError(f"quantizer works on step {inner.delta}, expected {delta}")
    k = whole + inner.k_array
    params = {"lam": lam, "inner": inner.algorithm, **inner.params}
    return _result(frame, coeffs @ frame.synthesis, k, lam * delta, f"rescaled_{inner.algorithm}", params)


def coefficient_quantizer(name: str, frame: Frame, delta: float) -> CoefficientQuantizer:
    """Look up a coefficient quantizer and check it fits *frame*."""
    if name not in QUANTIZERS:
        raise FrameInputError(f"unknown quantizer {name!r}; choose from {sorted(QUANTIZERS)}")
    required = _REQUIRED_KIND.get(name)
    if required is not None and frame.kind != required:
        raise FrameInputError(
            f"quantizer {name!r} needs a {required} frame, got {frame.kind or 'an unlabeled frame'}"
        )
    if name == "dyadic" and not math.isclose(delta, 1.0):
        raise FrameInputError("the dyadic quantizer works on step 1")
    return QUANTIZERS[name](delta)


def _check_base(
    base: VectorQuantizer,
    frame: Frame,
    z: NormSpec,
    x: np.ndarray,
    delta0: float,
    C0: float,
    q0: float,
) -> np.ndarray:
    """Call the base quantizer on ``x`` in B_X and enforce its contract."""
    k = np.asarray(base(x, delta0), dtype=np.int64)
    error = float(lp_norms(x - delta0 * (k @ frame.synthesis), frame.ambient_norm.p))
    z_value = float(evaluate_norm(z, delta0 * k))
    if error > q0 + 1e-12 or z_value > C0 + 1e-12:
        details = {"residual": x.tolist(), "error": error, "z_norm": z_value, "q0": q0, "C0": C0}
        logger.warning(json.dumps({"event": "base_contract_breach", **details}))
        raise ContractViolation("base quantizer violates its contract", details)
    return k


def measure_base_constants(
    base: VectorQuantizer,
    frame: Frame,
    delta0: float,
    z: Optional[NormSpec] = None,
    samples: int = 100,
    seed: int = 0,
) -> BaseConstants:
    """Largest Z-norm and error of *base* over sampled points of B_X."""
    z_spec = z or NormSpec.z_interval(frame)
    p = frame.ambient_norm.p
    rng = make_rng(seed)
    half = max(1, samples // 2)
    points = np.vstack(
        [sample_ball(rng, samples - half, frame.n, p), sample_sphere(rng, half, frame.n, p)]
    )
    worst_z, worst_error = 0.0, 0.0
    for x in points:
        k = np.asarray(base(x, delta0), dtype=np.int64)
        worst_error = max(
            worst_error, float(lp_norms(x - delta0 * (k @ frame.synthesis), p))
        )
        worst_z = max(worst_z, float(evaluate_norm(z_spec, delta0 * k)))
    return BaseConstants(C0=worst_z, q0=worst_error, samples=len(points))


class IterativeQuantizer:
    """Extend a quantizer valid on B_X to all of X.

    The base contract ``||sum delta0 k z_i||_Z <= C0`` and
    ``||x - sum delta0 k x_i|| <= q0`` is sampled once when the quantizer is
    built and enforced again on every residual it sees.
    """

    def __init__(
        self,
        base: VectorQuantizer,
        config: IterativeQuantizerConfig,
        frame: Frame,
        z: Optional[NormSpec] = None,
        validate_samples: int = 100,
        seed: int = 0,
    ) -> None:
        self.base = base
        self.config = config
        self.frame = frame
        self.z = z or NormSpec.z_interval(frame)
        if validate_samples:
            measured = measure_base_constants(
                base, frame, config.delta0, self.z, validate_samples, seed
            )
            if measured.q0 > config.q0 + 1e-12 or measured.C0 > config.C0 + 1e-12:
                details = {
                    "measured_q0": measured.q0,
                    "measured_C0": measured.C0,
                    "q0": config.q0,
                    "C0": config.C0,
                }
                logger.warning(json.dumps({"event": "base_contract_breach", **details}))
                raise ContractViolation("base quantizer fails its contract on B_X", details)

    def _rescaled_step(self, x: np.ndarray, delta: float) -> np.ndarray:
        """Integer k on step *delta* <= delta1 with error <= q1 for x in B_X."""
        cfg = self.config
        steps = int(math.floor(cfg.delta0 / delta * (1.0 + 1e-12)))
        if steps < cfg.n1:
            raise FrameInputError(f"step {delta} is larger than delta1 = {cfg.delta1}")
        shrink = cfg.delta0 / (delta * (steps + 1))
        k = _check_base(self.base, self.frame, self.z, shrink * x, cfg.delta0, cfg.C0, cfg.q0)
        return k * (steps + 1)

    def _refine(self, y: np.ndarray, delta: float, levels: int) -> np.ndarray:
        """Accumulate k for y in B_X until the error is at most ``q1 ** levels``."""
        q1 = self.config.q1
        p = self.frame.ambient_norm.p
        total = np.zeros(self.frame.N, dtype=np.int64)
        residual = y
        for level in range(levels):
            scale = q1 ** (-level)
            total = total + self._rescaled_step(scale * residual, delta * scale)
            residual = y - delta * (total @ self.frame.synthesis)
            size = float(lp_norms(residual, p))
            if size > q1 ** (level + 1) + 1e-12:
                raise ContractViolation(
                    "residual refinement missed its geometric bound",
                    {"level": level, "residual_norm": size, "bound": q1 ** (level + 1)},
                )
        return total

    def __call__(self, x: object) -> QuantizationResult:
        cfg = self.config
        x_vec = as_vector(x, self.frame.n)
        size = float(lp_norms(x_vec, self.frame.ambient_norm.p))
        if size <= 1.0:
            k = self._rescaled_step(x_vec, cfg.delta1)
            levels = 1
        else:
            levels = 1 + int(math.floor(math.log(size) / math.log(1.0 / cfg.q1)))
            while cfg.q1**levels >= 1.0 / size:
                levels += 1
            while levels > 1 and cfg.q1 ** (levels - 1) < 1.0 / size:
                levels -= 1
            k = self._refine(x_vec / size, cfg.delta1 / size, levels)

        z_value = float(evaluate_norm(self.z, cfg.delta1 * k))
        result = _result(
            self.frame,
            x_vec,
            k,
            cfg.delta1,
            "iterative",
            {"n1": cfg.n1, "q1": cfg.q1, "C1": cfg.C1, "levels": levels},
            z_norm_value=z_value,
        )
        if result.error > 1.0 + 1e-12 or z_value > cfg.C1 * size + 1e-9:
            raise ContractViolation(
                "iterative quantization exceeded its bound",
                {"error": result.error, "z_norm": z_value, "C1": cfg.C1, "norm": size},
            )
        return result


def iterative_quantize(
    base: VectorQuantizer,
    config: IterativeQuantizerConfig,
    frame: Frame,
    x: object,
    z: Optional[NormSpec] = None,
    seed: int = 0,
) -> QuantizationResult:
    """One-shot form of :class:`IterativeQuantizer` (validates the base each call)."""
    return IterativeQuantizer(base, config, frame, z, seed=seed)(x)


def sigma_delta(y: object, state: Optional[SigmaDeltaState] = None) -> SigmaDeltaOutput:
    """First-order Sigma-Delta: ``q_n = sign(u_(n-1) + y_n)``, ``u_n = u_(n-1) + y_n - q_n``.

    ``sign(0) = +1``.  The integrator trace starts after the first sample.
    """
    samples = np.asarray(y, dtype=float).reshape(-1)
    if np.any(np.abs(samples) > 1.0):
        raise FrameInputError("Sigma-Delta inputs must lie in [-1, 1]")
    current = state if state is not None else SigmaDeltaState()
    bits = np.empty(samples.size, dtype=np.int64)
    states = np.empty(samples.size)
    for index, value in enumerate(samples):
        bits[index] = current.step(float(value))
        states[index] = current.u
    return SigmaDeltaOutput(bits=bits, states=states, final=current)


QUANTIZERS: Dict[str, Callable[[float], CoefficientQuantizer]] = {
    "round": round_coefficient_quantizer,
    "dyadic": lambda delta: dyadic_quantize,
    "kashin": kashin_coefficient_quantizer,
}

_REQUIRED_KIND = {"dyadic": "dyadic", "kashin": "kashin"}
