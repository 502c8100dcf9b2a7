"""Numerical checks of the counting, density, scaling and volume bounds."""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from . import tolerances
from .errors import EnumerationBudgetError, FrameInputError
from .frame_constructions import dyadic_frame, dyadic_weights, kashin_frame, orthonormal_frame
from .frame_core import coefficient_norms
from .helpers import lp_norms, make_rng, sample_ball, sample_sphere
from .models import ExperimentRecord, Frame, NormSpec
from .quantizers import CoefficientQuantizer, coefficient_quantizer

logger = logging.getLogger(__name__)


class PowerLaw(BaseModel):
    """``t -> scale * t ** exponent``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scale: float = Field(default=1.0, gt=0.0)
    exponent: float = Field(default=1.0, gt=0.0)

    def __call__(self, t: float) -> float:
        return self.scale * t**self.exponent

    def inverse(self, y: float) -> float:
        return (y / self.scale) ** (1.0 / self.exponent)


GrowthFunction = Union[PowerLaw, Callable[[float], float]]


class BoundParams(BaseModel):
    """Parameters entering the counting and scaling bounds.

    ``q`` is the cotype index, ``C_q`` the (user supplied) cotype constant and
    ``K_Z`` the projection constant of the associated basis.  ``f`` must grow
    without bound and ``g(t) ln t / t`` must vanish, which for power laws
    means a positive exponent for f and an exponent below one for g.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    q: float = Field(default=2.0, ge=2.0)
    C_q: float = Field(default=1.0, gt=0.0)
    K_Z: float = Field(default=1.0, ge=1.0)
    f: PowerLaw = Field(default_factory=PowerLaw)
    g: PowerLaw = Field(default_factory=lambda: PowerLaw(exponent=0.5))

    @field_validator("g")
    @classmethod
    def _check_g(cls, value: PowerLaw) -> PowerLaw:
        if value.exponent >= 1.0:
            raise ValueError("g must grow slower than t / ln t (exponent below 1)")
        return value


class QuantizedSet(BaseModel):
    """Distinct points ``sum delta n_j x_j`` whose coefficients have Z-norm <= C."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray
    coefficients: np.ndarray
    delta: float
    C: float
    z_kind: str
    coeff_cap: int

    @property
    def cardinality(self) -> int:
        return int(self.points.shape[0])


class DensityReport(BaseModel):
    epsilon_hat: float
    samples: int
    seed: int
    cardinality: int


class CountingReport(BaseModel):
    cardinality: int
    required: float
    slack: float
    passed: bool


class BCNQPReport(BaseModel):
    worst_error: float
    worst_coeff: float
    passed: bool
    trials: int
    failures: int


class SweepConfig(BaseModel):
    """Parameters of a scaling sweep; unset tolerances use per-construction defaults."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    delta: float = Field(default=1.0, gt=0.0, le=1.0)
    C: Optional[float] = Field(default=None, ge=1.0)
    epsilon: Optional[float] = Field(default=None, gt=0.0)
    trials: int = Field(default=1000, ge=1)
    kashin_ratio: int = Field(default=3, ge=1)
    timing: bool = False
    workers: int = Field(default=1, ge=1)
    bound_params: BoundParams = Field(default_factory=BoundParams)


def _lattice_values(cap: int) -> np.ndarray:
    return np.arange(-cap, cap + 1, dtype=np.int64)


def enumerate_quantized_set(
    frame: Frame,
    delta: float,
    C: float,
    z: Optional[NormSpec] = None,
    coeff_cap: int = 2,
) -> QuantizedSet:
    """All distinct points ``sum delta n_j x_j`` with ``||sum delta n_j z_j||_Z <= C``.

    Coefficients range over ``[-coeff_cap, coeff_cap]``.  Prefixes are
    expanded level by level in lexicographic order and dropped as soon as
    their Z-norm (the remaining coefficients set to zero) exceeds C; every
    supported norm is monotone under extending the support, so pruning never
    loses a point.
    """
    if delta <= 0.0 or C < 0.0 or coeff_cap < 0:
        raise FrameInputError("need delta > 0, C >= 0 and coeff_cap >= 0")
    bits = frame.N * math.log2(2 * coeff_cap + 1)
    if bits > tolerances.MAX_ENUMERATION_BITS:
        raise EnumerationBudgetError(
            f"enumeration needs {bits:.1f} bits, budget is {tolerances.MAX_ENUMERATION_BITS:g}; "
            f"use a smaller coeff_cap (largest admissible: "
            f"{int((2 ** (tolerances.MAX_ENUMERATION_BITS / frame.N) - 1) // 2)})"
        )
    z_spec = z or NormSpec.z_interval(frame)
    values = _lattice_values(coeff_cap)
    prefixes = np.zeros((1, 0), dtype=np.int64)
    for _ in range(frame.N):
        expanded = np.hstack(
            [
                np.repeat(prefixes, values.size, axis=0),
                np.tile(values, prefixes.shape[0])[:, None],
            ]
        )
        norms = coefficient_norms(z_spec, delta * expanded)
        prefixes = expanded[norms <= C + 1e-12]
        if prefixes.shape[0] == 0:
            break

    points = delta * (prefixes @ frame.synthesis)
    _, first = np.unique(np.round(points, 12), axis=0, return_index=True)
    keep = np.sort(first)
    logger.info(
        "Enumerated %d coefficient vectors, %d distinct points", prefixes.shape[0], keep.size
    )
    return QuantizedSet(
        points=points[keep],
        coefficients=prefixes[keep],
        delta=delta,
        C=C,
        z_kind=z_spec.kind,
        coeff_cap=coeff_cap,
    )


def density_check(
    qset: QuantizedSet,
    ambient: Optional[NormSpec] = None,
    samples: int = 10_000,
    seed: int = 0,
) -> DensityReport:
    """Empirical covering radius of B_X by the points of *qset*.

    Queries are *samples* uniform points of the ball plus as many points of
    the sphere; the result is deterministic for a fixed seed.
    """
    if samples < 1:
        raise FrameInputError("samples must be >= 1")
    if qset.cardinality == 0:
        raise FrameInputError("cannot measure the density of an empty set")
    norm = ambient or NormSpec()
    rng = make_rng(seed)
    n = qset.points.shape[1]
    queries = np.vstack([sample_ball(rng, samples, n, norm.p), sample_sphere(rng, samples, n, norm.p)])
    distances, _ = cKDTree(qset.points).query(queries, p=norm.p)
    return DensityReport(
        epsilon_hat=float(np.max(distances)),
        samples=2 * samples,
        seed=seed,
        cardinality=qset.cardinality,
    )


def _invert(f: GrowthFunction, y: float) -> float:
    if isinstance(f, PowerLaw):
        return f.inverse(y)
    hi = 1.0
    for _ in range(200):
        if f(hi) >= y:
            break
        hi *= 2.0
    else:
        raise FrameInputError(f"growth function never reaches {y}")
    lo = 1e-12
    if f(lo) >= y:
        return lo
    return float(brentq(lambda t: f(t) - y, lo, hi))


def counting_lower_bound(
    n: int,
    epsilon: float,
    delta: float,
    C: float,
    K_Z: float,
    f: Optional[GrowthFunction] = None,
) -> float:
    """``n ln(1/eps) / f^-1(C/delta) - ln(4 K_Z C/delta + 1)``, a lower bound on ln N.

    Negative values are returned as they are (the bound is then vacuous).
    """
    if not 0.0 < epsilon < 1.0:
        raise FrameInputError("epsilon must lie in (0, 1)")
    growth = f or PowerLaw()
    ratio = C / delta
    return n * math.log(1.0 / epsilon) / _invert(growth, ratio) - math.log(4.0 * K_Z * ratio + 1.0)


def volume_counting_check(
    qset: QuantizedSet, epsilon_hat: float, n: int, slack: float = 0.1
) -> CountingReport:
    """Check ``cardinality >= (1 / eps_hat)^n`` up to a sampling slack."""
    if epsilon_hat <= 0.0:
        raise FrameInputError("epsilon_hat must be positive")
    required = (1.0 / epsilon_hat) ** n
    return CountingReport(
        cardinality=qset.cardinality,
        required=required,
        slack=slack,
        passed=qset.cardinality >= required * (1.0 - slack),
    )


def bcnqp_sample_test(
    frame: Frame,
    delta: float,
    C: float,
    epsilon: float,
    trials: int,
    quantizer: CoefficientQuantizer,
    seed: int = 0,
) -> BCNQPReport:
    """Quantize random zonotope points and check ``error <= eps``, ``max|delta k| <= C``."""
    rng = make_rng(seed)
    coefficients = rng.uniform(-1.0, 1.0, size=(trials, frame.N))
    worst_error, worst_coeff, failures = 0.0, 0.0, 0
    for a in coefficients:
        result = quantizer(frame, a)
        worst_error = max(worst_error, result.error)
        worst_coeff = max(worst_coeff, result.coeff_bound)
        if result.error > epsilon + 1e-12 or result.coeff_bound > C + 1e-12:
            failures += 1
    return BCNQPReport(
        worst_error=worst_error,
        worst_coeff=worst_coeff,
        passed=failures == 0,
        trials=trials,
        failures=failures,
    )


def bcnqp_constant_from_nqp(frame: Frame, epsilon: float) -> float:
    """Coefficient bound ``1 + eps max ||f_i||_*`` of a basis with the (eps, delta)-NQP."""
    if frame.N != frame.n:
        raise FrameInputError("the NQP-to-BCNQP constant applies to bases (N == n)")
    dual = lp_norms(frame.analysis, frame.ambient_norm.dual_p)
    return 1.0 + epsilon * float(np.max(dual))


def min_norm_ratio(frame: Frame) -> float:
    """``sqrt(n) * min_i ||x_i||``."""
    norms = lp_norms(frame.synthesis, frame.ambient_norm.p)
    return math.sqrt(frame.n) * float(np.min(norms))


def frame_length_lower_bound(n: int, q: float, C: float, delta: float) -> float:
    """Least frame length ``n ln n / (2 q ln(1 + 2C/delta))`` allowed by the cotype bound."""
    return n * math.log(n) / (2.0 * q * math.log(1.0 + 2.0 * C / delta))


def volume_ratio_bound(n: int, q: float, C_q: float, d: float = 1.0) -> float:
    """``d C_q n^(1/2 - 1/q) ln n``; the universal constant d defaults to 1 (unnormalized)."""
    if n < 2 or q < 2.0:
        raise FrameInputError("need n >= 2 and q >= 2")
    alpha = 0.5 - 1.0 / q
    return d * C_q * n**alpha * math.log(n)


def volume_ratio_bound2(C2: float, A: float = 1.0) -> float:
    """``A C_2 ln(1 + C_2)``; A defaults to 1 (unnormalized)."""
    return A * C2 * math.log(1.0 + C2)


def monte_carlo_volume_ratio(
    outer: float, inner: float, n: int, samples: int = 200_000, seed: int = 0
) -> float:
    """Estimate ``vol(B_outer) / vol(B_inner)`` for l_p balls with ``inner <= outer``.

    Uniform points of the outer ball are tested for membership in the inner
    ball; the ratio is the reciprocal hit rate.
    """
    if inner > outer:
        raise FrameInputError("the inner l_p ball must lie inside the outer one (inner p <= outer p)")
    rng = make_rng(seed)
    points = sample_ball(rng, samples, n, outer)
    hits = int(np.count_nonzero(lp_norms(points, inner) <= 1.0))
    if hits == 0:
        raise FrameInputError("no sample landed in the inner ball; increase samples")
    return samples / hits


def _build_sweep_frame(constructor: str, n: int, seed: int, config: SweepConfig):
    if constructor == "dyadic":
        m = max(1, math.ceil(2.0 * math.log2(n)))
        frame = dyadic_frame(orthonormal_frame(n), m)
        epsilon = 1.0 + n * float(dyadic_weights(m)[-1])
        return frame, epsilon, 3.0
    if constructor == "kashin":
        kf = kashin_frame(n, config.kashin_ratio * n, seed)
        return kf.to_frame(), config.delta / 2.0 + 1e-9, kf.K_hat + config.delta
    raise FrameInputError(f"unknown sweep construction {constructor!r}")


def _sweep_record(
    n: int,
    seed: int,
    constructor: str,
    quantizer: str,
    config: SweepConfig,
) -> ExperimentRecord:
    started = time.perf_counter()
    frame, default_epsilon, default_C = _build_sweep_frame(constructor, n, seed, config)
    epsilon = config.epsilon if config.epsilon is not None else default_epsilon
    C = config.C if config.C is not None else default_C
    report = bcnqp_sample_test(
        frame,
        config.delta,
        C,
        epsilon,
        config.trials,
        coefficient_quantizer(quantizer, frame, config.delta),
        seed=seed,
    )
    params = config.bound_params
    bound_values: Dict[str, float] = {}
    if n >= 2:
        bound_values["thm56_N_lower"] = frame_length_lower_bound(n, params.q, C, config.delta)
    if 0.0 < epsilon < 1.0:
        bound_values["eq433_lnN"] = counting_lower_bound(
            n, epsilon, config.delta, C, params.K_Z, params.f
        )
    if not report.passed:
        log_data = {
            "event": "bcnqp_failed",
            "n": n,
            "N": frame.N,
            "failures": report.failures,
            "worst_error": report.worst_error,
            "worst_coeff": report.worst_coeff,
        }
        logger.warning(json.dumps(log_data))
    return ExperimentRecord(
        n=n,
        N=frame.N,
        delta=config.delta,
        C=C,
        epsilon_target=epsilon,
        epsilon_measured=report.worst_error,
        worst_coeff=report.worst_coeff,
        bound_values=bound_values,
        passed=report.passed,
        seed=seed,
        wall_ms=(time.perf_counter() - started) * 1000.0 if config.timing else 0.0,
        min_norm_ratio=min_norm_ratio(frame),
        length_ratio_q=frame.N / n,
    )


def scaling_sweep(
    dims: Sequence[int],
    constructor: str = "dyadic",
    quantizer: Optional[str] = None,
    config: Optional[SweepConfig] = None,
    seed: int = 0,
) -> List[ExperimentRecord]:
    """Run the BCNQP sampling test for each dimension and record the bounds.

    Each record draws its seed from ``SeedSequence(seed)`` so records are
    reproducible and independent of ``workers``; output keeps the order of
    *dims*.  Failed records are flagged, the sweep continues.
    """
    dims = [int(n) for n in dims]
    if not dims or any(n < 1 for n in dims):
        raise FrameInputError("dims must be a non-empty list of positive integers")
    if dims != sorted(dims):
        raise FrameInputError("dims must be sorted ascending")
    cfg = config or SweepConfig()
    name = quantizer or constructor
    seeds = [
        int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(len(dims))
    ]
    tasks = list(zip(dims, seeds))
    if cfg.workers == 1:
        return [_sweep_record(n, s, constructor, name, cfg) for n, s in tasks]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(lambda task: _sweep_record(task[0], task[1], constructor, name, cfg), tasks))
