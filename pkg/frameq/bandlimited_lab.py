"""Oversampled expansion of bandlimited signals and one-bit Sigma-Delta.

Fourier convention is unitary, ``g^(xi) = (2 pi)^(-1/2) int g(x) e^(-i x xi) dx``.
A window ``rho`` has ``rho^ = (2 pi)^(-1/2) w`` with ``w = 1`` on
``[-pi, pi]`` and ``w = 0`` beyond ``edge * pi``, so for ``lam >= edge``::

    f(x) = (1 / lam) sum_n f(n / lam) rho(x - n / lam)

for every f with spectrum in ``[-pi, pi]``.  The roll-off edge is a window
parameter (``DEFAULT_EDGE``), not tied to the oversampling rate.
"""

from __future__ import annotations

import json
import logging
import math
from functools import lru_cache
from typing import Callable, List, Literal, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.interpolate import CubicSpline

from .errors import FrameInputError
from .quantizers import sigma_delta

logger = logging.getLogger(__name__)

WindowFamily = Literal["raised_cosine", "mollified_bump"]

# Overridden by config.apply_config.
DEFAULT_EDGE: float = 2.0
DEFAULT_FAMILY: str = "raised_cosine"

_BUMP_EXTENT = 256.0
_BUMP_STEP = 1.0 / 32.0
_BUMP_NODES = 2048
_CHUNK_FLOATS = 2_000_000
_FLAT_FREQUENCIES = 64
_STOP_FREQUENCIES = 16


class BandlimitedSignal(BaseModel):
    """``f(x) = sum_k a_k sinc(x - s_k)`` with ``sinc(x) = sin(pi x) / (pi x)``."""

    components: List[Tuple[float, float]]
    sup_norm_estimate: float = 0.0

    @field_validator("components")
    @classmethod
    def _check_components(cls, value: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        for amplitude, shift in value:
            if not (math.isfinite(amplitude) and math.isfinite(shift)):
                raise ValueError("signal components must be finite")
        return value

    @model_validator(mode="after")
    def _estimate_sup(self) -> BandlimitedSignal:
        if not self.components:
            self.sup_norm_estimate = 0.0
            return self
        shifts = [s for _, s in self.components]
        grid = np.arange(min(shifts) - 20.0, max(shifts) + 20.0, 0.005)
        self.sup_norm_estimate = float(np.max(np.abs(self(grid))))
        return self

    def __call__(self, x: object) -> np.ndarray:
        points = np.asarray(x, dtype=float)
        values = np.zeros_like(points)
        for amplitude, shift in self.components:
            values = values + amplitude * np.sinc(points - shift)
        return values

    @classmethod
    def demo(cls) -> BandlimitedSignal:
        return cls(components=[(0.9, 0.0)])


class Samples(NamedTuple):
    times: np.ndarray
    values: np.ndarray
    lam: float


class Reconstruction(NamedTuple):
    values: np.ndarray
    tail: float


class SpectralWindow(BaseModel):
    """Closed-form or tabulated kernel with its derivative's L1 norm."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lam: float = Field(gt=1.0)
    family: WindowFamily
    edge: float = Field(gt=1.0)
    rho: Callable[[np.ndarray], np.ndarray] = Field(exclude=True)
    rho_prime_L1: float
    quad_step: float
    quad_extent: float

    def __call__(self, x: object) -> np.ndarray:
        return self.rho(np.asarray(x, dtype=float))

    @property
    def roll_off(self) -> float:
        """Half width ``(edge - 1) / 2`` of the roll-off band in units of pi."""
        return (self.edge - 1.0) / 2.0


class WindowCheck(BaseModel):
    flat_error: float
    stop_error: float
    passed: bool


class SigmaDeltaReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(alias="lambda")
    T: float
    rho_prime_L1: float
    max_error: float
    bound: float
    tail: float
    passed: bool = Field(alias="pass")


class SigmaDeltaRun(NamedTuple):
    report: SigmaDeltaReport
    table: pd.DataFrame


def _raised_cosine(edge: float) -> Callable[[np.ndarray], np.ndarray]:
    A = (edge + 1.0) / 2.0
    B = (edge - 1.0) / 2.0
    singular_value = A * np.sinc(A / (2.0 * B)) * math.pi / 4.0

    def rho(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        denominator = 1.0 - (2.0 * B * x) ** 2
        near = np.abs(denominator) < 1e-8
        safe = np.where(near, 1.0, denominator)
        values = A * np.sinc(A * x) * np.cos(math.pi * B * x) / safe
        return np.where(near, singular_value, values)

    return rho


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step from 1 at t <= 0 to 0 at t >= 1."""
    with np.errstate(divide="ignore", over="ignore"):
        psi_t = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
        psi_s = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)), 0.0)
    return psi_s / (psi_t + psi_s)


@lru_cache(maxsize=8)
def _bump_table(edge: float) -> Tuple[np.ndarray, np.ndarray]:
    """``rho`` of the C-infinity window on ``[0, _BUMP_EXTENT]`` by Gauss-Legendre."""
    nodes, weights = np.polynomial.legendre.leggauss(_BUMP_NODES)
    lo, hi = math.pi, edge * math.pi
    xi = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * weights * _smooth_step((xi - lo) / (hi - lo))
    grid = np.arange(0.0, _BUMP_EXTENT + _BUMP_STEP / 2.0, _BUMP_STEP)
    values = np.empty_like(grid)
    chunk = max(1, _CHUNK_FLOATS // _BUMP_NODES)
    for start in range(0, grid.size, chunk):
        x = grid[start : start + chunk]
        flat = math.pi * np.sinc(x)
        values[start : start + chunk] = (flat + np.cos(np.outer(x, xi)) @ w) / math.pi
    return grid, values


def _mollified_bump(edge: float) -> Callable[[np.ndarray], np.ndarray]:
    grid, values = _bump_table(edge)
    spline = CubicSpline(np.concatenate([-grid[:0:-1], grid]), np.concatenate([values[:0:-1], values]))

    def rho(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= _BUMP_EXTENT, spline(np.clip(x, -_BUMP_EXTENT, _BUMP_EXTENT)), 0.0)

    return rho


def _total_variation(rho: Callable[[np.ndarray], np.ndarray], extent: float, step: float) -> float:
    grid = np.arange(0.0, extent + step / 2.0, step)
    return 2.0 * float(np.sum(np.abs(np.diff(rho(grid)))))


def window_rho(
    lam: float, family: Optional[str] = None, edge: Optional[float] = None
) -> SpectralWindow:
    """Build the spectral window for oversampling rate *lam*.

    ``raised_cosine`` has a cosine roll-off from ``pi`` to ``edge * pi`` and a
    closed-form kernel; ``mollified_bump`` uses a C-infinity roll-off and is
    tabulated.  ``rho(0) = (edge + 1) / 2`` for the raised cosine.
    """
    family = family or DEFAULT_FAMILY
    edge = float(edge if edge is not None else DEFAULT_EDGE)
    if lam <= 1.0:
        raise FrameInputError("oversampling rate must exceed 1")
    if edge <= 1.0:
        raise FrameInputError("window edge must exceed 1")
    if edge > lam + 1e-12:
        raise FrameInputError(f"window edge {edge:g} exceeds the oversampling rate {lam:g}")

    if family == "raised_cosine":
        rho = _raised_cosine(edge)
        B = (edge - 1.0) / 2.0
        extent = 2000.0 * max(1.0, 0.5 / B)
        rho_prime = _total_variation(rho, extent, 0.005)
        step = 0.05
    elif family == "mollified_bump":
        rho = _mollified_bump(edge)
        extent = _BUMP_EXTENT
        rho_prime = _total_variation(rho, extent, _BUMP_STEP / 8.0)
        step = _BUMP_STEP
    else:
        raise FrameInputError(f"unknown window family {family!r}")

    return SpectralWindow(
        lam=lam,
        family=family,
        edge=edge,
        rho=rho,
        rho_prime_L1=rho_prime,
        quad_step=step,
        quad_extent=extent,
    )


def window_spectrum(window: SpectralWindow, frequencies: object) -> np.ndarray:
    """``sqrt(2 pi) rho^(xi)`` by the trapezoid rule on the window's grid."""
    xi = np.asarray(frequencies, dtype=float)
    grid = np.arange(0.0, window.quad_extent + window.quad_step / 2.0, window.quad_step)
    weights = np.full(grid.size, window.quad_step)
    weights[0] = weights[-1] = window.quad_step / 2.0
    weighted = window(grid) * weights
    spectrum = np.empty(xi.size)
    chunk = max(1, _CHUNK_FLOATS // grid.size)
    for start in range(0, xi.size, chunk):
        block = xi[start : start + chunk]
        spectrum[start : start + chunk] = 2.0 * (np.cos(np.outer(block, grid)) @ weighted)
    return spectrum


def verify_window(window: SpectralWindow, tol: float = 1e-6) -> WindowCheck:
    """Check ``w = 1`` on 64 frequencies in the flat band and ``w = 0`` past the edge."""
    flat = np.linspace(-math.pi, math.pi, _FLAT_FREQUENCIES)
    stop = np.linspace(1.05 * window.edge * math.pi, (window.edge + 2.0) * math.pi, _STOP_FREQUENCIES)
    flat_error = float(np.max(np.abs(window_spectrum(window, flat) - 1.0)))
    stop_error = float(np.max(np.abs(window_spectrum(window, stop))))
    return WindowCheck(
        flat_error=flat_error,
        stop_error=stop_error,
        passed=flat_error <= tol and stop_error <= tol,
    )


def tail_mass(window: SpectralWindow, distance: float) -> float:
    """Bound on ``(1 / lam) sum |rho(t_k)|`` over sample offsets ``t_k >= distance``."""
    if window.family == "raised_cosine":
        c = 4.0 * window.roll_off**2
        if c * distance**2 <= 2.0:
            return float("inf")
        envelope = 1.0 / (math.pi * distance * (c * distance**2 - 1.0))
        integral = math.log(c * distance**2 / (c * distance**2 - 1.0)) / (2.0 * math.pi)
        return envelope / window.lam + integral
    grid, values = _bump_table(window.edge)
    envelope = np.maximum.accumulate(np.abs(values)[::-1])[::-1]
    offsets = np.arange(distance, _BUMP_EXTENT, 1.0 / window.lam)
    return float(np.sum(np.interp(offsets, grid, envelope))) / window.lam


def sample(f: BandlimitedSignal, lam: float, T: float) -> Samples:
    """Samples ``f(n / lam)`` for ``|n| <= T lam``."""
    if lam <= 1.0:
        raise FrameInputError("oversampling rate must exceed 1")
    n_max = int(math.floor(T * lam + 1e-9))
    times = np.arange(-n_max, n_max + 1) / lam
    return Samples(times=times, values=f(times), lam=lam)


def reconstruct_expansion(
    samples: Samples, window: SpectralWindow, x: object
) -> Reconstruction:
    """Evaluate ``(1 / lam) sum_n y_n rho(x - n / lam)`` on the grid *x*.

    The tail bound covers the omitted terms ``|n| > T lam`` for an input
    bounded by the largest sample magnitude.
    """
    if not math.isclose(samples.lam, window.lam, rel_tol=1e-12):
        raise FrameInputError(f"samples taken at rate {samples.lam}, window built for {window.lam}")
    points = np.asarray(x, dtype=float).reshape(-1)
    values = np.empty(points.size)
    chunk = max(1, _CHUNK_FLOATS // max(samples.times.size, 1))
    for start in range(0, points.size, chunk):
        block = points[start : start + chunk]
        kernel = window(block[:, None] - samples.times[None, :])
        values[start : start + chunk] = kernel @ samples.values / samples.lam

    if samples.times.size == 0 or points.size == 0:
        return Reconstruction(values=values, tail=0.0)
    T = float(np.max(np.abs(samples.times)))
    margin = T - float(np.max(np.abs(points)))
    if margin <= 0.0:
        return Reconstruction(values=values, tail=float("inf"))
    scale = float(np.max(np.abs(samples.values), initial=0.0))
    return Reconstruction(values=values, tail=2.0 * scale * tail_mass(window, margin))


def interior_grid(T: float, step: float = 0.01) -> np.ndarray:
    """Evaluation grid ``[-T/2, T/2]`` keeping a T/2 margin from the truncation."""
    half = T / 2.0
    return np.arange(-half, half + step / 2.0, step)


def run_sd_pipeline(
    f: BandlimitedSignal,
    lam: float,
    T: float,
    grid: Optional[Sequence[float]] = None,
    window: Optional[SpectralWindow] = None,
) -> SigmaDeltaRun:
    """Sample, one-bit quantize and reconstruct *f*; compare to ``||rho'||_1 / lam``."""
    if f.sup_norm_estimate > 1.0:
        raise FrameInputError(
            f"signal sup norm {f.sup_norm_estimate:.4f} exceeds 1; Sigma-Delta needs |f| <= 1"
        )
    window = window or window_rho(lam)
    points = np.asarray(grid, dtype=float) if grid is not None else interior_grid(T)
    samples = sample(f, lam, T)
    output = sigma_delta(np.clip(samples.values, -1.0, 1.0))
    bits = Samples(times=samples.times, values=output.bits.astype(float), lam=lam)
    rebuilt = reconstruct_expansion(bits, window, points)

    exact = f(points)
    errors = np.abs(exact - rebuilt.values)
    max_error = float(np.max(errors)) if errors.size else 0.0
    bound = window.rho_prime_L1 / lam
    margin = T - float(np.max(np.abs(points))) if points.size else T
    tail = (2.0 * f.sup_norm_estimate + 1.0) * tail_mass(window, margin)
    report = SigmaDeltaReport(
        lam=lam,
        T=T,
        rho_prime_L1=window.rho_prime_L1,
        max_error=max_error,
        bound=bound,
        tail=tail,
        passed=max_error <= bound + tail,
    )
    if not report.passed:
        log_data = {"event": "sigma_delta_bound_failed", **report.model_dump(by_alias=True)}
        logger.warning(json.dumps(log_data))
    table = pd.DataFrame(
        {"x": points, "f_exact": exact, "f_reconstructed": rebuilt.values, "error": errors}
    )
    return SigmaDeltaRun(report=report, table=table)


def sd_pipeline(
    f: BandlimitedSignal,
    lam: float,
    T: float,
    grid: Optional[Sequence[float]] = None,
    window: Optional[SpectralWindow] = None,
) -> SigmaDeltaReport:
    return run_sd_pipeline(f, lam, T, grid, window).report


def sd_pipeline_curve(
    f: BandlimitedSignal,
    lams: Sequence[float],
    T: float,
    family: Optional[str] = None,
    edge: Optional[float] = None,
) -> List[SigmaDeltaReport]:
    """Pipeline reports for several oversampling rates on one interior grid."""
    grid = interior_grid(T)
    return [sd_pipeline(f, lam, T, grid, window_rho(lam, family, edge)) for lam in lams]
