"""Command line interface for frameq experiments.

Every subcommand resolves its parameters (CLI flag, then the command's block
in ``--config``, then the model default), hashes the resolved manifest and
writes its outputs as ``<stem>-<hash12>.<ext>`` into the output directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, NamedTuple, Optional, Tuple, Type, get_args

import numpy as np
import pandas as pd
from pydantic import AliasChoices, BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import __version__, tolerances
from .bandlimited_lab import (
    BandlimitedSignal,
    WindowFamily,
    interior_grid,
    run_sd_pipeline,
    sd_pipeline_curve,
    verify_window,
    window_rho,
)
from .bounds_lab import (
    PowerLaw,
    QuantizedSet,
    SweepConfig,
    counting_lower_bound,
    density_check,
    enumerate_quantized_set,
    frame_length_lower_bound,
    monte_carlo_volume_ratio,
    scaling_sweep,
    volume_counting_check,
    volume_ratio_bound,
    volume_ratio_bound2,
)
from .config import apply_config, load_config
from .errors import ContractViolation, FrameInputError
from .frame_constructions import (
    ball_grid,
    dense_pm1_frame,
    dense_schauder_frame,
    dyadic_frame,
    expand_frame,
    kashin_frame,
    kashin_from_frame,
    kashin_tightness,
    net_augmented_frame,
    orthonormal_frame,
    two_onb_union,
)
from .frame_core import ZVariant, check_reconstruction, frame_bounds
from .helpers import default_seed, lp_norms, make_rng, manifest_hash, sample_ball
from .models import Frame, NormSpec, QuantizationResult, QuantizerConfig
from .quantizers import (
    IterativeQuantizer,
    IterativeQuantizerConfig,
    coefficient_quantizer,
    kashin_quantize,
    measure_base_constants,
    round_quantize,
    round_quantizer,
    verify_result,
)
from .reporting import (
    append_run_log,
    load_frame,
    output_path,
    read_json,
    records_to_frame,
    records_to_json,
    result_to_dict,
    save_frame,
    write_csv,
    write_json,
    write_manifest,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONTRACT = 3
DEFAULT_OUTPUT_DIR = "results"

_GLOBAL_DESTS = {"command", "config", "settings", "seed", "output_dir", "format", "log_level"}


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


FrameKind = Literal[
    "orthonormal",
    "two_onb",
    "dense_pm1",
    "dense_schauder",
    "dyadic",
    "kashin",
    "expand",
    "net_augment",
]


class BuildFrameParams(_Params):
    kind: FrameKind
    n: Optional[int] = Field(default=None, ge=1)
    N: Optional[int] = Field(default=None, ge=1)
    m: Optional[int] = Field(default=None, ge=1)
    L: Optional[int] = Field(default=None, ge=1)
    eps: Optional[List[float]] = None
    grid_step: float = Field(default=0.25, gt=0.0, le=1.0)
    p: float = Field(default=2.0, ge=1.0)
    base: Optional[str] = None
    matrix: Optional[str] = None
    net: Optional[str] = None
    trial_samples: int = Field(default=128, ge=1)
    samples: int = Field(default=100, ge=1)


class QuantizeParams(_Params):
    frame: str
    algorithm: Literal["round", "dyadic", "kashin", "iterative"]
    delta: float = Field(default=1.0, gt=0.0, le=1.0)
    x: Optional[List[float]] = None
    coefficients: Optional[List[float]] = None
    scale: float = Field(default=1.0, gt=0.0)
    epsilon: Optional[float] = Field(default=None, gt=0.0)
    C: Optional[float] = Field(default=None, ge=1.0)
    delta0: float = Field(default=0.5, gt=0.0, le=1.0)
    q0: float = Field(default=0.5, gt=0.0, lt=1.0)
    C0: Optional[float] = Field(default=None, ge=1.0)
    level: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _one_source(self) -> QuantizeParams:
        if self.x is not None and self.coefficients is not None:
            raise ValueError("give either x or coefficients, not both")
        return self


class DensityParams(_Params):
    set_path: Optional[str] = Field(default=None, validation_alias=AliasChoices("set", "set_path"))
    frame: Optional[str] = None
    delta: float = Field(default=1.0, gt=0.0)
    C: float = Field(default=1.0, ge=0.0)
    coeff_cap: int = Field(default=2, ge=0)
    z: ZVariant = "interval_max"
    samples: int = Field(default=10_000, ge=1)
    slack: float = Field(default=0.1, ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def _one_source(self) -> DensityParams:
        if (self.set_path is None) == (self.frame is None):
            raise ValueError("give exactly one of set or frame")
        return self


class SweepParams(SweepConfig):
    dims: List[int] = Field(default_factory=lambda: [2, 4, 8, 16, 32])
    kind: Literal["dyadic", "kashin"] = "dyadic"
    quantizer: Optional[Literal["round", "dyadic", "kashin"]] = None


class SigmaDeltaParams(_Params):
    lam: float = Field(default=4.0, gt=1.0, validation_alias=AliasChoices("lambda", "lam"))
    T: float = Field(default=50.0, gt=0.0)
    signal: Literal["demo"] = "demo"
    components: Optional[List[Tuple[float, float]]] = None
    family: Optional[WindowFamily] = None
    edge: Optional[float] = Field(default=None, gt=1.0)
    grid_step: float = Field(default=0.01, gt=0.0)
    lams: Optional[List[float]] = None


class BoundEvalParams(_Params):
    bound: Literal["counting", "frame_length", "volume", "volume2", "volume_mc"]
    n: int = Field(default=2, ge=1)
    epsilon: float = Field(default=0.5, gt=0.0, lt=1.0)
    delta: float = Field(default=1.0, gt=0.0)
    C: float = Field(default=3.0, gt=0.0)
    K_Z: float = Field(default=1.0, ge=1.0)
    q: float = Field(default=2.0, ge=2.0)
    C_q: float = Field(default=1.0, gt=0.0)
    d: float = Field(default=1.0, gt=0.0)
    A: float = Field(default=1.0, gt=0.0)
    f_scale: float = Field(default=1.0, gt=0.0)
    f_exponent: float = Field(default=1.0, gt=0.0)
    outer_p: float = Field(default=math.inf, ge=1.0)
    inner_p: float = Field(default=2.0, ge=1.0)
    samples: int = Field(default=200_000, ge=1)


class RunConfig(BaseModel):
    """Contents of a ``--config`` file: globals plus one block per subcommand."""

    model_config = ConfigDict(extra="forbid")

    seed: Optional[int] = None
    output_dir: Optional[str] = None
    format: Optional[Literal["csv", "json"]] = None
    build_frame: Dict[str, Any] = Field(default_factory=dict)
    quantize: Dict[str, Any] = Field(default_factory=dict)
    density: Dict[str, Any] = Field(default_factory=dict)
    sweep: Dict[str, Any] = Field(default_factory=dict)
    sigma_delta: Dict[str, Any] = Field(default_factory=dict)
    bound_eval: Dict[str, Any] = Field(default_factory=dict)


class RunContext(NamedTuple):
    run_id: str
    command: str
    seed: int
    output_dir: Path
    fmt: str
    manifest_hash: str

    def path(self, stem: str, suffix: str) -> Path:
        return output_path(self.output_dir, stem, self.manifest_hash, suffix)


class Command(NamedTuple):
    params: Type[BaseModel]
    block: str
    run: Callable[[Any, RunContext], bool]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _log_run(ctx: RunContext, status: str, **extra: Any) -> None:
    entry = {
        "run_id": ctx.run_id,
        "command": ctx.command,
        "status": status,
        "manifest_hash": ctx.manifest_hash,
        "start_time" if status == "started" else "end_time": _now(),
    }
    entry.update(extra)
    append_run_log(ctx.output_dir, entry)


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, default=str))


def _write_row(ctx: RunContext, stem: str, row: Dict[str, Any]) -> Path:
    """One-row table in the run's format."""
    if ctx.fmt == "csv":
        return write_csv(pd.DataFrame([row]), ctx.path(stem, "csv"))
    return write_json({**row, "manifest_hash": ctx.manifest_hash}, ctx.path(stem, "json"))


# build-frame


def _require(params: BuildFrameParams, *names: str) -> List[int]:
    values = []
    for name in names:
        value = getattr(params, name)
        if value is None:
            raise FrameInputError(f"build-frame --kind {params.kind} needs --{name}")
        values.append(value)
    return values


def _base_frame(params: BuildFrameParams) -> Frame:
    if params.base:
        return load_frame(params.base)
    (n,) = _require(params, "n")
    return orthonormal_frame(n, params.p)


def _construct(params: BuildFrameParams, seed: int) -> Tuple[Frame, Dict[str, Any]]:
    kind = params.kind
    if kind == "orthonormal":
        (n,) = _require(params, "n")
        return orthonormal_frame(n, params.p), {}
    if kind == "two_onb":
        (n,) = _require(params, "n")
        union = two_onb_union(n, params.eps or [0.25] * (n // 2))
        return union.frame, {"differences": union.differences.tolist()}
    if kind == "dense_pm1":
        n, L = _require(params, "n", "L")
        return dense_pm1_frame(n, L), {}
    if kind == "dense_schauder":
        (n,) = _require(params, "n")
        return dense_schauder_frame(n, params.grid_step, seed), {}
    if kind == "dyadic":
        (m,) = _require(params, "m")
        return dyadic_frame(_base_frame(params), m), {}
    if kind == "kashin":
        n, N = _require(params, "n", "N")
        kf = kashin_frame(n, N, seed, params.trial_samples)
        return kf.to_frame(), {"tightness": kashin_tightness(kf).model_dump(), "K_hat": kf.K_hat}
    if kind == "expand":
        if not params.matrix:
            raise FrameInputError("build-frame --kind expand needs --matrix")
        base = _base_frame(params)
        payload = read_json(params.matrix)
        if "V" not in payload:
            raise FrameInputError(f"{params.matrix} lacks 'V'")
        y = payload.get("y", np.eye(base.N))
        y_norm = NormSpec.lp(payload["y_p"]) if "y_p" in payload else None
        return expand_frame(base, y, payload["V"], y_norm), {}
    base = _base_frame(params)
    if params.net:
        points = read_json(params.net).get("points", [])
    else:
        points = ball_grid(base.n, params.grid_step, base.ambient_norm.p)
    return net_augmented_frame(base, points, seed=seed), {}


def _cmd_build_frame(params: BuildFrameParams, ctx: RunContext) -> bool:
    frame, extras = _construct(params, ctx.seed)
    bounds = frame_bounds(frame)
    error = check_reconstruction(frame, params.samples, ctx.seed)
    frame_file = save_frame(frame, ctx.path(f"frame-{frame.kind}", "json"), ctx.manifest_hash)
    summary = {
        "kind": frame.kind,
        "n": frame.n,
        "N": frame.N,
        "bounds": bounds.model_dump(),
        "reconstruction_error": error,
        "frame_file": frame_file.name,
        **extras,
    }
    write_json({**summary, "manifest_hash": ctx.manifest_hash}, ctx.path("build-frame", "json"))
    summary.pop("differences", None)
    _emit(summary)
    return True


# quantize


def _iterative_result(frame: Frame, params: QuantizeParams, x: np.ndarray, seed: int) -> QuantizationResult:
    base = round_quantizer(frame)
    C0 = params.C0
    if C0 is None:
        # sampled constant plus the worst rounding slack of delta0 / 2 per atom
        measured = measure_base_constants(base, frame, params.delta0, seed=seed)
        slack = params.delta0 / 2.0 * float(np.sum(lp_norms(frame.synthesis, frame.ambient_norm.p)))
        C0 = max(1.0, measured.C0 + slack)
    config = IterativeQuantizerConfig.from_base(params.delta0, C0, params.q0)
    return IterativeQuantizer(base, config, frame, seed=seed)(x)


def _cmd_quantize(params: QuantizeParams, ctx: RunContext) -> bool:
    frame = load_frame(params.frame)
    rng = make_rng(ctx.seed)
    algorithm = params.algorithm

    if algorithm == "iterative":
        if params.coefficients is not None:
            raise FrameInputError("the iterative quantizer takes --x, not --coefficients")
        x = (
            np.asarray(params.x, dtype=float)
            if params.x is not None
            else params.scale * sample_ball(rng, 1, frame.n, frame.ambient_norm.p)[0]
        )
        result = _iterative_result(frame, params, x, ctx.seed)
    else:
        quantizer = coefficient_quantizer(algorithm, frame, params.delta)
        if params.x is not None:
            if algorithm == "dyadic":
                raise FrameInputError("the dyadic quantizer takes --coefficients, not --x")
            if algorithm == "kashin":
                result = kashin_quantize(kashin_from_frame(frame), params.x, params.delta, params.level)
            else:
                result = round_quantize(frame, params.x, params.delta)
        else:
            a = (
                np.asarray(params.coefficients, dtype=float)
                if params.coefficients is not None
                else rng.uniform(-1.0, 1.0, size=frame.N)
            )
            result = quantizer(frame, a)

    verify_result(frame, result)
    target = QuantizerConfig(
        delta=result.delta,
        C=params.C if params.C is not None else math.inf,
        epsilon_target=params.epsilon if params.epsilon is not None else math.inf,
    )
    passed = result.passes(target)
    payload = result_to_dict(result, ctx.manifest_hash)
    payload.update({"epsilon_target": params.epsilon, "C_target": params.C, "pass": passed})
    write_json(payload, ctx.path("quantize", "json"))
    _emit(
        {
            "algorithm": result.algorithm,
            "error": result.error,
            "coeff_bound": result.coeff_bound,
            "z_norm": result.z_norm_value,
            "pass": passed,
        }
    )
    return passed


# density


def _load_set(params: DensityParams) -> Tuple[QuantizedSet, NormSpec]:
    payload = read_json(params.set_path)
    points = np.asarray(payload.get("points", []), dtype=float)
    if points.ndim != 2 or points.shape[0] == 0:
        raise FrameInputError(f"{params.set_path} holds no points")
    qset = QuantizedSet(
        points=points,
        coefficients=np.asarray(payload.get("coefficients", np.zeros((len(points), 0))), dtype=np.int64),
        delta=float(payload.get("delta", params.delta)),
        C=float(payload.get("C", params.C)),
        z_kind=str(payload.get("z_kind", "given")),
        coeff_cap=int(payload.get("coeff_cap", 0)),
    )
    return qset, NormSpec.lp(payload.get("p", 2.0))


def _cmd_density(params: DensityParams, ctx: RunContext) -> bool:
    if params.set_path:
        qset, ambient = _load_set(params)
    else:
        frame = load_frame(params.frame)
        z = NormSpec.z_interval(frame) if params.z == "interval_max" else NormSpec.z_sign(frame)
        qset = enumerate_quantized_set(frame, params.delta, params.C, z, params.coeff_cap)
        ambient = frame.ambient_norm
        write_json(
            {
                "points": qset.points.tolist(),
                "coefficients": qset.coefficients.tolist(),
                "delta": qset.delta,
                "C": qset.C,
                "z_kind": qset.z_kind,
                "coeff_cap": qset.coeff_cap,
                "p": ambient.p,
                "manifest_hash": ctx.manifest_hash,
            },
            ctx.path("set", "json"),
        )

    density = density_check(qset, ambient, params.samples, ctx.seed)
    counting = volume_counting_check(qset, density.epsilon_hat, qset.points.shape[1], params.slack)
    row = {
        "epsilon_hat": density.epsilon_hat,
        "samples": density.samples,
        "seed": density.seed,
        "cardinality": density.cardinality,
        "required": counting.required,
        "slack": counting.slack,
        "pass": counting.passed,
    }
    _write_row(ctx, "density", row)
    _emit(row)
    return counting.passed


# sweep


def _cmd_sweep(params: SweepParams, ctx: RunContext) -> bool:
    records = scaling_sweep(params.dims, params.kind, params.quantizer, params, ctx.seed)
    table = records_to_frame(records)
    write_csv(table, ctx.path("sweep", "csv"))
    if ctx.fmt == "json":
        write_json(
            records_to_json(records, params.bound_params.model_dump(), ctx.manifest_hash),
            ctx.path("sweep", "json"),
        )
    print(table.to_string(index=False))
    return all(record.passed for record in records)


def _nest_bound_params(values: Dict[str, Any], flags: Dict[str, Any]) -> None:
    nested = {key: flags.pop(key) for key in ("q", "C_q", "K_Z") if key in flags}
    if nested:
        values["bound_params"] = {**dict(values.get("bound_params") or {}), **nested}


# sigma-delta


def _cmd_sigma_delta(params: SigmaDeltaParams, ctx: RunContext) -> bool:
    signal = (
        BandlimitedSignal(components=params.components)
        if params.components
        else BandlimitedSignal.demo()
    )
    window = window_rho(params.lam, params.family, params.edge)
    window_check = verify_window(window)
    run = run_sd_pipeline(signal, params.lam, params.T, interior_grid(params.T, params.grid_step), window)
    write_csv(run.table, ctx.path("sigma-delta-table", "csv"))

    row = run.report.model_dump(by_alias=True)
    row.update(
        {
            "family": window.family,
            "edge": window.edge,
            "window_flat_error": window_check.flat_error,
            "window_stop_error": window_check.stop_error,
        }
    )
    _write_row(ctx, "sigma-delta", row)
    if params.lams:
        curve = sd_pipeline_curve(signal, params.lams, params.T, params.family, params.edge)
        write_csv(
            pd.DataFrame([report.model_dump(by_alias=True) for report in curve]),
            ctx.path("sigma-delta-curve", "csv"),
        )
    if not window_check.passed:
        logger.warning(
            "Window check failed: flat %.3g, stop %.3g", window_check.flat_error, window_check.stop_error
        )
    _emit(row)
    return run.report.passed


# bound-eval


def _cmd_bound_eval(params: BoundEvalParams, ctx: RunContext) -> bool:
    unnormalized = False
    if params.bound == "counting":
        growth = PowerLaw(scale=params.f_scale, exponent=params.f_exponent)
        value = counting_lower_bound(
            params.n, params.epsilon, params.delta, params.C, params.K_Z, growth
        )
    elif params.bound == "frame_length":
        value = frame_length_lower_bound(params.n, params.q, params.C, params.delta)
    elif params.bound == "volume":
        value = volume_ratio_bound(params.n, params.q, params.C_q, params.d)
        unnormalized = params.d == 1.0
    elif params.bound == "volume2":
        value = volume_ratio_bound2(params.C_q, params.A)
        unnormalized = params.A == 1.0
    else:
        value = monte_carlo_volume_ratio(
            params.outer_p, params.inner_p, params.n, params.samples, ctx.seed
        )
    row = {"bound": params.bound, "n": params.n, "value": value, "unnormalized": unnormalized}
    _write_row(ctx, "bound-eval", row)
    _emit(row)
    return True


COMMANDS: Dict[str, Command] = {
    "build-frame": Command(BuildFrameParams, "build_frame", _cmd_build_frame),
    "quantize": Command(QuantizeParams, "quantize", _cmd_quantize),
    "density": Command(DensityParams, "density", _cmd_density),
    "sweep": Command(SweepParams, "sweep", _cmd_sweep),
    "sigma-delta": Command(SigmaDeltaParams, "sigma_delta", _cmd_sigma_delta),
    "bound-eval": Command(BoundEvalParams, "bound_eval", _cmd_bound_eval),
}


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from exc


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="JSON run configuration with one block per command")
    common.add_argument(
        "--settings", default=None, help="Settings file with tolerances and window defaults"
    )
    common.add_argument("--seed", type=int, default=None, help="Random seed (default: FRAMEQ_SEED or 0)")
    common.add_argument("--output-dir", default=None, help="Directory for results and the run log")
    common.add_argument("--format", choices=["csv", "json"], default=None, help="Table format")
    common.add_argument("--log-level", default="WARNING", help="Logging level")

    parser = argparse.ArgumentParser(prog="frameq", description="Frame quantization experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name,
            parents=[common],
            help=help_text,
            allow_abbrev=False,
            argument_default=argparse.SUPPRESS,
        )

    build = add("build-frame", "Build and serialize a frame")
    build.add_argument("--kind", choices=get_args(FrameKind))
    build.add_argument("--n", type=int, help="Dimension")
    build.add_argument("--N", type=int, help="Frame length (kashin)")
    build.add_argument("--m", type=int, help="Digits per coordinate (dyadic)")
    build.add_argument("--L", type=int, help="Truncation level (dense_pm1)")
    build.add_argument("--eps", type=_float_list, help="Rotation parameters (two_onb)")
    build.add_argument("--grid-step", type=float, help="Net step (dense_schauder, net_augment)")
    build.add_argument("--p", type=float, help="Ambient l_p exponent of an orthonormal base")
    build.add_argument("--base", help="Base frame file (dyadic, expand, net_augment)")
    build.add_argument("--matrix", help="JSON file with V (and optionally y, y_p) for expand")
    build.add_argument("--net", help="JSON file with net points for net_augment")
    build.add_argument("--trial-samples", type=int, help="Directions for the Kashin constant estimate")
    build.add_argument("--samples", type=int, help="Reconstruction check samples")

    quantize = add("quantize", "Quantize a vector or coefficient vector on a frame")
    quantize.add_argument("--frame", help="Frame file")
    quantize.add_argument("--algorithm", choices=get_args(QuantizeParams.model_fields["algorithm"].annotation))
    quantize.add_argument("--delta", type=float)
    quantize.add_argument("--x", type=_float_list, help="Target vector")
    quantize.add_argument("--coefficients", type=_float_list, help="Coefficients in [-1, 1]")
    quantize.add_argument("--scale", type=float, help="Norm scale of a random target (iterative)")
    quantize.add_argument("--epsilon", type=float, help="Error target for the pass check")
    quantize.add_argument("--C", type=float, help="Coefficient bound for the pass check")
    quantize.add_argument("--delta0", type=float, help="Base step (iterative)")
    quantize.add_argument("--q0", type=float, help="Base error (iterative)")
    quantize.add_argument("--C0", type=float, help="Base Z-norm constant (iterative)")
    quantize.add_argument("--level", type=float, help="Kashin level (default: escalate from K_hat)")

    density = add("density", "Measure the density of a quantized set")
    density.add_argument("--set", dest="set", help="JSON file with points")
    density.add_argument("--frame", help="Frame file to enumerate from")
    density.add_argument("--delta", type=float)
    density.add_argument("--C", type=float)
    density.add_argument("--coeff-cap", type=int)
    density.add_argument("--z", choices=get_args(ZVariant))
    density.add_argument("--samples", type=int)
    density.add_argument("--slack", type=float)

    sweep = add("sweep", "Run the frame-length scaling sweep")
    sweep.add_argument("--dims", type=_int_list, help="Comma separated dimensions")
    sweep.add_argument("--kind", choices=["dyadic", "kashin"])
    sweep.add_argument("--quantizer", choices=["round", "dyadic", "kashin"])
    sweep.add_argument("--delta", type=float)
    sweep.add_argument("--C", type=float)
    sweep.add_argument("--epsilon", type=float)
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--kashin-ratio", type=int)
    sweep.add_argument("--timing", action="store_true")
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--q", type=float, help="Cotype index")
    sweep.add_argument("--C-q", type=float, help="Cotype constant")
    sweep.add_argument("--K-Z", type=float, help="Projection constant")

    sd = add("sigma-delta", "Run the Sigma-Delta reconstruction pipeline")
    sd.add_argument("--lambda", dest="lambda", type=float, help="Oversampling rate")
    sd.add_argument("--T", type=float, help="Sampling half width")
    sd.add_argument("--signal", choices=["demo"])
    sd.add_argument("--family", choices=get_args(WindowFamily))
    sd.add_argument("--edge", type=float, help="Window roll-off edge in multiples of pi")
    sd.add_argument("--grid-step", type=float)
    sd.add_argument("--lams", type=_float_list, help="Extra oversampling rates for an error curve")

    bound = add("bound-eval", "Evaluate a counting, frame-length or volume bound")
    bound.add_argument(
        "--bound", choices=get_args(BoundEvalParams.model_fields["bound"].annotation)
    )
    bound.add_argument("--n", type=int)
    bound.add_argument("--epsilon", type=float)
    bound.add_argument("--delta", type=float)
    bound.add_argument("--C", type=float)
    bound.add_argument("--K-Z", type=float)
    bound.add_argument("--q", type=float)
    bound.add_argument("--C-q", type=float)
    bound.add_argument("--d", type=float, help="Universal constant (default 1, unnormalized)")
    bound.add_argument("--A", type=float, help="Universal constant (default 1, unnormalized)")
    bound.add_argument("--f-scale", type=float)
    bound.add_argument("--f-exponent", type=float)
    bound.add_argument("--outer-p", type=float)
    bound.add_argument("--inner-p", type=float)
    bound.add_argument("--samples", type=int)
    return parser


def _load_run_config(path: Optional[str]) -> RunConfig:
    if not path:
        return RunConfig()
    return RunConfig.model_validate(read_json(path))


def _resolve_params(args: argparse.Namespace, run_config: RunConfig) -> BaseModel:
    command = COMMANDS[args.command]
    values = dict(getattr(run_config, command.block))
    flags = {key: value for key, value in vars(args).items() if key not in _GLOBAL_DESTS}
    if args.command == "sweep":
        _nest_bound_params(values, flags)
    if args.command == "sigma-delta" and "lambda" in flags:
        values.pop("lam", None)
    values.update(flags)
    return command.params.model_validate(values)


def _execute(command: Command, params: BaseModel, ctx: RunContext, manifest: Dict[str, Any]) -> int:
    _log_run(ctx, "started", seed=ctx.seed)
    try:
        write_manifest(manifest, ctx.manifest_hash, ctx.output_dir)
        passed = command.run(params, ctx)
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        if exc.details:
            print(json.dumps(exc.details, sort_keys=True, default=str), file=sys.stderr)
        _log_run(ctx, "failed", error=str(exc))
        return EXIT_CONTRACT
    except (FrameInputError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _log_run(ctx, "error", error=str(exc))
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - logging side effect
        _log_run(ctx, "error", error=str(exc))
        logger.error("Error during execution: %s", exc)
        raise

    _log_run(ctx, "success" if passed else "failed")
    return EXIT_OK if passed else EXIT_CONTRACT


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        if args.settings:
            apply_config(load_config(Path(args.settings)))
        run_config = _load_run_config(args.config)
        params = _resolve_params(args, run_config)
        seed = args.seed if args.seed is not None else run_config.seed
        if seed is None:
            seed = default_seed(0)
        output_dir = Path(args.output_dir or run_config.output_dir or DEFAULT_OUTPUT_DIR)
        fmt = args.format or run_config.format or "csv"
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    manifest = {
        "command": args.command,
        "params": params.model_dump(mode="json"),
        "seed": seed,
        "format": fmt,
        "tolerances": tolerances.get_tolerances(),
        "version": __version__,
    }
    digest = manifest_hash(manifest)
    ctx = RunContext(
        run_id=uuid.uuid4().hex,
        command=args.command,
        seed=seed,
        output_dir=output_dir,
        fmt=fmt,
        manifest_hash=digest,
    )
    logger.info("Running %s with manifest %s", args.command, digest[:12])
    return _execute(COMMANDS[args.command], params, ctx, manifest)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
