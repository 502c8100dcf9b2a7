"""Reading and writing frames, results, sweep tables and run metadata."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import pandas as pd
from filelock import FileLock
from pydantic import ValidationError

from .errors import FrameInputError
from .helpers import canonical_json
from .models import ConstructionInfo, ExperimentRecord, Frame, NormSpec, QuantizationResult

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SWEEP_COLUMNS = [
    "n",
    "N",
    "delta",
    "C",
    "epsilon_target",
    "epsilon_measured",
    "worst_coeff",
    "cardinality",
    "eq433_lnN",
    "thm56_N_lower",
    "pass",
    "seed",
    "wall_ms",
]

PIPELINE_COLUMNS = ["x", "f_exact", "f_reconstructed", "error"]


def _lock(path: Path) -> FileLock:
    return FileLock(str(path) + ".lock")


def frame_to_dict(frame: Frame, manifest_hash: Optional[str] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "n": frame.n,
        "N": frame.N,
        "norm": frame.ambient_norm.to_json_dict(),
        "synthesis": frame.synthesis.tolist(),
        "analysis": frame.analysis.tolist(),
        "construction": frame.construction.model_dump() if frame.construction else None,
    }
    if manifest_hash:
        payload["manifest_hash"] = manifest_hash
    return payload


def frame_from_dict(payload: Dict[str, Any]) -> Frame:
    """Rebuild a frame from its JSON form, checking the recorded dimensions."""
    try:
        norm = payload.get("norm") or {"kind": "lp", "p": 2.0}
        if norm.get("kind", "lp") != "lp":
            raise FrameInputError("serialized frames must use an lp ambient norm")
        construction = payload.get("construction")
        frame = Frame(
            synthesis=payload["synthesis"],
            analysis=payload["analysis"],
            ambient_norm=NormSpec.lp(norm.get("p", 2.0)),
            construction=ConstructionInfo(**construction) if construction else None,
        )
    except KeyError as exc:
        raise FrameInputError(f"frame file lacks {exc.args[0]!r}") from exc
    except ValidationError as exc:
        raise FrameInputError(f"malformed frame: {exc}") from exc
    if payload.get("n", frame.n) != frame.n or payload.get("N", frame.N) != frame.N:
        raise FrameInputError("recorded n/N do not match the stored vectors")
    return frame


def write_json(payload: Dict[str, Any], path: PathLike) -> Path:
    """Write *payload* as pretty JSON with sorted keys under a file lock."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(json.loads(canonical_json(payload)), indent=2, sort_keys=True)
    with _lock(target):
        target.write_text(text + "\n", encoding="utf-8")
    logger.info("Wrote %s", target)
    return target


def read_json(path: PathLike) -> Dict[str, Any]:
    """Load a JSON object; unreadable or malformed files are input errors."""
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise FrameInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FrameInputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise FrameInputError(f"{path} must hold a JSON object")
    return payload


def save_frame(frame: Frame, path: PathLike, manifest_hash: Optional[str] = None) -> Path:
    return write_json(frame_to_dict(frame, manifest_hash), path)


def load_frame(path: PathLike) -> Frame:
    return frame_from_dict(read_json(path))


def result_to_dict(
    result: QuantizationResult, manifest_hash: Optional[str] = None
) -> Dict[str, Any]:
    payload = result.model_dump(exclude={"target"})
    if payload.get("z_norm_value") is None:
        payload.pop("z_norm_value", None)
    if manifest_hash:
        payload["manifest_hash"] = manifest_hash
    return payload


def records_to_frame(records: Iterable[ExperimentRecord]) -> pd.DataFrame:
    """Sweep records as a table with the fixed CSV column order."""
    rows = []
    for record in records:
        rows.append(
            {
                "n": record.n,
                "N": record.N,
                "delta": record.delta,
                "C": record.C,
                "epsilon_target": record.epsilon_target,
                "epsilon_measured": record.epsilon_measured,
                "worst_coeff": record.worst_coeff,
                "cardinality": record.cardinality,
                "eq433_lnN": record.bound_values.get("eq433_lnN"),
                "thm56_N_lower": record.bound_values.get("thm56_N_lower"),
                "pass": record.passed,
                "seed": record.seed,
                "wall_ms": record.wall_ms,
            }
        )
    df = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    return df.astype({"cardinality": "Int64"})


def write_csv(df: pd.DataFrame, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with _lock(target):
        df.to_csv(target, index=False, encoding="utf-8", lineterminator="\n")
    logger.info("Exported %d rows to %s", len(df), target)
    return target


def records_to_json(
    records: List[ExperimentRecord],
    bound_params: Dict[str, Any],
    manifest_hash: Optional[str] = None,
) -> Dict[str, Any]:
    """JSON mirror of a sweep with the bound parameters used for every row."""
    rows = []
    for record in records:
        row = record.model_dump()
        row["cotype_q"] = bound_params.get("q")
        rows.append(row)
    payload: Dict[str, Any] = {"records": rows, "bound_params": bound_params}
    if manifest_hash:
        payload["manifest_hash"] = manifest_hash
    return payload


def output_path(output_dir: PathLike, stem: str, manifest_hash: str, suffix: str) -> Path:
    """``<output_dir>/<stem>-<hash12>.<suffix>``."""
    return Path(output_dir) / f"{stem}-{manifest_hash[:12]}.{suffix}"


def write_manifest(manifest: Dict[str, Any], manifest_hash: str, output_dir: PathLike) -> Path:
    payload = dict(manifest)
    payload["manifest_hash"] = manifest_hash
    return write_json(payload, output_path(output_dir, "manifest", manifest_hash, "json"))


def append_run_log(output_dir: PathLike, entry: Dict[str, Any]) -> None:
    """Append one JSON line to ``<output_dir>/run_log.jsonl``."""
    os.makedirs(output_dir, exist_ok=True)
    log_path = Path(output_dir) / "run_log.jsonl"
    with _lock(log_path):
        with log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
