import json

import numpy as np
import pandas as pd
import pytest

from frameq.errors import FrameInputError
from frameq.frame_constructions import dyadic_frame, orthonormal_frame
from frameq.models import ExperimentRecord, QuantizationResult
from frameq.reporting import (
    SWEEP_COLUMNS,
    append_run_log,
    load_frame,
    output_path,
    read_json,
    records_to_frame,
    result_to_dict,
    save_frame,
    write_csv,
    write_manifest,
)


def test_frame_file_keeps_vectors_and_provenance(tmp_path):
    frame = dyadic_frame(orthonormal_frame(3, p=np.inf), 2)
    path = save_frame(frame, tmp_path / "frame.json", manifest_hash="f" * 64)
    payload = json.loads(path.read_text())
    assert payload["norm"] == {"kind": "lp", "p": "inf"}
    assert payload["manifest_hash"] == "f" * 64

    loaded = load_frame(path)
    np.testing.assert_array_equal(loaded.synthesis, frame.synthesis)
    np.testing.assert_array_equal(loaded.analysis, frame.analysis)
    assert loaded.ambient_norm.p == np.inf
    assert loaded.construction == frame.construction


@pytest.mark.parametrize(
    "content",
    [
        "[1, 2]",
        "{broken",
        json.dumps({"analysis": [[1.0]]}),
        json.dumps({"synthesis": [[1.0, 0.0]], "analysis": [[1.0]]}),
        json.dumps({"n": 3, "synthesis": [[1.0]], "analysis": [[1.0]]}),
        json.dumps({"norm": {"kind": "z_sign_max"}, "synthesis": [[1.0]], "analysis": [[1.0]]}),
    ],
)
def test_bad_frame_files(tmp_path, content):
    path = tmp_path / "frame.json"
    path.write_text(content)
    with pytest.raises(FrameInputError):
        load_frame(path)


def test_missing_file(tmp_path):
    with pytest.raises(FrameInputError):
        read_json(tmp_path / "absent.json")


def test_sweep_table_columns(tmp_path):
    record = ExperimentRecord(
        n=4, N=24, delta=1.0, C=3.0, epsilon_target=1.5, epsilon_measured=0.7, worst_coeff=1.0,
        bound_values={"thm56_N_lower": 1.2}, passed=True, seed=9,
    )
    df = records_to_frame([record])
    assert list(df.columns) == SWEEP_COLUMNS
    path = write_csv(df, tmp_path / "sweep.csv")
    loaded = pd.read_csv(path)
    assert loaded.loc[0, "thm56_N_lower"] == 1.2
    assert pd.isna(loaded.loc[0, "eq433_lnN"])
    assert pd.isna(loaded.loc[0, "cardinality"])
    assert bool(loaded.loc[0, "pass"])


def test_result_dict_drops_target():
    result = QuantizationResult(
        k=[1], delta=1.0, error=0.0, coeff_bound=1.0, algorithm="round", target=[1.0]
    )
    payload = result_to_dict(result, manifest_hash="abc")
    assert "target" not in payload
    assert "z_norm_value" not in payload
    assert payload["manifest_hash"] == "abc"


def test_manifest_and_run_log(tmp_path):
    digest = "0123456789abcdef" * 4
    path = write_manifest({"command": "sweep"}, digest, tmp_path)
    assert path == output_path(tmp_path, "manifest", digest, "json")
    assert path.name == "manifest-0123456789ab.json"
    assert json.loads(path.read_text())["manifest_hash"] == digest

    append_run_log(tmp_path / "logs", {"status": "started"})
    append_run_log(tmp_path / "logs", {"status": "success"})
    lines = (tmp_path / "logs" / "run_log.jsonl").read_text().splitlines()
    assert [json.loads(line)["status"] for line in lines] == ["started", "success"]
