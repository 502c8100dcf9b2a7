import json
import math

import pandas as pd
import pytest

from frameq.bounds_lab import frame_length_lower_bound
from frameq.cli import EXIT_CONTRACT, EXIT_OK, EXIT_USAGE, main


def _single(directory, pattern):
    matches = sorted(directory.glob(pattern))
    assert len(matches) == 1, matches
    return matches[0]


def _run_log(directory):
    lines = (directory / "run_log.jsonl").read_text(encoding="utf-8").splitlines()
    return [json.loads(line) for line in lines]


def _build(out, *args):
    assert main(["build-frame", "--output-dir", str(out), *args]) == EXIT_OK
    return _single(out, "frame-*.json")


def test_build_kashin_frame_is_tight(tmp_path):
    code = main(["build-frame", "--kind", "kashin", "--n", "16", "--N", "48", "--seed", "7", "--output-dir", str(tmp_path)])
    assert code == EXIT_OK
    summary = json.loads(_single(tmp_path, "build-frame-*.json").read_text())
    assert (summary["n"], summary["N"]) == (16, 48)
    tightness = summary["tightness"]
    assert tightness["a"] == pytest.approx(tightness["b"], rel=1e-9)
    assert summary["K_hat"] >= 1.0
    assert summary["reconstruction_error"] <= 1e-9


def test_build_dyadic_frame_length(tmp_path):
    frame_file = _build(tmp_path, "--kind", "dyadic", "--n", "8", "--m", "7")
    payload = json.loads(frame_file.read_text())
    assert payload["N"] == 112
    assert frame_file.name.startswith("frame-dyadic-")


def test_build_frame_missing_parameter(tmp_path, capsys):
    assert main(["build-frame", "--kind", "dyadic", "--output-dir", str(tmp_path)]) == EXIT_USAGE
    assert "--m" in capsys.readouterr().err
    assert _run_log(tmp_path)[-1]["status"] == "error"


def test_build_frame_needs_kind(tmp_path):
    assert main(["build-frame", "--n", "2", "--output-dir", str(tmp_path)]) == EXIT_USAGE


def test_unknown_flag_is_a_usage_error(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["build-frame", "--kind", "orthonormal", "--bogus", "1"])
    assert excinfo.value.code == 2


def test_manifest_and_run_log(tmp_path):
    _build(tmp_path, "--kind", "orthonormal", "--n", "3")
    manifest_file = _single(tmp_path, "manifest-*.json")
    manifest = json.loads(manifest_file.read_text())
    digest = manifest["manifest_hash"]
    assert manifest["command"] == "build-frame"
    assert manifest["params"]["kind"] == "orthonormal"
    assert "reconstruction_tol" in manifest["tolerances"]
    for path in tmp_path.glob("*.json"):
        assert path.stem.endswith(digest[:12])

    entries = _run_log(tmp_path)
    assert [entry["status"] for entry in entries] == ["started", "success"]
    assert entries[0]["run_id"] == entries[1]["run_id"]
    assert "start_time" in entries[0] and "end_time" in entries[1]


def test_outputs_are_deterministic(tmp_path):
    args = ["--kind", "kashin", "--n", "4", "--N", "12", "--seed", "3", "--trial-samples", "16"]
    first = _build(tmp_path / "a", *args)
    second = _build(tmp_path / "b", *args)
    assert first.name == second.name
    assert first.read_bytes() == second.read_bytes()


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FRAMEQ_SEED", "5")
    assert main(["bound-eval", "--bound", "volume", "--n", "4", "--output-dir", str(tmp_path)]) == EXIT_OK
    assert json.loads(_single(tmp_path, "manifest-*.json").read_text())["seed"] == 5


def test_config_blocks_and_precedence(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"seed": 9, "format": "json", "bound_eval": {"bound": "frame_length", "n": 16}}))
    out = tmp_path / "out"
    assert main(["bound-eval", "--config", str(config), "--output-dir", str(out)]) == EXIT_OK
    row = json.loads(_single(out, "bound-eval-*.json").read_text())
    assert row["value"] == pytest.approx(frame_length_lower_bound(16, 2.0, 3.0, 1.0))

    out2 = tmp_path / "out2"
    code = main(["bound-eval", "--config", str(config), "--n", "8", "--seed", "1", "--output-dir", str(out2)])
    assert code == EXIT_OK
    manifest = json.loads(_single(out2, "manifest-*.json").read_text())
    assert manifest["seed"] == 1
    assert manifest["params"]["n"] == 8


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps({"unknown_block": {}}),
        json.dumps({"bound_eval": {"bound": "volume", "bogus": 1}}),
    ],
)
def test_bad_config_is_a_usage_error(tmp_path, content):
    config = tmp_path / "run.json"
    config.write_text(content)
    code = main(["bound-eval", "--bound", "volume", "--config", str(config), "--output-dir", str(tmp_path)])
    assert code == EXIT_USAGE


def test_unknown_tolerance_in_settings(tmp_path, restore_tolerances):
    settings = tmp_path / "settings.json"
    settings.write_text(json.dumps({"tolerances": {"no_such_tolerance": 1}}))
    code = main(["bound-eval", "--bound", "volume", "--settings", str(settings), "--output-dir", str(tmp_path)])
    assert code == EXIT_USAGE


def test_quantize_dyadic_coefficients(tmp_path):
    frame_file = _build(tmp_path, "--kind", "dyadic", "--n", "2", "--m", "3")
    coefficients = ",".join(["0.5", "0.25"] * 6)
    code = main(
        ["quantize", "--frame", str(frame_file), "--algorithm", "dyadic", "--coefficients", coefficients,
         "--C", "3", "--output-dir", str(tmp_path)]
    )
    assert code == EXIT_OK
    result = json.loads(_single(tmp_path, "quantize-*.json").read_text())
    assert result["pass"] is True
    assert max(abs(k) for k in result["k"]) <= 3


def test_quantize_zero_vector(tmp_path):
    frame_file = _build(tmp_path, "--kind", "orthonormal", "--n", "3")
    code = main(
        ["quantize", "--frame", str(frame_file), "--algorithm", "round", "--x", "0,0,0", "--delta", "0.5",
         "--epsilon", "0.1", "--output-dir", str(tmp_path)]
    )
    assert code == EXIT_OK
    result = json.loads(_single(tmp_path, "quantize-*.json").read_text())
    assert result["error"] == 0.0
    assert result["k"] == [0, 0, 0]


def test_quantize_dimension_mismatch(tmp_path):
    frame_file = _build(tmp_path, "--kind", "orthonormal", "--n", "3")
    code = main(["quantize", "--frame", str(frame_file), "--algorithm", "round", "--x", "0.1,0.2", "--output-dir", str(tmp_path)])
    assert code == EXIT_USAGE


def test_quantize_missed_target_exits_with_contract_code(tmp_path):
    frame_file = _build(tmp_path, "--kind", "orthonormal", "--n", "3")
    code = main(
        ["quantize", "--frame", str(frame_file), "--algorithm", "round", "--x", "0.3,0.3,0.3",
         "--epsilon", "0.01", "--output-dir", str(tmp_path)]
    )
    assert code == EXIT_CONTRACT
    assert _run_log(tmp_path)[-1]["status"] == "failed"


def test_density_of_an_empty_set(tmp_path):
    set_file = tmp_path / "set.json"
    set_file.write_text(json.dumps({"points": []}))
    assert main(["density", "--set", str(set_file), "--output-dir", str(tmp_path)]) == EXIT_USAGE


def test_density_from_frame(tmp_path):
    frame_file = _build(tmp_path, "--kind", "orthonormal", "--n", "2")
    code = main(
        ["density", "--frame", str(frame_file), "--delta", "0.25", "--C", "1.5", "--coeff-cap", "6",
         "--samples", "2000", "--output-dir", str(tmp_path)]
    )
    assert code == EXIT_OK
    row = pd.read_csv(_single(tmp_path, "density-*.csv")).iloc[0]
    assert bool(row["pass"])
    assert row["epsilon_hat"] <= 0.25 * math.sqrt(2) / 2 + 1e-9
    assert _single(tmp_path, "set-*.json").exists()


def test_sweep_writes_csv_and_json(tmp_path):
    code = main(
        ["sweep", "--dims", "2,4", "--trials", "20", "--q", "3", "--format", "json", "--output-dir", str(tmp_path)]
    )
    assert code == EXIT_OK
    table = pd.read_csv(_single(tmp_path, "sweep-*.csv"))
    assert list(table["n"]) == [2, 4]
    mirror = json.loads(_single(tmp_path, "sweep-*.json").read_text())
    assert mirror["bound_params"]["q"] == 3.0
    assert all(row["cotype_q"] == 3.0 for row in mirror["records"])


def test_sigma_delta_command(tmp_path):
    code = main(
        ["sigma-delta", "--lambda", "4", "--T", "20", "--grid-step", "0.05", "--output-dir", str(tmp_path)]
    )
    assert code == EXIT_OK
    report = pd.read_csv(_single(tmp_path, "sigma-delta-[0-9a-f]*.csv")).iloc[0]
    assert report["lambda"] == 4.0
    assert bool(report["pass"])
    table = pd.read_csv(_single(tmp_path, "sigma-delta-table-*.csv"))
    assert list(table.columns) == ["x", "f_exact", "f_reconstructed", "error"]
