import math

import pandas as pd
import pytest

from frameq.bounds_lab import SweepConfig, scaling_sweep
from frameq.errors import FrameInputError
from frameq.reporting import SWEEP_COLUMNS, records_to_frame, records_to_json, write_csv

DIMS = [2, 4, 8, 16, 32]


@pytest.fixture(scope="module")
def dyadic_records():
    return scaling_sweep(DIMS, "dyadic", config=SweepConfig(trials=200), seed=42)


def test_dyadic_sweep_passes_with_log_length(dyadic_records):
    assert [record.n for record in dyadic_records] == DIMS
    for record in dyadic_records:
        assert record.passed, record
        assert record.worst_coeff <= 3.0
        assert record.N / (record.n * math.log2(record.n)) <= 5.0
        assert record.length_ratio_q == pytest.approx(record.N / record.n)
        assert "thm56_N_lower" in record.bound_values
        assert record.wall_ms == 0.0


def test_sweep_csv_is_reproducible(tmp_path, dyadic_records):
    again = scaling_sweep(DIMS, "dyadic", config=SweepConfig(trials=200), seed=42)
    first = write_csv(records_to_frame(dyadic_records), tmp_path / "a.csv")
    second = write_csv(records_to_frame(again), tmp_path / "b.csv")
    assert first.read_bytes() == second.read_bytes()
    assert list(pd.read_csv(first).columns) == SWEEP_COLUMNS


def test_workers_do_not_change_records(dyadic_records):
    threaded = scaling_sweep(DIMS, "dyadic", config=SweepConfig(trials=200, workers=3), seed=42)
    assert [r.model_dump() for r in threaded] == [r.model_dump() for r in dyadic_records]


def test_seed_changes_records(dyadic_records):
    other = scaling_sweep(DIMS[:2], "dyadic", config=SweepConfig(trials=200), seed=43)
    assert [r.seed for r in other] != [r.seed for r in dyadic_records[:2]]


def test_kashin_sweep_records_counting_bound():
    config = SweepConfig(trials=30, delta=0.1)
    records = scaling_sweep([4, 8], "kashin", config=config, seed=1)
    for record in records:
        assert record.passed
        assert record.N == 3 * record.n
        assert record.epsilon_measured <= 0.05 + 1e-9
        assert "eq433_lnN" in record.bound_values


def test_failed_records_are_flagged(caplog):
    config = SweepConfig(trials=20, epsilon=1e-6)
    with caplog.at_level("WARNING"):
        records = scaling_sweep([2, 4], "dyadic", config=config, seed=0)
    assert not any(record.passed for record in records)
    assert "bcnqp_failed" in caplog.text


def test_json_mirror_carries_cotype_index(dyadic_records):
    payload = records_to_json(dyadic_records, {"q": 2.0}, manifest_hash="abc")
    assert payload["manifest_hash"] == "abc"
    assert {row["cotype_q"] for row in payload["records"]} == {2.0}


@pytest.mark.parametrize("dims", [[], [4, 2], [0, 2]])
def test_sweep_rejects_bad_dims(dims):
    with pytest.raises(FrameInputError):
        scaling_sweep(dims)


def test_sweep_rejects_unknown_construction():
    with pytest.raises(FrameInputError):
        scaling_sweep([2], "gaussian", config=SweepConfig(trials=1))
