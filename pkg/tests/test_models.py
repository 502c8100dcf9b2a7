import math

import numpy as np
import pytest
from pydantic import ValidationError

from frameq.models import (
    ExperimentRecord,
    Frame,
    HilbertFrameBounds,
    NormSpec,
    QuantizationResult,
    QuantizerConfig,
)


def test_frame_validation():
    frame = Frame(synthesis=np.eye(2), analysis=np.eye(2))
    assert (frame.n, frame.N) == (2, 2)
    assert frame.kind is None
    with pytest.raises(ValueError):
        frame.synthesis[0, 0] = 5.0

    with pytest.raises(ValidationError):
        Frame(synthesis=np.eye(2), analysis=np.eye(3))
    with pytest.raises(ValidationError):
        Frame(synthesis=[[1.0, math.nan]], analysis=[[1.0, 0.0]])
    with pytest.raises(ValidationError):
        Frame(synthesis=[1.0, 0.0], analysis=[1.0, 0.0])
    with pytest.raises(ValidationError):
        Frame(synthesis=np.eye(2), analysis=np.eye(2), ambient_norm=NormSpec.z_interval(frame))


def test_norm_spec():
    assert NormSpec.lp("inf").p == math.inf
    assert NormSpec.lp(1).dual_p == math.inf
    assert NormSpec.lp(3).dual_p == pytest.approx(1.5)
    assert NormSpec.lp(math.inf).to_json_dict() == {"kind": "lp", "p": "inf"}
    with pytest.raises(ValidationError):
        NormSpec.lp(0.5)
    with pytest.raises(ValidationError):
        NormSpec(kind="z_interval_max")

    frame = Frame(synthesis=np.eye(2), analysis=np.eye(2))
    z = NormSpec.z_sign(frame)
    assert z.ambient.kind == "lp"
    assert z.to_json_dict() == {"kind": "z_sign_max"}


def test_hilbert_bounds_consistency():
    assert HilbertFrameBounds(a=1.0, b=2.0, is_frame=True).is_frame
    with pytest.raises(ValidationError):
        HilbertFrameBounds(a=2.0, b=1.0, is_frame=True)
    with pytest.raises(ValidationError):
        HilbertFrameBounds(a=0.0, b=1.0, is_frame=True)


def test_quantization_result():
    result = QuantizationResult(
        k=np.array([1.0, -2.0]), delta=0.5, error=0.1, coeff_bound=1.0, algorithm="round"
    )
    assert result.k == [1, -2]
    assert result.k_array.dtype == np.int64
    assert result.passes(QuantizerConfig(delta=0.5, C=1.0, epsilon_target=0.1))
    assert not result.passes(QuantizerConfig(delta=0.5, C=1.0, epsilon_target=0.05))
    with pytest.raises(ValidationError):
        QuantizationResult(k=[0.5], delta=0.5, error=0.0, coeff_bound=0.0, algorithm="round")
    with pytest.raises(ValidationError):
        QuantizerConfig(delta=1.5, C=1.0, epsilon_target=0.1)


def test_experiment_record_defaults():
    record = ExperimentRecord(
        n=2, N=8, delta=1.0, C=3.0, epsilon_target=1.5, epsilon_measured=0.9, worst_coeff=1.0,
        passed=True, seed=1,
    )
    assert record.cardinality is None
    assert record.bound_values == {}
    with pytest.raises(ValidationError):
        ExperimentRecord(
            n=0, N=8, delta=1.0, C=3.0, epsilon_target=1.5, epsilon_measured=0.9, worst_coeff=1.0,
            passed=True, seed=1,
        )
