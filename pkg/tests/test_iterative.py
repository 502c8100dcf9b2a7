import logging

import numpy as np
import pytest
from pydantic import ValidationError

from frameq.errors import ContractViolation, FrameInputError
from frameq.frame_core import z_norm
from frameq.helpers import make_rng, sample_sphere
from frameq.quantizers import (
    IterativeQuantizer,
    IterativeQuantizerConfig,
    iterative_quantize,
    measure_base_constants,
    round_quantizer,
)


@pytest.fixture
def base_config():
    # rounding on the orthonormal basis of l_2^4 with step 1/2:
    # error <= sqrt(4) / 4 = 1/2 and interval-max norm <= 1 + 1/2
    return IterativeQuantizerConfig.from_base(delta0=0.5, C0=1.5, q0=0.5)


def test_config_derivation(base_config):
    assert base_config.n1 == 2
    assert base_config.q1 == pytest.approx(0.75)
    assert base_config.delta1 == pytest.approx(0.25)
    assert base_config.C1 == pytest.approx(8.0 * 1.5)


def test_config_rejects_inconsistent_constants():
    with pytest.raises(ValidationError):
        IterativeQuantizerConfig(delta0=0.5, C0=1.5, q0=0.5, n1=2, q1=0.7, delta1=0.25, C1=12.0)
    with pytest.raises(FrameInputError):
        IterativeQuantizerConfig.from_base(delta0=0.5, C0=1.5, q0=1.0)


def test_from_base_picks_smallest_n1():
    config = IterativeQuantizerConfig.from_base(delta0=1.0, C0=2.0, q0=0.8)
    assert (config.n1 + 1) / config.n1 * 0.8 < 1.0
    assert config.n1 == 5


def test_measured_base_constants(onb4):
    measured = measure_base_constants(round_quantizer(onb4), onb4, 0.5, samples=200, seed=1)
    assert measured.q0 <= 0.5 + 1e-12
    assert 0.5 < measured.C0 <= 1.5 + 1e-12
    assert measured.samples == 200


def test_iterative_quantizer_bounds(onb4, base_config):
    quantizer = IterativeQuantizer(round_quantizer(onb4), base_config, onb4, seed=0)
    rng = make_rng(3)
    directions = sample_sphere(rng, 100, 4)
    norms = np.exp(rng.uniform(0.0, np.log(1e3), size=100))
    for direction, size in zip(directions, norms):
        x = size * direction
        result = quantizer(x)
        assert result.error <= 1.0 + 1e-12
        assert result.z_norm_value <= 8.0 * 1.5 * size + 1e-9
        assert result.delta == pytest.approx(0.25)
        assert z_norm(onb4, result.delta * result.k_array) == pytest.approx(result.z_norm_value)


def test_iterative_quantizer_inside_ball(onb4, base_config):
    x = np.array([0.2, -0.1, 0.05, 0.3])
    result = iterative_quantize(round_quantizer(onb4), base_config, onb4, x)
    assert result.error <= 1.0
    assert result.z_norm_value <= base_config.C1 * np.linalg.norm(x) + 1e-12
    zero = iterative_quantize(round_quantizer(onb4), base_config, onb4, np.zeros(4))
    assert zero.error == 0.0
    assert zero.k == [0, 0, 0, 0]


def test_iterative_quantizer_rejects_a_bad_base(onb4):
    # claims error 0.1 for a rounding step that cannot achieve it
    config = IterativeQuantizerConfig.from_base(delta0=0.5, C0=1.5, q0=0.1)
    with pytest.raises(ContractViolation) as excinfo:
        IterativeQuantizer(round_quantizer(onb4), config, onb4)
    assert excinfo.value.details["measured_q0"] > 0.1


def test_iterative_quantizer_reports_a_breach_inside_the_ball(onb4, base_config, caplog):
    def stuck(x, delta):
        return np.full(4, 5, dtype=np.int64)

    quantizer = IterativeQuantizer(stuck, base_config, onb4, validate_samples=0)
    with caplog.at_level(logging.WARNING):
        with pytest.raises(ContractViolation) as excinfo:
            quantizer([0.9, 0.0, 0.0, 0.0])
    assert "base_contract_breach" in caplog.text
    assert excinfo.value.details["residual"] == pytest.approx([0.6, 0.0, 0.0, 0.0])
