import logging

import numpy as np
import pytest

from frameq import tolerances
from frameq.errors import ContractViolation, FrameInputError, NotAFrameError
from frameq.frame_core import (
    analysis,
    as_vector,
    canonical_dual,
    check_reconstruction,
    coefficient_norms,
    dual_projection_bound,
    evaluate_norm,
    frame_bounds,
    frame_operator,
    projection_constant_estimate,
    reconstruction_error,
    synthesis,
    unconditional_constant_estimate,
    z_norm,
    z_norm_report,
)
from frameq.frame_constructions import two_onb_union
from frameq.helpers import make_rng
from frameq.models import Frame, NormSpec


def test_reconstruction_identity_generic_frame(generic_frame):
    assert reconstruction_error(generic_frame, samples=200, seed=3) <= 1e-9
    x = np.array([0.3, -1.2, 2.0])
    assert synthesis(generic_frame, analysis(generic_frame, x)) == pytest.approx(x, abs=1e-12)


def test_canonical_dual_identities(generic_frame):
    S = frame_operator(generic_frame)
    dual = generic_frame.analysis
    assert generic_frame.synthesis.T @ dual == pytest.approx(np.eye(3), abs=1e-12)
    assert dual.T @ dual == pytest.approx(np.linalg.inv(S), abs=1e-10)
    bounds = frame_bounds(generic_frame)
    dual_bounds = frame_bounds(Frame(synthesis=dual, analysis=generic_frame.synthesis))
    assert dual_bounds.a == pytest.approx(1.0 / bounds.b)
    assert dual_bounds.b == pytest.approx(1.0 / bounds.a)


def test_mercedes_frame_dual():
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    vectors = np.column_stack([np.cos(angles), np.sin(angles)])
    frame = canonical_dual(Frame(synthesis=vectors, analysis=vectors))
    assert frame_operator(frame) == pytest.approx(1.5 * np.eye(2), abs=1e-12)
    assert frame.analysis == pytest.approx(vectors * 2.0 / 3.0, abs=1e-12)


@pytest.mark.parametrize("tight", [True, False])
def test_dual_of_the_dual_is_the_frame(tight, generic_frame):
    frame = two_onb_union(4, [0.1, 0.3]).frame if tight else generic_frame
    dual = frame.analysis
    twice = canonical_dual(Frame(synthesis=dual, analysis=dual))
    assert twice.analysis == pytest.approx(frame.synthesis, abs=1e-10)


def test_non_spanning_family_is_reported():
    vectors = np.array([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    family = Frame(synthesis=vectors, analysis=vectors)
    bounds = frame_bounds(family)
    assert not bounds.is_frame
    assert bounds.a == 0.0
    with pytest.raises(NotAFrameError):
        canonical_dual(family)


def test_check_reconstruction_raises_on_broken_pairing():
    broken = Frame(synthesis=np.eye(2), analysis=2.0 * np.eye(2))
    with pytest.raises(ContractViolation) as excinfo:
        check_reconstruction(broken)
    assert excinfo.value.details["relative_error"] == pytest.approx(1.0)


def test_as_vector_rejects_wrong_length():
    with pytest.raises(FrameInputError):
        as_vector([1.0, 2.0], 3)
    with pytest.raises(FrameInputError):
        as_vector([[1.0, 2.0]])
    with pytest.raises(FrameInputError):
        as_vector([1.0, np.nan])


def test_evaluate_norm_lp_is_batched():
    values = np.array([[3.0, 4.0], [1.0, 1.0]])
    assert evaluate_norm(NormSpec.lp(2.0), values) == pytest.approx([5.0, np.sqrt(2.0)])
    assert evaluate_norm(NormSpec.lp(float("inf")), [3.0, -4.0]) == 4.0
    assert evaluate_norm(NormSpec.lp(1.0), [3.0, -4.0]) == 7.0


def test_interval_max_on_orthonormal_basis(onb4):
    assert z_norm(onb4, [3.0, 4.0, 0.0, 0.0]) == pytest.approx(5.0)
    assert z_norm(onb4, [0.0, 0.0, 0.0, 0.0]) == 0.0
    assert z_norm(onb4, [3.0, 4.0, 0.0, 0.0], variant="sign_max") == pytest.approx(5.0)


def test_interval_max_takes_best_window():
    # partial sums cancel: the full sum is 0, the first atom alone has norm 1
    frame = Frame(synthesis=[[1.0], [-1.0]], analysis=[[0.5], [-0.5]])
    assert z_norm(frame, [1.0, 1.0]) == pytest.approx(1.0)
    assert z_norm(frame, [1.0, 1.0], variant="sign_max") == pytest.approx(2.0)


def test_zero_atoms_use_l2_tail():
    frame = Frame(
        synthesis=[[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
        analysis=[[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
    )
    assert z_norm(frame, [0.0, 3.0, 0.0, 4.0]) == pytest.approx(5.0)
    assert z_norm(frame, [1.0, 3.0, 0.0, 4.0]) == pytest.approx(6.0)


def test_z_norm_axioms_and_bimonotonicity(generic_frame):
    rng = make_rng(11)
    for _ in range(50):
        a = rng.standard_normal(generic_frame.N)
        b = rng.standard_normal(generic_frame.N)
        t = float(rng.uniform(-3.0, 3.0))
        for variant in ("interval_max", "sign_max"):
            za, zb = z_norm(generic_frame, a, variant), z_norm(generic_frame, b, variant)
            assert z_norm(generic_frame, a + b, variant) <= za + zb + 1e-9
            assert z_norm(generic_frame, t * a, variant) == pytest.approx(abs(t) * za)
        m, k = sorted(rng.choice(generic_frame.N, size=2, replace=False))
        restricted = np.zeros_like(a)
        restricted[m : k + 1] = a[m : k + 1]
        assert z_norm(generic_frame, restricted) <= z_norm(generic_frame, a) + 1e-12


def test_coefficient_norms_pad_short_rows(generic_frame):
    spec = NormSpec.z_interval(generic_frame)
    rows = np.array([[1.0, -2.0, 0.5], [0.0, 1.0, 1.0]])
    padded = np.hstack([rows, np.zeros((2, generic_frame.N - 3))])
    expected = [z_norm(generic_frame, row) for row in padded]
    assert coefficient_norms(spec, rows) == pytest.approx(expected)
    sign_spec = NormSpec.z_sign(generic_frame)
    expected_sign = [z_norm(generic_frame, row, "sign_max") for row in padded]
    assert coefficient_norms(sign_spec, rows) == pytest.approx(expected_sign)


def test_sign_max_sampling_is_logged(generic_frame, restore_tolerances, caplog):
    tolerances.apply_tolerances({"sign_max_exhaustive_limit": 3, "sign_max_samples": 64})
    with caplog.at_level(logging.WARNING):
        report = z_norm_report(generic_frame, np.ones(generic_frame.N), "sign_max", seed=5)
    assert report.sampled
    assert report.patterns == 64
    assert "sign_max_sampled" in caplog.text


def test_projection_constants_of_orthonormal_basis(onb4):
    assert dual_projection_bound(onb4) == pytest.approx(1.0)
    estimate = projection_constant_estimate(onb4, samples=100, seed=2)
    assert 0.5 < estimate <= 1.0 + 1e-12
    assert unconditional_constant_estimate(onb4, samples=20, seed=2) <= 1.0 + 1e-12
