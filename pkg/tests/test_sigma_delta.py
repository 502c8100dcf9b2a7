import numpy as np
import pytest

from frameq.errors import FrameInputError
from frameq.helpers import make_rng
from frameq.quantizers import SigmaDeltaState, sigma_delta


def test_state_stays_bounded_on_random_inputs():
    rng = make_rng(0)
    y = rng.uniform(-1.0, 1.0, size=10_000)
    output = sigma_delta(y)
    assert np.max(np.abs(output.states)) <= 1.0
    assert set(np.unique(output.bits)) <= {-1, 1}
    assert output.final.step_index == 10_000


def test_recursion_by_hand():
    output = sigma_delta([0.5, 0.5, -0.25, 0.0])
    assert output.bits.tolist() == [1, 1, -1, -1]
    assert output.states == pytest.approx([-0.5, -1.0, -0.25, 0.75])


def test_sign_of_zero_is_positive():
    assert sigma_delta([0.0]).bits.tolist() == [1]


def test_running_sums_track_the_input():
    # |sum (y - q)| = |u_n| <= 1 for every prefix
    y = np.full(1000, 0.3)
    output = sigma_delta(y)
    assert np.max(np.abs(np.cumsum(y - output.bits))) <= 1.0 + 1e-9
    assert output.bits.mean() == pytest.approx(0.3, abs=2e-3)


def test_state_can_be_carried_between_calls():
    y = make_rng(1).uniform(-1.0, 1.0, size=200)
    whole = sigma_delta(y)
    state = SigmaDeltaState()
    first = sigma_delta(y[:120], state)
    second = sigma_delta(y[120:], first.final)
    assert np.concatenate([first.bits, second.bits]).tolist() == whole.bits.tolist()
    assert second.final.u == pytest.approx(whole.final.u)


def test_inputs_outside_unit_interval_are_rejected():
    with pytest.raises(FrameInputError):
        sigma_delta([0.5, 1.5])
    with pytest.raises(FrameInputError):
        SigmaDeltaState().step(-2.0)
