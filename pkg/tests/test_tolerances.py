import pytest

from frameq import tolerances


def test_defaults_round_trip(restore_tolerances):
    values = tolerances.get_tolerances()
    assert values["reconstruction_tol"] == 1e-9
    assert values["rng_name"] == "PCG64"
    tolerances.apply_tolerances(values)
    assert tolerances.get_tolerances() == values


def test_partial_override(restore_tolerances):
    tolerances.apply_tolerances({"sign_max_samples": "128"})
    assert tolerances.SIGN_MAX_SAMPLES == 128
    assert isinstance(tolerances.SIGN_MAX_SAMPLES, int)
    assert tolerances.RECONSTRUCTION_TOL == 1e-9


def test_unknown_key(restore_tolerances):
    with pytest.raises(KeyError, match="reconstruction_tolerance"):
        tolerances.apply_tolerances({"reconstruction_tolerance": 1e-6})


def test_enumeration_ceiling(restore_tolerances):
    with pytest.raises(ValueError):
        tolerances.apply_tolerances({"max_enumeration_bits": 41})
    assert tolerances.MAX_ENUMERATION_BITS == 25.0
