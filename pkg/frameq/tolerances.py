"""Shared numeric tolerances and computation budgets.

The module exposes global values which can be tweaked at runtime, so long
experiments can trade accuracy for speed without touching the source.  Call
:func:`apply_tolerances` with a mapping of lower-case names to override the
defaults; :func:`get_tolerances` returns the active values (it is also what
the CLI echoes into every run manifest).
"""

from typing import Any, Dict

# Relative tolerance for the reconstruction identity x = sum f_i(x) x_i.
RECONSTRUCTION_TOL: float = 1e-9
# Allowed deviation of <f_i, x_j> from the Kronecker delta for basis input.
BIORTHOGONAL_TOL: float = 1e-9

# Sign-max Z-norm: exhaustive up to this many nonzero atoms, sampled beyond.
SIGN_MAX_EXHAUSTIVE_LIMIT: int = 20
SIGN_MAX_SAMPLES: int = 4096

# Dyadic digit search is exhaustive over {0, +-1}^m up to this m.
DYADIC_EXHAUSTIVE_MAX_M: int = 12

# Lattice enumeration guard, in bits of N * log2(2 * cap + 1).
MAX_ENUMERATION_BITS: float = 25.0
ENUMERATION_BITS_CEILING: float = 40.0

KASHIN_ESCALATION: float = 1.5
KASHIN_MAX_ESCALATIONS: int = 3
KASHIN_MAX_REDRAWS: int = 8
KASHIN_MAX_ITER: int = 500

# Distance a net point is pushed when it sits too close to +-x_i.
NET_PUSH: float = 0.3
MAX_GRID_POINTS: int = 200_000

RNG_NAME: str = "PCG64"

_FLOAT_KEYS = {
    "reconstruction_tol": "RECONSTRUCTION_TOL",
    "biorthogonal_tol": "BIORTHOGONAL_TOL",
    "max_enumeration_bits": "MAX_ENUMERATION_BITS",
    "kashin_escalation": "KASHIN_ESCALATION",
    "net_push": "NET_PUSH",
}
_INT_KEYS = {
    "sign_max_exhaustive_limit": "SIGN_MAX_EXHAUSTIVE_LIMIT",
    "sign_max_samples": "SIGN_MAX_SAMPLES",
    "dyadic_exhaustive_max_m": "DYADIC_EXHAUSTIVE_MAX_M",
    "kashin_max_escalations": "KASHIN_MAX_ESCALATIONS",
    "kashin_max_redraws": "KASHIN_MAX_REDRAWS",
    "kashin_max_iter": "KASHIN_MAX_ITER",
    "max_grid_points": "MAX_GRID_POINTS",
}


def apply_tolerances(values: Dict[str, Any]) -> None:
    """Override the default tolerances.

    Parameters
    ----------
    values:
        Mapping with any of the keys returned by :func:`get_tolerances`.
        Missing keys leave the corresponding defaults unchanged; unknown keys
        raise ``KeyError`` so typos in config files do not pass silently.
    """

    known = set(_FLOAT_KEYS) | set(_INT_KEYS) | {"rng_name"}
    unknown = sorted(set(values) - known)
    if unknown:
        raise KeyError(f"Unknown tolerance keys: {', '.join(unknown)}")

    bits = values.get("max_enumeration_bits")
    if bits is not None and float(bits) > ENUMERATION_BITS_CEILING:
        raise ValueError(
            f"max_enumeration_bits may not exceed {ENUMERATION_BITS_CEILING:g}"
        )

    module_globals = globals()
    for key, name in _FLOAT_KEYS.items():
        if key in values:
            module_globals[name] = float(values[key])
    for key, name in _INT_KEYS.items():
        if key in values:
            module_globals[name] = int(values[key])
    if "rng_name" in values:
        module_globals["RNG_NAME"] = str(values["rng_name"])


def get_tolerances() -> Dict[str, Any]:
    """Return the currently active tolerances."""

    module_globals = globals()
    result: Dict[str, Any] = {key: module_globals[name] for key, name in _FLOAT_KEYS.items()}
    result.update({key: module_globals[name] for key, name in _INT_KEYS.items()})
    result["rng_name"] = RNG_NAME
    return result
