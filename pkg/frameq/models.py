from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _frozen_matrix(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.ndim != 2:
        raise ValueError(f"expected a 2-D array of vectors, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("vectors must have finite entries")
    array.setflags(write=False)
    return array


class NormSpec(BaseModel):
    """A computable norm on coordinate space.

    ``lp`` norms act on vectors of the ambient space.  The two Z kinds act on
    coefficient vectors of length N and are tied to a family of synthesis
    vectors (``atoms``) measured in the ``ambient`` norm.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["lp", "z_interval_max", "z_sign_max"] = "lp"
    p: float = 2.0
    atoms: Optional[np.ndarray] = None
    ambient: Optional[NormSpec] = None

    @field_validator("p", mode="before")
    @classmethod
    def _coerce_p(cls, value: object) -> float:
        if isinstance(value, str) and value.strip().lower() in {"inf", "infinity"}:
            return float("inf")
        return value  # type: ignore[return-value]

    @field_validator("p")
    @classmethod
    def _check_p(cls, value: float) -> float:
        if not value >= 1.0:
            raise ValueError("p must be >= 1")
        return value

    @field_validator("atoms", mode="before")
    @classmethod
    def _coerce_atoms(cls, value: object) -> Optional[np.ndarray]:
        if value is None:
            return None
        return _frozen_matrix(value)

    @model_validator(mode="after")
    def _check_z_reference(self) -> NormSpec:
        if self.kind != "lp":
            if self.atoms is None:
                raise ValueError(f"{self.kind} norm needs the frame's synthesis vectors")
            if self.ambient is None:
                object.__setattr__(self, "ambient", NormSpec())
            elif self.ambient.kind != "lp":
                raise ValueError("the ambient norm of a Z-norm must be an lp norm")
        return self

    @classmethod
    def lp(cls, p: float) -> NormSpec:
        return cls(kind="lp", p=p)

    @classmethod
    def z_interval(cls, frame: Frame) -> NormSpec:
        return cls(kind="z_interval_max", atoms=frame.synthesis, ambient=frame.ambient_norm)

    @classmethod
    def z_sign(cls, frame: Frame) -> NormSpec:
        return cls(kind="z_sign_max", atoms=frame.synthesis, ambient=frame.ambient_norm)

    @property
    def dual_p(self) -> float:
        """Conjugate exponent q with 1/p + 1/q = 1."""
        if self.p == 1.0:
            return float("inf")
        if np.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    def to_json_dict(self) -> Dict[str, Any]:
        if self.kind == "lp":
            return {"kind": "lp", "p": "inf" if np.isinf(self.p) else self.p}
        return {"kind": self.kind}


class ConstructionInfo(BaseModel):
    """Provenance of a constructed frame: builder name, parameters and seed."""

    model_config = ConfigDict(frozen=True)

    kind: str
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None


class Frame(BaseModel):
    """Paired synthesis vectors x_i and analysis functionals f_i.

    Both families are stored row-wise as ``(N, n)`` arrays; a functional is
    applied through the Euclidean inner product.  Arrays are read-only once
    the model is built.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    synthesis: np.ndarray
    analysis: np.ndarray
    ambient_norm: NormSpec = Field(default_factory=NormSpec)
    construction: Optional[ConstructionInfo] = None

    @field_validator("synthesis", "analysis", mode="before")
    @classmethod
    def _coerce_vectors(cls, value: object) -> np.ndarray:
        return _frozen_matrix(value)

    @model_validator(mode="after")
    def _check_shapes(self) -> Frame:
        if self.synthesis.shape != self.analysis.shape:
            raise ValueError(
                f"synthesis {self.synthesis.shape} and analysis {self.analysis.shape} differ"
            )
        if self.synthesis.shape[0] == 0 or self.synthesis.shape[1] == 0:
            raise ValueError("a frame needs at least one vector in dimension >= 1")
        if self.ambient_norm.kind != "lp":
            raise ValueError("the ambient norm of a frame must be an lp norm")
        return self

    @property
    def n(self) -> int:
        return int(self.synthesis.shape[1])

    @property
    def N(self) -> int:
        return int(self.synthesis.shape[0])

    @property
    def kind(self) -> Optional[str]:
        return self.construction.kind if self.construction else None


class HilbertFrameBounds(BaseModel):
    """Optimal constants a <= b of the Hilbert frame inequality."""

    a: float = Field(ge=0.0)
    b: float = Field(ge=0.0)
    is_frame: bool

    @model_validator(mode="after")
    def _check_order(self) -> HilbertFrameBounds:
        if self.b < self.a:
            raise ValueError("upper frame bound below lower frame bound")
        if self.is_frame != (self.a > 0.0):
            raise ValueError("is_frame must agree with a > 0")
        return self


class QuantizerConfig(BaseModel):
    """Target (epsilon, delta, C) of a quantization property check."""

    delta: float = Field(gt=0.0, le=1.0)
    C: float = Field(ge=1.0)
    epsilon_target: float = Field(gt=0.0)


class QuantizationResult(BaseModel):
    """Integer coefficients k with the achieved error and coefficient bound."""

    k: List[int]
    delta: float = Field(gt=0.0)
    error: float = Field(ge=0.0)
    coeff_bound: float = Field(ge=0.0)
    z_norm_value: Optional[float] = None
    algorithm: str
    params: Dict[str, Any] = Field(default_factory=dict)
    target: Optional[List[float]] = None

    @field_validator("k", mode="before")
    @classmethod
    def _coerce_k(cls, value: object) -> List[int]:
        array = np.asarray(value)
        if array.size and not np.all(np.equal(np.round(array), array)):
            raise ValueError("coefficients must be integers")
        return [int(v) for v in array.reshape(-1)]

    @field_validator("target", mode="before")
    @classmethod
    def _coerce_target(cls, value: object) -> Optional[List[float]]:
        if value is None:
            return None
        return [float(v) for v in np.asarray(value, dtype=float).reshape(-1)]

    @property
    def k_array(self) -> np.ndarray:
        return np.asarray(self.k, dtype=np.int64)

    def passes(self, config: QuantizerConfig) -> bool:
        """Whether the result meets ``error <= epsilon`` and ``max|delta k| <= C``."""
        return self.error <= config.epsilon_target and self.coeff_bound <= config.C


class ExperimentRecord(BaseModel):
    """One row of a sweep."""

    n: int = Field(ge=1)
    N: int = Field(ge=1)
    delta: float
    C: float
    epsilon_target: float
    epsilon_measured: float
    worst_coeff: float
    cardinality: Optional[int] = None
    bound_values: Dict[str, float] = Field(default_factory=dict)
    passed: bool
    seed: int
    wall_ms: float = 0.0
    min_norm_ratio: Optional[float] = None
    length_ratio_q: Optional[float] = None
