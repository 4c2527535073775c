"""
cs_schemas.py
Pydantic models for compressive (sub-Nyquist) sensing.
Classes:
    SparsityBasis: Square unitary basis B with r = B y.
    SparseCoeffs: Support and values of a Y-sparse coefficient vector.
    MeasurementMatrix: M x L matrix Theta.
    Measurements: Vector m = Theta r.
    KnownSparsity / ResidualTol: OMP stopping rules.
    RecoveryResult: OMP output with residual history.
    CsDiagnostics: Per-trial reconstruction diagnostics.
"""

from enum import Enum
from typing import List, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class BasisKind(str, Enum):
    IDENTITY = "identity"
    DFT = "dft"


class MeasurementKind(str, Enum):
    GAUSSIAN_IID = "gaussian"
    BERNOULLI_PM1 = "bernoulli"
    IDENTITY = "identity"


def _frozen_array(v, dtype) -> np.ndarray:
    arr = np.array(v, dtype=dtype)
    arr.setflags(write=False)
    return arr


class SparsityBasis(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: BasisKind
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        return _frozen_array(v, complex)

    @model_validator(mode="after")
    def _unitary(self) -> "SparsityBasis":
        b = self.matrix
        if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] < 2:
            raise ValueError("Basis must be a square matrix with L >= 2")
        if not np.allclose(b.conj().T @ b, np.eye(b.shape[0]), atol=1e-9):
            raise ValueError("Basis columns must be orthonormal")
        return self

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


class SparseCoeffs(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dimension: int = Field(ge=1)
    support: List[int]
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        return _frozen_array(v, complex)

    @model_validator(mode="after")
    def _check_support(self) -> "SparseCoeffs":
        if len(set(self.support)) != len(self.support):
            raise ValueError("Support indices must be unique")
        if any(i < 0 or i >= self.dimension for i in self.support):
            raise ValueError("Support index out of range")
        if self.values.size != len(self.support):
            raise ValueError("One value per support index is required")
        return self

    def dense(self) -> np.ndarray:
        y = np.zeros(self.dimension, dtype=complex)
        y[self.support] = self.values
        return y


class MeasurementMatrix(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: MeasurementKind
    seed: int
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        return _frozen_array(v, float)

    @model_validator(mode="after")
    def _check_shape(self) -> "MeasurementMatrix":
        if self.matrix.ndim != 2 or not 1 <= self.matrix.shape[0] <= self.matrix.shape[1]:
            raise ValueError("Measurement matrix must be M x L with 1 <= M <= L")
        return self

    @property
    def m_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def l_cols(self) -> int:
        return self.matrix.shape[1]


class Measurements(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vector: np.ndarray

    @field_validator("vector", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        return _frozen_array(v, complex)


class KnownSparsity(BaseModel):
    model_config = ConfigDict(frozen=True)

    sparsity: int = Field(ge=0)


class ResidualTol(BaseModel):
    model_config = ConfigDict(frozen=True)

    # relative to the norm of the measurement vector
    epsilon: float = Field(default=1e-10, ge=0)
    max_iter: int = Field(ge=0)


StopRule = Union[KnownSparsity, ResidualTol]


class RecoveryResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: np.ndarray
    signal: np.ndarray
    support: List[int]
    residual_norms: List[float]
    iterations: int
    converged: bool

    @field_validator("coefficients", "signal", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        return _frozen_array(v, complex)

    @property
    def residual_norm(self) -> float:
        return self.residual_norms[-1]


class CsDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True)

    trial: int = 0
    m_rows: int
    l_cols: int
    mu: float
    rel_error: float
    iterations: int
    converged: bool
