"""
wavelet_schemas.py
Pydantic models for multiscale wavelet edge detection on the PSD.
"""

from enum import Enum
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spectrum_sensing.schemas.spectrum_schemas import FrequencyGrid


class WaveletFamily(str, Enum):
    DB1 = "db1"
    GAUSSIAN = "gaussian"


class Combiner(str, Enum):
    CWT = "cwt"
    WMM = "wmm"
    WMP = "wmp"
    WMP_NORMALIZED = "wmp_normalized"
    WMS = "wms"


class SmoothingKernel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: WaveletFamily
    scale: int
    delta_f: float = Field(gt=0)
    # index of the zero-offset sample in support
    origin: int
    support: np.ndarray

    @field_validator("support", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    @property
    def area(self) -> float:
        return float(self.support.sum() * self.delta_f)

    @property
    def half_width_bins(self) -> int:
        return self.support.size // 2


class MultiscaleConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: WaveletFamily = WaveletFamily.GAUSSIAN
    J: int = Field(default=2, ge=1, le=8)
    combiner: Combiner = Combiner.WMP

    @property
    def scales(self) -> List[int]:
        return [2**j for j in range(1, self.J + 1)]

    @property
    def neighborhood(self) -> int:
        return max(2, self.scales[-1] // 2)


class MultiscaleResponse(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: FrequencyGrid
    values: np.ndarray
    label: str = "response"

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_values(self) -> "MultiscaleResponse":
        if self.values.size != self.grid.n_points:
            raise ValueError("Response length does not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Response values must be finite")
        return self


class EdgeThreshold(BaseModel):
    model_config = ConfigDict(frozen=True)

    eta_fraction: float = Field(default=0.2, gt=0, lt=1)


class EdgeEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    frequencies: List[float] = Field(default_factory=list)
    scores: List[float] = Field(default_factory=list)
    bins: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _sorted(self) -> "EdgeEstimate":
        if len(self.frequencies) != len(self.scores):
            raise ValueError("Each edge needs exactly one score")
        if any(f1 <= f0 for f0, f1 in zip(self.frequencies, self.frequencies[1:])):
            raise ValueError("Edge frequencies must be strictly increasing")
        return self
