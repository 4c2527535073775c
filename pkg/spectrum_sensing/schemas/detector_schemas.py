"""
detector_schemas.py
Pydantic models for per-subchannel energy detection.
Classes:
    Hypothesis: H0 (idle) or H1 (occupied).
    ChannelSpectrum: FFT coefficients R_k(m) of one subchannel.
    EnergyStatistic: Test statistic E_k of one subchannel.
    ThresholdPolicy: Target false-alarm rate and known noise power.
    ChannelDecision: Outcome of the binary test on one subchannel.
"""

from enum import IntEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Hypothesis(IntEnum):
    H0 = 0
    H1 = 1


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


class ChannelSpectrum(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    channel_index: int = Field(ge=1)
    bins: np.ndarray

    @field_validator("bins", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=complex)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_size(self) -> "ChannelSpectrum":
        n_f = self.bins.size
        if n_f < 8 or not is_power_of_two(n_f):
            raise ValueError(f"FFT size {n_f} must be a power of two >= 8")
        return self

    @property
    def n_fft(self) -> int:
        return self.bins.size


class EnergyStatistic(BaseModel):
    model_config = ConfigDict(frozen=True)

    channel_index: int = Field(ge=1)
    value: float = Field(ge=0)


class ThresholdPolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    target_pfa: float = Field(default=0.1, gt=0, lt=1)
    noise_power: float = Field(default=1.0, gt=0)
    n_fft: int = Field(default=64, ge=8)

    @field_validator("n_fft")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if not is_power_of_two(v):
            raise ValueError(f"n_fft {v} must be a power of two")
        return v


class ChannelDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    channel_index: int = Field(ge=1)
    hypothesis: Hypothesis
    statistic: EnergyStatistic
    threshold: float = Field(ge=0)

    @model_validator(mode="after")
    def _consistent(self) -> "ChannelDecision":
        expected = (
            Hypothesis.H1 if self.statistic.value > self.threshold else Hypothesis.H0
        )
        if self.hypothesis != expected:
            raise ValueError("Decision contradicts statistic and threshold")
        return self
