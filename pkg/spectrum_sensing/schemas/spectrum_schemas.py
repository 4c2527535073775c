"""
spectrum_schemas.py
Pydantic models for the wideband spectrum: frequency grid, subchannel plan,
sampled PSD and the generation parameters (noise, edge shape, time series).
Classes:
    FrequencyGrid: Uniform frequency axis in MHz.
    SubchannelPlan: Ground-truth layout of K contiguous subchannels.
    WidebandPsd: Sampled power spectral density on a FrequencyGrid.
    NoiseSpec: PSD-domain noise floor, fluctuation and impulsive noise.
    EdgeShape: Raised-cosine roll-off of the subchannel transitions.
    TimeSeriesSpec: Per-channel complex baseband sampling parameters.
"""

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# shortest grid the edge detectors and plans accept
MIN_GRID_POINTS = 16


class FrequencyGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    f_start: float = 1000.0
    f_stop: float = 2000.0
    n_points: int = Field(default=4096, ge=MIN_GRID_POINTS)

    @model_validator(mode="after")
    def _check_span(self) -> "FrequencyGrid":
        if not self.f_stop > self.f_start:
            raise ValueError("f_stop must be greater than f_start")
        return self

    @property
    def delta_f(self) -> float:
        return (self.f_stop - self.f_start) / (self.n_points - 1)

    @property
    def frequencies(self) -> np.ndarray:
        return np.linspace(self.f_start, self.f_stop, self.n_points)

    def nearest_bin(self, frequency: float) -> int:
        if frequency < self.f_start or frequency > self.f_stop:
            raise ValueError(
                f"Frequency {frequency} MHz outside [{self.f_start}, {self.f_stop}]"
            )
        return int(round((frequency - self.f_start) / self.delta_f))


class SubchannelPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    boundaries: List[float]
    occupancy: List[bool]
    power: List[float]

    @model_validator(mode="after")
    def _check_layout(self) -> "SubchannelPlan":
        k = len(self.occupancy)
        if k < 1:
            raise ValueError("A plan needs at least one subchannel")
        if len(self.boundaries) != k + 1 or len(self.power) != k:
            raise ValueError(
                f"Plan with {k} subchannels needs {k + 1} boundaries and {k} powers"
            )
        if any(b1 <= b0 for b0, b1 in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError("Boundaries must be strictly increasing")
        for idx, (occupied, level) in enumerate(zip(self.occupancy, self.power)):
            if level < 0:
                raise ValueError(f"Power of subchannel {idx} is negative")
            if not occupied and level != 0:
                raise ValueError(f"Idle subchannel {idx} must have zero power")
        return self

    @property
    def n_channels(self) -> int:
        return len(self.occupancy)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.asarray(self.boundaries, dtype=float))

    def fits(self, grid: FrequencyGrid) -> bool:
        return (
            self.boundaries[0] >= grid.f_start and self.boundaries[-1] <= grid.f_stop
        )

    def edge_frequencies(self) -> List[float]:
        """Interior boundaries where the PSD level changes."""
        return [
            self.boundaries[k + 1]
            for k in range(self.n_channels - 1)
            if self.power[k] != self.power[k + 1]
        ]


class WidebandPsd(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: FrequencyGrid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_values(self) -> "WidebandPsd":
        if self.values.ndim != 1 or self.values.size != self.grid.n_points:
            raise ValueError(
                f"PSD has {self.values.size} values for {self.grid.n_points} bins"
            )
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("PSD values must be finite and non-negative")
        return self


class NoiseSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    awgn_floor: float = Field(default=1.0, ge=0)
    fluctuation_sigma: float = Field(default=0.05, ge=0)
    impulse_count: int = Field(default=0, ge=0)
    impulse_amplitude: float = Field(default=0.0, ge=0)
    impulse_positions: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_impulses(self) -> "NoiseSpec":
        if (
            self.impulse_positions is not None
            and len(self.impulse_positions) != self.impulse_count
        ):
            raise ValueError("impulse_positions length must equal impulse_count")
        return self


class EdgeShape(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta: float = Field(default=0.0, ge=0.0, le=1.0)


class TimeSeriesSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_samples_per_channel: int = Field(default=1024, ge=8)
    sample_rate: float = Field(default=1.0e6, gt=0)
    seed: int = 0
