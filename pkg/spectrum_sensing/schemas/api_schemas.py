"""
api_schemas.py
Pydantic models for the HTTP sensing service.
Classes:
    EnergyQuery / EdgeQuery / CsQuery: Request parameters of the endpoints.
    ResultHealth: Service status.
    ChannelResult: One per-channel occupancy decision.
    ResultEnergy / ResultEdges / ResultCs: Endpoint responses.
"""

from typing import List

from pydantic import BaseModel, ConfigDict, Field

from spectrum_sensing.schemas.cs_schemas import BasisKind, MeasurementKind
from spectrum_sensing.schemas.wavelet_schemas import Combiner, WaveletFamily


class EnergyQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    snr_db: float = 10.0
    n_fft: int = Field(default=64, ge=8)
    target_pfa: float = Field(default=0.1, gt=0, lt=1)
    seed: int = 20240501


class EdgeQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    snr_db: float = 10.0
    beta: float = Field(default=0.0, ge=0, le=1)
    combiner: Combiner = Combiner.WMP_NORMALIZED
    family: WaveletFamily = WaveletFamily.GAUSSIAN
    J: int = Field(default=2, ge=1, le=8)
    eta_fraction: float = Field(default=0.2, gt=0, lt=1)
    n_points: int = Field(default=4096, ge=16)
    seed: int = 20240501


class CsQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    ratio: float = Field(default=0.25, gt=0, le=1)
    basis: BasisKind = BasisKind.IDENTITY
    measurement: MeasurementKind = MeasurementKind.GAUSSIAN_IID
    snr_db: float = 20.0
    seed: int = 20240501


class ResultHealth(BaseModel):
    status: str
    version: str


class ChannelResult(BaseModel):
    channel: int
    statistic: float
    threshold: float
    occupied: bool


class ResultEnergy(BaseModel):
    channels: List[ChannelResult]


class ResultEdges(BaseModel):
    edges_mhz: List[float]
    scores: List[float]
    true_edges_mhz: List[float]
    rmse_mhz: float


class ResultCs(BaseModel):
    channels: List[ChannelResult]
    m_rows: int
    l_cols: int
    mu: float
    rel_error: float
    iterations: int
    converged: bool
