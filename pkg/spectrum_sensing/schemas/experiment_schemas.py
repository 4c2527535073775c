"""
experiment_schemas.py
Pydantic models for experiment configuration and result tables.
Classes:
    MethodSpec: One (combiner, wavelet family) pair evaluated by the harness.
    RmseMatching, CsStop: Scoring rule of the RMSE study and OMP stop rule of
    the CS runs.
    ExperimentConfig: Flat experiment configuration (INI sections are only
    grouping for humans).
    RmseRow / RmseTable: Aggregated RMSE-vs-beta results.
    RocRow, CsTradeoffRow: Rows of the ROC and CS trade-off sweeps.
    TrendCheck: Outcome of one ordering claim with its pooled standard error.
"""

import math
import re
from enum import Enum
from typing import List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spectrum_sensing.schemas.cs_schemas import BasisKind, MeasurementKind
from spectrum_sensing.schemas.wavelet_schemas import Combiner, WaveletFamily

_SPLIT = re.compile(r"[,\s]+")


def _split_list(v):
    if isinstance(v, str):
        return [item for item in _SPLIT.split(v.strip()) if item]
    return v


def _as_bool(v) -> bool:
    if isinstance(v, str):
        return v.strip().lower() in {"1", "true", "yes", "on"}
    return bool(v)


class MethodSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    combiner: Combiner
    family: WaveletFamily

    @classmethod
    def parse(cls, text: str) -> "MethodSpec":
        combiner, _, family = text.partition(":")
        return cls(combiner=combiner, family=family or WaveletFamily.GAUSSIAN)

    @property
    def label(self) -> str:
        return f"{self.combiner.value}:{self.family.value}"


DEFAULT_METHODS = [
    f"{c}:{f}" for c in ("cwt", "wmp", "wms") for f in ("db1", "gaussian")
]


class RmseMatching(str, Enum):
    # every true edge against its nearest estimate and every estimate
    # against its nearest true edge
    TWO_SIDED = "two-sided"
    # true edges only, estimates may be reused
    NEAREST = "nearest"


class CsStop(str, Enum):
    # OMP runs for (occupied channels x cs_n_fft) atoms, at most M
    SPARSITY = "sparsity"
    # relative residual 1e-10, at most cs_max_atoms_fraction * M atoms
    RESIDUAL = "residual"


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: str = "default"

    # grid
    f_start: float = 1000.0
    f_stop: float = 2000.0
    n_points: int = Field(default=4096, ge=16)

    # plan
    n_channels: int = Field(default=5, ge=1)
    occupancy: List[bool] = Field(default_factory=lambda: [True, False, True, False, True])
    snr_db: float = 10.0
    snr_db_grid: List[float] = Field(default_factory=list)

    # noise
    awgn_floor: float = Field(default=1.0, gt=0)
    fluctuation_sigma: float = Field(default=0.02, ge=0)
    impulse_count: int = Field(default=0, ge=0)
    impulse_amplitude: float = Field(default=0.0, ge=0)
    impulse_positions: List[float] = Field(default_factory=list)

    # edge detection
    beta: float = Field(default=0.0, ge=0, le=1)
    beta_grid: List[float] = Field(
        default_factory=lambda: [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
    )
    methods: List[str] = Field(default_factory=lambda: list(DEFAULT_METHODS))
    combiner: Combiner = Combiner.WMP_NORMALIZED
    family: WaveletFamily = WaveletFamily.GAUSSIAN
    J: int = Field(default=2, ge=1, le=8)
    eta_fraction: float = Field(default=0.2, gt=0, lt=1)
    occupancy_threshold: Optional[float] = None
    rmse_matching: RmseMatching = RmseMatching.TWO_SIDED

    # energy detection
    target_pfa: float = Field(default=0.1, gt=0, lt=1)
    n_fft: int = Field(default=64, ge=8)
    pfa_grid: List[float] = Field(default_factory=lambda: [0.01, 0.05, 0.1])
    roc_snr_db: List[float] = Field(
        default_factory=lambda: [-math.inf, -10.0, -5.0, 0.0, 5.0, 10.0]
    )
    roc_trials: int = Field(default=100_000, ge=1)

    # compressive sensing
    cs_channels: int = Field(default=16, ge=1)
    cs_n_fft: int = Field(default=16, ge=8)
    cs_occupancy: List[bool] = Field(
        default_factory=lambda: [i in (2, 9) for i in range(16)]
    )
    cs_snr_db: float = 20.0
    cs_ratio: float = Field(default=0.25, gt=0, le=1)
    cs_ratio_grid: List[float] = Field(default_factory=lambda: [0.125, 0.25, 0.5, 1.0])
    cs_basis: BasisKind = BasisKind.IDENTITY
    cs_measurement: MeasurementKind = MeasurementKind.GAUSSIAN_IID
    cs_stop: CsStop = CsStop.SPARSITY
    cs_max_atoms_fraction: float = Field(default=0.5, gt=0, le=1)
    cs_trials: int = Field(default=200, ge=1)

    # run control
    trials: int = Field(default=1000, ge=1)
    master_seed: int = 20240501

    @field_validator(
        "occupancy",
        "snr_db_grid",
        "impulse_positions",
        "beta_grid",
        "methods",
        "pfa_grid",
        "roc_snr_db",
        "cs_occupancy",
        "cs_ratio_grid",
        mode="before",
    )
    @classmethod
    def _lists(cls, v):
        return _split_list(v)

    @field_validator("occupancy", "cs_occupancy", mode="before")
    @classmethod
    def _bools(cls, v):
        return [_as_bool(item) for item in _split_list(v)]

    @field_validator("occupancy_threshold", mode="before")
    @classmethod
    def _optional(cls, v):
        if isinstance(v, str) and v.strip().lower() in {"", "none"}:
            return None
        return v

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if len(self.occupancy) != self.n_channels:
            raise ValueError("occupancy needs one flag per channel")
        if len(self.cs_occupancy) != self.cs_channels:
            raise ValueError("cs_occupancy needs one flag per CS channel")
        if any(not 0 <= b <= 1 for b in self.beta_grid):
            raise ValueError("beta_grid values must lie in [0, 1]")
        if not self.methods:
            raise ValueError("methods must not be empty")
        for method in self.method_specs:
            if method.combiner not in (Combiner.CWT, Combiner.WMP, Combiner.WMS):
                raise ValueError(f"Unsupported RMSE method {method.label}")
        if any(not 0 < r <= 1 for r in self.cs_ratio_grid):
            raise ValueError("cs_ratio_grid values must lie in (0, 1]")
        if any(not 0 < p < 1 for p in self.pfa_grid):
            raise ValueError("pfa_grid values must lie in (0, 1)")
        return self

    @property
    def method_specs(self) -> List[MethodSpec]:
        return [MethodSpec.parse(m) for m in self.methods]

    @property
    def snr_values(self) -> List[float]:
        return list(self.snr_db_grid) or [self.snr_db]


class RmseRow(BaseModel):
    snr_db: float
    beta: float
    method: str
    family: str
    mean_rmse: float = Field(ge=0)
    std_error: float = Field(ge=0)
    trials: int


class RmseTable(BaseModel):
    rows: List[RmseRow] = Field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        columns = list(RmseRow.model_fields)
        return pd.DataFrame([r.model_dump() for r in self.rows], columns=columns)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "RmseTable":
        return cls(rows=[RmseRow(**rec) for rec in frame.to_dict("records")])

    def cell(self, snr_db: float, beta: float, method: str, family: str) -> RmseRow:
        for row in self.rows:
            if (
                row.snr_db == snr_db
                and math.isclose(row.beta, beta)
                and row.method == method
                and row.family == family
            ):
                return row
        raise KeyError(f"No cell for snr={snr_db} beta={beta} {method}:{family}")


class RocRow(BaseModel):
    snr_db: float
    target_pfa: float
    threshold: float
    empirical_pfa: float
    pfa_std_error: float
    empirical_pd: float
    pd_std_error: float
    trials: int


class CsTradeoffRow(BaseModel):
    ratio: float
    m_rows: int
    l_cols: int
    mean_rel_error: float
    rel_error_std_error: float
    mean_mu: float
    detection_rate: float
    false_alarm_rate: float
    trials: int


class TrendCheck(BaseModel):
    name: str
    snr_db: float
    lower: float
    higher: float
    pooled_std_error: float
    required_margin: float
    holds: bool
