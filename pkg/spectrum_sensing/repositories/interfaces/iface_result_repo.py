from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

import spectrum_sensing.schemas.experiment_schemas as experiment
import spectrum_sensing.schemas.spectrum_schemas as spectrum
import spectrum_sensing.schemas.wavelet_schemas as wavelet


class ResultRepoInterface(ABC):
    """
    Interface for persisting spectra, plans, result tables and experiment
    configurations.
    Methods:
        load_config(path, overrides, defaults): Read and validate an experiment
        config; file keys and overrides win over scenario defaults.
        save_config(path, config): Echo a resolved config.
        save_psd(path, psd) / load_psd(path): PSD text format.
        save_response(path, response, comment): Response dump in PSD format.
        save_plan(path, plan) / load_plan(path): Plan text format.
        save_table(path, frame) / load_table(path): CSV tables.
    """

    @abstractmethod
    def load_config(
        self,
        path: Optional[Path],
        overrides: Dict[str, str],
        defaults: Optional[Dict[str, Any]] = None,
    ) -> experiment.ExperimentConfig:
        pass

    @abstractmethod
    def save_config(self, path: Path, config: experiment.ExperimentConfig) -> None:
        pass

    @abstractmethod
    def save_psd(self, path: Path, psd: spectrum.WidebandPsd) -> None:
        pass

    @abstractmethod
    def load_psd(self, path: Path) -> spectrum.WidebandPsd:
        pass

    @abstractmethod
    def save_response(
        self, path: Path, response: wavelet.MultiscaleResponse, comment: str
    ) -> None:
        pass

    @abstractmethod
    def save_plan(self, path: Path, plan: spectrum.SubchannelPlan) -> None:
        pass

    @abstractmethod
    def load_plan(self, path: Path) -> spectrum.SubchannelPlan:
        pass

    @abstractmethod
    def save_table(self, path: Path, frame: pd.DataFrame) -> None:
        pass

    @abstractmethod
    def load_table(self, path: Path) -> pd.DataFrame:
        pass
