import configparser
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from spectrum_sensing.config import settings
from spectrum_sensing.errors import ConfigError
from spectrum_sensing.repositories.interfaces.iface_result_repo import (
    ResultRepoInterface,
)
from spectrum_sensing.schemas.experiment_schemas import ExperimentConfig
from spectrum_sensing.schemas.spectrum_schemas import (
    FrequencyGrid,
    SubchannelPlan,
    WidebandPsd,
)
from spectrum_sensing.schemas.wavelet_schemas import MultiscaleResponse

_TOP_SECTION = "__top__"


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _config_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ", ".join(_config_value(v) for v in value)
    return str(value)


class FileResultRepo(ResultRepoInterface):
    """
    Plain-text persistence: INI experiment configs, PSD/plan text formats
    and UTF-8 CSV tables with LF line endings.
    """

    def __init__(self) -> None:
        logging.basicConfig(
            level=settings.loglevel,
            format="%(asctime)s - %(levelname)s - %(message)s",
        )
        self.logger = logging.getLogger(self.__class__.__name__)

    def _write_lines(self, path: Path, lines: List[str]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        self.logger.debug(f"Wrote {path}")

    def _read_lines(self, path: Path) -> List[str]:
        with open(path, encoding="utf-8") as fh:
            return [
                line.strip()
                for line in fh
                if line.strip() and not line.lstrip().startswith("#")
            ]

    def load_config(
        self,
        path: Optional[Path],
        overrides: Dict[str, str],
        defaults: Optional[Dict[str, Any]] = None,
    ) -> ExperimentConfig:
        values: Dict[str, Any] = {}
        if path is not None:
            path = Path(path)
            if not path.is_file():
                raise ConfigError(f"Config file not found: {path}")
            parser = configparser.ConfigParser(interpolation=None)
            parser.optionxform = str
            try:
                parser.read_string(
                    f"[{_TOP_SECTION}]\n" + path.read_text(encoding="utf-8"),
                    source=str(path),
                )
            except configparser.Error as e:
                raise ConfigError(f"Cannot parse {path}: {e}") from e
            for section in parser.sections():
                for key, value in parser.items(section):
                    if key in values:
                        raise ConfigError(f"Key '{key}' defined more than once")
                    values[key] = value

        for key, value in overrides.items():
            values[key.rsplit(".", 1)[-1]] = value

        merged = {**(defaults or {}), **values}
        try:
            return ExperimentConfig.model_validate(merged)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    def save_config(self, path: Path, config: ExperimentConfig) -> None:
        lines = ["[experiment]"]
        for key in type(config).model_fields:
            lines.append(f"{key} = {_config_value(getattr(config, key))}")
        self._write_lines(path, lines)

    def _psd_lines(self, grid: FrequencyGrid, values: np.ndarray) -> List[str]:
        header = f"{_fmt(grid.f_start)} {_fmt(grid.f_stop)} {grid.n_points}"
        return [header, *(_fmt(v) for v in values)]

    def save_psd(self, path: Path, psd: WidebandPsd) -> None:
        self._write_lines(path, self._psd_lines(psd.grid, psd.values))

    def load_psd(self, path: Path) -> WidebandPsd:
        lines = self._read_lines(path)
        if not lines:
            raise ValueError(f"Empty PSD file {path}")
        f_start, f_stop, n_points = lines[0].split()
        grid = FrequencyGrid(
            f_start=float(f_start), f_stop=float(f_stop), n_points=int(n_points)
        )
        values = np.array([float(v) for v in lines[1:]])
        return WidebandPsd(grid=grid, values=values)

    def save_response(
        self, path: Path, response: MultiscaleResponse, comment: str
    ) -> None:
        self._write_lines(
            path, [f"#{comment}", *self._psd_lines(response.grid, response.values)]
        )

    def save_plan(self, path: Path, plan: SubchannelPlan) -> None:
        self._write_lines(
            path,
            [
                str(plan.n_channels),
                " ".join(_fmt(b) for b in plan.boundaries),
                " ".join("1" if o else "0" for o in plan.occupancy),
                " ".join(_fmt(p) for p in plan.power),
            ],
        )

    def load_plan(self, path: Path) -> SubchannelPlan:
        lines = self._read_lines(path)
        if len(lines) != 4:
            raise ValueError(f"Plan file {path} must have 4 lines")
        k = int(lines[0])
        plan = SubchannelPlan(
            boundaries=[float(b) for b in lines[1].split()],
            occupancy=[b == "1" for b in lines[2].split()],
            power=[float(p) for p in lines[3].split()],
        )
        if plan.n_channels != k:
            raise ValueError(f"Plan file declares {k} channels, lists {plan.n_channels}")
        return plan

    def save_table(self, path: Path, frame: pd.DataFrame) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
        self.logger.debug(f"Wrote {len(frame)} rows to {path}")

    def load_table(self, path: Path) -> pd.DataFrame:
        return pd.read_csv(path, float_precision="round_trip")
