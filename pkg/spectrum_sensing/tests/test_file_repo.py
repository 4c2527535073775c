import math

import numpy as np
import pandas as pd
import pytest

from spectrum_sensing.errors import ConfigError
from spectrum_sensing.schemas.spectrum_schemas import FrequencyGrid, WidebandPsd
from spectrum_sensing.schemas.wavelet_schemas import Combiner, MultiscaleResponse
from spectrum_sensing.services.spectrum_model import uniform_plan

CONFIG_TEXT = """\
# edge experiment
[grid]
f_start = 1000
f_stop = 2000
n_points = 2048

[plan]
n_channels = 3
occupancy = 1, 0, 1

[run]
trials = 25
methods = cwt:db1, wmp:gaussian
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "experiment.cfg"
    path.write_text(CONFIG_TEXT, encoding="utf-8")
    return path


def test_load_config_flattens_sections(result_repo, config_file):
    config = result_repo.load_config(config_file, {})
    assert config.n_points == 2048
    assert config.occupancy == [True, False, True]
    assert [m.label for m in config.method_specs] == ["cwt:db1", "wmp:gaussian"]
    assert config.trials == 25


def test_overrides_win_and_accept_sections(result_repo, config_file):
    config = result_repo.load_config(config_file, {"run.trials": "7", "beta": "0.3"})
    assert config.trials == 7
    assert config.beta == 0.3


def test_defaults_lose_to_file_values(result_repo, config_file):
    defaults = {"trials": 99, "combiner": Combiner.WMS}
    config = result_repo.load_config(config_file, {}, defaults)
    assert config.trials == 25
    assert config.combiner == Combiner.WMS


def test_unknown_key_is_config_error(result_repo):
    with pytest.raises(ConfigError):
        result_repo.load_config(None, {"no_such_key": "1"})


def test_duplicate_key_is_config_error(result_repo, tmp_path):
    path = tmp_path / "dup.cfg"
    path.write_text("[a]\ntrials = 1\n[b]\ntrials = 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        result_repo.load_config(path, {})


def test_missing_file_is_config_error(result_repo, tmp_path):
    with pytest.raises(ConfigError):
        result_repo.load_config(tmp_path / "missing.cfg", {})


def test_resolved_config_reloads_identically(result_repo, config_file, tmp_path):
    config = result_repo.load_config(config_file, {"impulse_count": "1", "impulse_positions": "1400"})
    out = tmp_path / "out" / "resolved.cfg"
    result_repo.save_config(out, config)
    again = result_repo.load_config(out, {})
    assert again == config
    assert math.isinf(again.roc_snr_db[0])


def test_psd_file_keeps_full_precision(result_repo, tmp_path):
    grid = FrequencyGrid(f_start=1000.0, f_stop=2000.0, n_points=32)
    values = np.random.default_rng(3).random(32) * 10
    result_repo.save_psd(tmp_path / "psd.txt", WidebandPsd(grid=grid, values=values))
    loaded = result_repo.load_psd(tmp_path / "psd.txt")
    assert loaded.grid == grid
    np.testing.assert_array_equal(loaded.values, values)


def test_response_dump_starts_with_comment(result_repo, tmp_path):
    grid = FrequencyGrid(f_start=0.0, f_stop=15.0, n_points=16)
    response = MultiscaleResponse(grid=grid, values=np.linspace(-1, 1, 16))
    result_repo.save_response(tmp_path / "r.txt", response, "combiner=wmp J=2 family=db1")
    lines = (tmp_path / "r.txt").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "#combiner=wmp J=2 family=db1"
    assert lines[1] == "0 15 16"
    assert len(lines) == 18


def test_plan_file(result_repo, tmp_path):
    plan = uniform_plan(1000.0, 2000.0, 4, [True, False, True, False], [10.0, 0.0, 2.5, 0.0])
    result_repo.save_plan(tmp_path / "plan.txt", plan)
    assert result_repo.load_plan(tmp_path / "plan.txt") == plan


def test_table_uses_lf_and_header(result_repo, tmp_path):
    frame = pd.DataFrame({"frequency_mhz": [1200.125, 1400.5], "score": [0.1, 2.0]})
    path = tmp_path / "edges.csv"
    result_repo.save_table(path, frame)
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    assert raw.startswith(b"frequency_mhz,score\n")
    pd.testing.assert_frame_equal(result_repo.load_table(path), frame)
