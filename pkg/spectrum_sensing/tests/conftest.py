import numpy as np
import pytest
from starlette.testclient import TestClient

from spectrum_sensing.main import app
from spectrum_sensing.repositories.implementations.file_repo import FileResultRepo
from spectrum_sensing.schemas.spectrum_schemas import FrequencyGrid, WidebandPsd
from spectrum_sensing.services.harness import ExperimentHarness


@pytest.fixture(scope="function")
def test_app():
    client = TestClient(app)
    yield client


@pytest.fixture
def result_repo():
    return FileResultRepo()


@pytest.fixture
def harness(result_repo):
    return ExperimentHarness(result_repo, max_par=2)


@pytest.fixture
def unit_grid():
    # 1 MHz bins from 0 to 1023 MHz
    return FrequencyGrid(f_start=0.0, f_stop=1023.0, n_points=1024)


@pytest.fixture
def step_psd(unit_grid):
    values = np.where(unit_grid.frequencies < 512.0, 1.0, 11.0)
    return WidebandPsd(grid=unit_grid, values=values)
