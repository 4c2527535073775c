"""
# Tests for the sensing API endpoints
- /sensing/health: Service health check.
- /sensing/energy: Per-channel energy detection.
- /sensing/edges: Wavelet edge detection on a synthetic PSD.
- /sensing/cs: Compressive reconstruction followed by detection.
"""

import asyncio

import pytest

from spectrum_sensing.repositories.implementations.file_repo import FileResultRepo
from spectrum_sensing.schemas.api_schemas import EnergyQuery
from spectrum_sensing.services.harness import ExperimentHarness
from spectrum_sensing.services.sensing_service import SensingService

params_strong_signal = {"snr_db": 20.0, "target_pfa": 1e-6, "n_fft": 64}

params_small_grid = {"n_points": 1024, "combiner": "wmp", "family": "gaussian"}


def test_get_service_health_true(test_app):
    response = test_app.get("/sensing/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"
    assert "X-Process-Time-ms" in response.headers


def test_get_energy_occupancy(test_app):
    response = test_app.get("/sensing/energy", params=params_strong_signal)
    assert response.status_code == 200
    channels = response.json()["channels"]
    assert [c["occupied"] for c in channels] == [True, False, True, False, True]


def test_get_energy_invalid_fft_size(test_app):
    response = test_app.get("/sensing/energy", params={"n_fft": 12})
    assert response.status_code == 422


def test_get_edges(test_app):
    response = test_app.get("/sensing/edges", params=params_small_grid)
    assert response.status_code == 200
    data = response.json()
    assert data["true_edges_mhz"] == [1200.0, 1400.0, 1600.0, 1800.0]
    assert data["rmse_mhz"] < 2.0


def test_get_edges_unknown_combiner(test_app):
    response = test_app.get("/sensing/edges", params={"combiner": "median"})
    assert response.status_code == 422


def test_get_cs_lossless(test_app):
    response = test_app.get("/sensing/cs", params={"ratio": 1.0, "measurement": "identity"})
    assert response.status_code == 200
    data = response.json()
    assert data["m_rows"] == data["l_cols"] == 256
    assert data["rel_error"] < 1e-9
    assert len(data["channels"]) == 16
    occupied = {c["channel"] for c in data["channels"] if c["occupied"]}
    assert {3, 10} <= occupied


def test_repeated_request_is_served_from_cache(test_app):
    first = test_app.get("/sensing/energy", params={"seed": 77})
    second = test_app.get("/sensing/energy", params={"seed": 77})
    assert first.json() == second.json()


@pytest.mark.asyncio
async def test_service_caches_results():
    service = SensingService(ExperimentHarness(FileResultRepo()))
    query = EnergyQuery(seed=3)
    first = await service.get_energy(query)
    second = await service.get_energy(query)
    assert first is second


@pytest.mark.asyncio
async def test_service_drops_idle_locks_and_expired_entries():
    service = SensingService(ExperimentHarness(FileResultRepo()))
    first, second = EnergyQuery(seed=3), EnergyQuery(seed=4)
    results = await asyncio.gather(service.get_energy(first), service.get_energy(first))
    assert results[0] is results[1]
    assert not service._locks
    assert not service._lock_users

    key = ("energy", first)
    _, value = service._cache[key]
    service._cache[key] = (0.0, value)
    await service.get_energy(second)
    assert key not in service._cache
    assert ("energy", second) in service._cache
