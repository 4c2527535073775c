"""
sensing_router.py

Defines API routes for single-shot spectrum sensing.
"""

from fastapi import APIRouter, Depends

from spectrum_sensing.dependencies import get_sensing_service
from spectrum_sensing.schemas.api_schemas import CsQuery, EdgeQuery, EnergyQuery
from spectrum_sensing.schemas.cs_schemas import BasisKind, MeasurementKind
from spectrum_sensing.schemas.wavelet_schemas import Combiner, WaveletFamily
from spectrum_sensing.services.sensing_service import SensingService

router = APIRouter()


@router.get("/sensing/health", status_code=200)
async def sensing_health_endpoint(
    sensing_service: SensingService = Depends(get_sensing_service),
):
    return await sensing_service.get_health()


@router.get("/sensing/energy", status_code=200)
async def sensing_energy_endpoint(
    snr_db: float = 10.0,
    n_fft: int = 64,
    target_pfa: float = 0.1,
    seed: int = 20240501,
    sensing_service: SensingService = Depends(get_sensing_service),
):
    query = EnergyQuery(snr_db=snr_db, n_fft=n_fft, target_pfa=target_pfa, seed=seed)
    return await sensing_service.get_energy(query)


@router.get("/sensing/edges", status_code=200)
async def sensing_edges_endpoint(
    snr_db: float = 10.0,
    beta: float = 0.0,
    combiner: Combiner = Combiner.WMP_NORMALIZED,
    family: WaveletFamily = WaveletFamily.GAUSSIAN,
    J: int = 2,
    eta_fraction: float = 0.2,
    n_points: int = 4096,
    seed: int = 20240501,
    sensing_service: SensingService = Depends(get_sensing_service),
):
    query = EdgeQuery(
        snr_db=snr_db,
        beta=beta,
        combiner=combiner,
        family=family,
        J=J,
        eta_fraction=eta_fraction,
        n_points=n_points,
        seed=seed,
    )
    return await sensing_service.get_edges(query)


@router.get("/sensing/cs", status_code=200)
async def sensing_cs_endpoint(
    ratio: float = 0.25,
    basis: BasisKind = BasisKind.IDENTITY,
    measurement: MeasurementKind = MeasurementKind.GAUSSIAN_IID,
    snr_db: float = 20.0,
    seed: int = 20240501,
    sensing_service: SensingService = Depends(get_sensing_service),
):
    query = CsQuery(
        ratio=ratio, basis=basis, measurement=measurement, snr_db=snr_db, seed=seed
    )
    return await sensing_service.get_cs(query)
