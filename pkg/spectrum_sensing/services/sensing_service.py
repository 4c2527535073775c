"""
sensing_service.py
Service layer for the HTTP sensing endpoints (energy, edges, compressive).
"""

import asyncio
import logging
import time
from collections import defaultdict
from typing import Any, Awaitable, Callable, Dict, List, Sequence, Tuple

from pydantic import BaseModel

from spectrum_sensing import __version__
from spectrum_sensing.config import settings
from spectrum_sensing.schemas.api_schemas import (
    ChannelResult,
    CsQuery,
    EdgeQuery,
    EnergyQuery,
    ResultCs,
    ResultEdges,
    ResultEnergy,
    ResultHealth,
)
from spectrum_sensing.schemas.detector_schemas import ChannelDecision, Hypothesis
from spectrum_sensing.schemas.experiment_schemas import ExperimentConfig
from spectrum_sensing.services.harness import ExperimentHarness, edge_scenario
from spectrum_sensing.services.wavelet_edge import edge_rmse

CacheKey = Tuple[str, BaseModel]


def _channel_results(decisions: Sequence[ChannelDecision]) -> List[ChannelResult]:
    return [
        ChannelResult(
            channel=d.channel_index,
            statistic=d.statistic.value,
            threshold=d.threshold,
            occupied=d.hypothesis == Hypothesis.H1,
        )
        for d in decisions
    ]


class SensingService:
    """
    Service class for single-shot spectrum sensing requests.
    Every request is turned into an experiment configuration and handed to
    the harness in a worker thread. Results are cached per request for
    `sensing_cache_ttl` seconds, and identical concurrent requests are
    computed once. Expired entries are evicted whenever a result is stored.
    Args:
        harness (ExperimentHarness): Runs the sensing operations.
    Methods:
        get_health() -> ResultHealth
        get_energy(req: EnergyQuery) -> ResultEnergy:
            Per-channel energy detection on synthetic channel samples.
        get_edges(req: EdgeQuery) -> ResultEdges:
            Wavelet edge detection on a synthetic wideband PSD.
        get_cs(req: CsQuery) -> ResultCs:
            Compressive reconstruction followed by energy detection.
    """

    def __init__(self, harness: ExperimentHarness):
        self.harness = harness
        logging.basicConfig(
            level=settings.loglevel,
            format="%(asctime)s - %(levelname)s - %(message)s",
        )
        self.logger = logging.getLogger(self.__class__.__name__)
        self._cache: Dict[CacheKey, Tuple[float, Any]] = {}
        self._ttl = float(settings.sensing_cache_ttl)
        # one lock per key so identical requests do not compute twice; a lock
        # is dropped once no request holds or awaits it
        self._locks: Dict[CacheKey, asyncio.Lock] = defaultdict(asyncio.Lock)
        self._lock_users: Dict[CacheKey, int] = defaultdict(int)

    def _cache_get(self, key: CacheKey):
        if self._ttl <= 0:
            return None
        item = self._cache.get(key)
        if not item:
            return None
        expiry, value = item
        if expiry < time.time():
            self._cache.pop(key, None)
            return None
        return value

    def _cache_set(self, key: CacheKey, value: Any):
        if self._ttl <= 0:
            return
        now = time.time()
        for stale in [k for k, (expiry, _) in self._cache.items() if expiry < now]:
            del self._cache[stale]
        self._cache[key] = (now + self._ttl, value)

    async def _get_or_compute(
        self, label: str, req: BaseModel, producer: Callable[[], Awaitable[Any]]
    ):
        cache_key = (label, req)
        cached = self._cache_get(cache_key)
        if cached is not None:
            return cached
        self._lock_users[cache_key] += 1
        try:
            async with self._locks[cache_key]:
                cached = self._cache_get(cache_key)
                if cached is not None:
                    return cached
                value = await producer()
                self._cache_set(cache_key, value)
                return value
        finally:
            self._lock_users[cache_key] -= 1
            if not self._lock_users[cache_key]:
                del self._lock_users[cache_key]
                self._locks.pop(cache_key, None)

    async def get_health(self) -> ResultHealth:
        return ResultHealth(status="ok", version=__version__)

    async def get_energy(self, req: EnergyQuery) -> ResultEnergy:
        config = ExperimentConfig(
            snr_db=req.snr_db,
            n_fft=req.n_fft,
            target_pfa=req.target_pfa,
            master_seed=req.seed,
        )

        async def _producer():
            decisions = await asyncio.to_thread(self.harness.sense_energy, config)
            self.logger.info(f"Energy detection for {req}")
            return ResultEnergy(channels=_channel_results(decisions))

        return await self._get_or_compute("energy", req, _producer)

    async def get_edges(self, req: EdgeQuery) -> ResultEdges:
        config = ExperimentConfig(
            snr_db=req.snr_db,
            beta=req.beta,
            combiner=req.combiner,
            family=req.family,
            J=req.J,
            eta_fraction=req.eta_fraction,
            n_points=req.n_points,
            master_seed=req.seed,
        )

        async def _producer():
            _, _, estimate = await asyncio.to_thread(self.harness.sense_edges, config)
            _, plan, _ = edge_scenario(config)
            truth = plan.edge_frequencies()
            rmse = edge_rmse(plan, estimate)
            self.logger.info(f"Edge detection for {req}: {len(estimate.frequencies)} edges")
            return ResultEdges(
                edges_mhz=estimate.frequencies,
                scores=estimate.scores,
                true_edges_mhz=truth,
                rmse_mhz=rmse,
            )

        return await self._get_or_compute("edges", req, _producer)

    async def get_cs(self, req: CsQuery) -> ResultCs:
        config = ExperimentConfig(
            cs_ratio=req.ratio,
            cs_basis=req.basis,
            cs_measurement=req.measurement,
            cs_snr_db=req.snr_db,
            master_seed=req.seed,
        )

        async def _producer():
            decisions, diagnostics = await asyncio.to_thread(
                self.harness.cs_trial,
                config,
                config.cs_occupancy,
                config.cs_ratio,
                0,
                "api",
            )
            self.logger.info(
                f"CS sensing for {req}: rel_error {diagnostics.rel_error:.4f}"
            )
            return ResultCs(
                channels=_channel_results(decisions),
                m_rows=diagnostics.m_rows,
                l_cols=diagnostics.l_cols,
                mu=diagnostics.mu,
                rel_error=diagnostics.rel_error,
                iterations=diagnostics.iterations,
                converged=diagnostics.converged,
            )

        return await self._get_or_compute("cs", req, _producer)
