"""
harness.py
Seeded Monte-Carlo experiment runners and single-shot sensing commands.

Work items (experiment cells, SNR points, trials) run concurrently in worker
threads, capped by a semaphore; results are always gathered in work-item
order, so outputs do not depend on the degree of parallelism.
"""

import asyncio
import logging
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from spectrum_sensing.config import settings
from spectrum_sensing.errors import ConfigError
from spectrum_sensing.repositories.interfaces.iface_result_repo import (
    ResultRepoInterface,
)
from spectrum_sensing.schemas.cs_schemas import CsDiagnostics
from spectrum_sensing.schemas.detector_schemas import (
    ChannelDecision,
    Hypothesis,
    ThresholdPolicy,
)
from spectrum_sensing.schemas.experiment_schemas import (
    CsStop,
    CsTradeoffRow,
    ExperimentConfig,
    MethodSpec,
    RmseRow,
    RmseTable,
    RmseMatching,
    RocRow,
    TrendCheck,
)
from spectrum_sensing.schemas.spectrum_schemas import (
    EdgeShape,
    FrequencyGrid,
    NoiseSpec,
    SubchannelPlan,
    TimeSeriesSpec,
    WidebandPsd,
)
from spectrum_sensing.schemas.wavelet_schemas import (
    Combiner,
    EdgeEstimate,
    EdgeThreshold,
    MultiscaleConfig,
    MultiscaleResponse,
    WaveletFamily,
)
from spectrum_sensing.services.compressive import cs_sense_pipeline
from spectrum_sensing.services.detectors import (
    empirical_rates,
    energy_statistics,
    multiband_decide,
    threshold_for_pfa,
)
from spectrum_sensing.services.plots import (
    plot_cs_tradeoff,
    plot_false_edges,
    plot_rmse_beta,
    plot_roc,
)
from spectrum_sensing.services.seeding import derive_rng, derive_seed
from spectrum_sensing.services.spectrum_model import (
    add_noise,
    apply_raised_cosine,
    build_ideal_psd,
    synthesize_time_series,
    uniform_plan,
)
from spectrum_sensing.services.wavelet_edge import (
    derivative_lobe_offset,
    detect_edges,
    edge_rmse,
    edges_to_plan,
    extract_edges,
    multiscale_response,
    two_sided_edge_rmse,
)

# impulse demo: 1400 MHz sits inside an idle channel
FALSE_EDGE_DEFAULTS: Dict[str, Any] = {
    "scenario": "false-edge",
    "n_channels": 4,
    "occupancy": [True, False, True, False],
    "impulse_count": 1,
    "impulse_positions": [1400.0],
    "impulse_amplitude": 30.0,
    "combiner": Combiner.WMP_NORMALIZED,
    "family": WaveletFamily.GAUSSIAN,
}

_ROC_CHUNK = 20_000


def band_power(config: ExperimentConfig, snr_db: float) -> float:
    return config.awgn_floor * 10.0 ** (snr_db / 10.0)


def edge_scenario(
    config: ExperimentConfig, snr_db: Optional[float] = None
) -> Tuple[FrequencyGrid, SubchannelPlan, NoiseSpec]:
    snr_db = config.snr_db if snr_db is None else snr_db
    grid = FrequencyGrid(f_start=config.f_start, f_stop=config.f_stop, n_points=config.n_points)
    power = band_power(config, snr_db)
    plan = uniform_plan(
        config.f_start,
        config.f_stop,
        config.n_channels,
        config.occupancy,
        [power if o else 0.0 for o in config.occupancy],
    )
    noise = NoiseSpec(
        awgn_floor=config.awgn_floor,
        fluctuation_sigma=config.fluctuation_sigma,
        impulse_count=config.impulse_count,
        impulse_amplitude=config.impulse_amplitude,
        impulse_positions=list(config.impulse_positions) or None,
    )
    return grid, plan, noise


def synthesize_psd(config: ExperimentConfig, seed: int) -> Tuple[WidebandPsd, SubchannelPlan]:
    grid, plan, noise = edge_scenario(config)
    shaped = apply_raised_cosine(
        build_ideal_psd(plan, grid), EdgeShape(beta=config.beta), plan
    )
    return add_noise(shaped, noise, seed), plan


def default_occupancy_threshold(config: ExperimentConfig) -> float:
    if config.occupancy_threshold is not None:
        return config.occupancy_threshold
    # halfway between the idle floor and an occupied band
    return config.awgn_floor + band_power(config, config.snr_db) / 2.0


def decisions_frame(decisions: Sequence[ChannelDecision]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "channel": [d.channel_index for d in decisions],
            "statistic": [d.statistic.value for d in decisions],
            "threshold": [d.threshold for d in decisions],
            "decision": [int(d.hypothesis) for d in decisions],
        }
    )


def edges_frame(estimate: EdgeEstimate) -> pd.DataFrame:
    return pd.DataFrame(
        {"frequency_mhz": estimate.frequencies, "score": estimate.scores},
        columns=["frequency_mhz", "score"],
    )


def mean_and_std_error(values: Sequence[float]) -> Tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        return float(arr.mean()), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


def rmse_trial_values(
    config: ExperimentConfig, snr_db: float, beta: float, method: MethodSpec
) -> List[float]:
    """Per-trial edge RMSE of one (snr, beta, method) cell, scored against the
    plan with the configured matching and one subchannel width as penalty."""
    grid, plan, noise = edge_scenario(config, snr_db)
    shaped = apply_raised_cosine(build_ideal_psd(plan, grid), EdgeShape(beta=beta), plan)
    score = (
        two_sided_edge_rmse
        if config.rmse_matching == RmseMatching.TWO_SIDED
        else edge_rmse
    )
    ms_config = MultiscaleConfig(family=method.family, J=config.J, combiner=method.combiner)
    threshold = EdgeThreshold(eta_fraction=config.eta_fraction)

    values = []
    for trial in range(config.trials):
        seed = derive_seed(config.master_seed, "rmse", snr_db, trial, method.label, beta)
        noisy = add_noise(shaped, noise, seed)
        estimate = detect_edges(noisy, ms_config, threshold, plan.n_channels)
        values.append(score(plan, estimate))
    return values


def rmse_trend_report(table: RmseTable) -> List[TrendCheck]:
    """Check the RMSE orderings: CWT grows with beta, WMP beats WMS on db1,
    and WMS with the Gaussian family beats WMS with db1."""
    checks: List[TrendCheck] = []
    frame = table.to_frame()
    if frame.empty:
        return checks

    def compare(name, snr, lower, higher, margin_se):
        pooled = math.sqrt(lower.std_error**2 + higher.std_error**2)
        margin = margin_se * pooled
        checks.append(
            TrendCheck(
                name=name,
                snr_db=snr,
                lower=lower.mean_rmse,
                higher=higher.mean_rmse,
                pooled_std_error=pooled,
                required_margin=margin,
                holds=higher.mean_rmse - lower.mean_rmse > margin,
            )
        )

    for snr in sorted(frame["snr_db"].unique()):
        betas = sorted(frame.loc[frame["snr_db"] == snr, "beta"].unique())
        for family in ("db1", "gaussian"):
            try:
                compare(
                    f"cwt_beta_growth:{family}",
                    snr,
                    table.cell(snr, betas[0], "cwt", family),
                    table.cell(snr, betas[-1], "cwt", family),
                    3.0,
                )
            except KeyError:
                pass
        for beta in (0.2, 0.3):
            try:
                compare(
                    f"wmp_below_wms:db1:beta={beta}",
                    snr,
                    table.cell(snr, beta, "wmp", "db1"),
                    table.cell(snr, beta, "wms", "db1"),
                    0.0,
                )
            except KeyError:
                pass
        try:
            compare(
                "wms_gaussian_below_db1:beta=0.3",
                snr,
                table.cell(snr, 0.3, "wms", "gaussian"),
                table.cell(snr, 0.3, "wms", "db1"),
                0.0,
            )
        except KeyError:
            pass
    return checks


class FalseEdgeResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    psd: WidebandPsd
    true_edges: List[float]
    impulse_positions: List[float]
    cwt_edges: EdgeEstimate
    wmp_edges: EdgeEstimate
    tolerance_bins: int
    lobe_offset_bins: int
    cwt_flags_impulse: bool
    wmp_flags_impulse: bool
    wmp_keeps_true_edges: bool


def _near(estimate: EdgeEstimate, frequency: float, grid: FrequencyGrid, bins: int) -> bool:
    return any(abs(f - frequency) <= (bins + 1e-6) * grid.delta_f for f in estimate.frequencies)


def _flags_impulse(
    estimate: EdgeEstimate, impulse: float, grid: FrequencyGrid, tolerance: int, lobe: int
) -> bool:
    # derivative lobes of an impulse sit at the impulse and lobe bins to either side
    return any(
        _near(estimate, impulse + side * lobe * grid.delta_f, grid, tolerance)
        for side in (-1, 0, 1)
    )


class ExperimentHarness:
    """
    Runs the sensing experiments and single-shot commands, writing every
    output through the result repository.
    Args:
        result_repo (ResultRepoInterface): Persistence for configs, spectra
        and tables.
        max_par (int): Maximum number of concurrent work items.
    """

    def __init__(self, result_repo: ResultRepoInterface, max_par: Optional[int] = None):
        self.result_repo = result_repo
        logging.basicConfig(
            level=settings.loglevel,
            format="%(asctime)s - %(levelname)s - %(message)s",
        )
        self.logger = logging.getLogger(self.__class__.__name__)
        self._max_par = int(max_par or settings.harness_max_par)

    async def _gather(self, jobs: Sequence[Callable[[], Any]]) -> List[Any]:
        semaphore = asyncio.Semaphore(self._max_par)

        async def _run(job: Callable[[], Any]) -> Any:
            async with semaphore:
                return await asyncio.to_thread(job)

        return list(await asyncio.gather(*(_run(job) for job in jobs)))

    def _echo_config(self, out_dir: Path, config: ExperimentConfig) -> None:
        self.result_repo.save_config(Path(out_dir) / "resolved.cfg", config)

    # experiments

    async def run_rmse_beta(
        self, config: ExperimentConfig, out_dir: Optional[Path] = None
    ) -> RmseTable:
        cells = [
            (snr, beta, method)
            for snr in config.snr_values
            for beta in config.beta_grid
            for method in config.method_specs
        ]
        self.logger.info(
            f"RMSE-vs-beta: {len(cells)} cells x {config.trials} trials"
        )
        results = await self._gather(
            [
                (lambda c=cell: rmse_trial_values(config, c[0], c[1], c[2]))
                for cell in cells
            ]
        )
        rows = []
        for (snr, beta, method), values in zip(cells, results):
            mean, se = mean_and_std_error(values)
            rows.append(
                RmseRow(
                    snr_db=snr,
                    beta=beta,
                    method=method.combiner.value,
                    family=method.family.value,
                    mean_rmse=mean,
                    std_error=se,
                    trials=len(values),
                )
            )
            self.logger.info(
                f"snr={snr:g} beta={beta:g} {method.label}: "
                f"RMSE {mean:.4f} +- {se:.4f} MHz"
            )
        table = RmseTable(rows=rows)

        checks = rmse_trend_report(table)
        for check in checks:
            level = logging.INFO if check.holds else logging.WARNING
            self.logger.log(
                level,
                f"{check.name} @ {check.snr_db:g} dB: {check.lower:.4f} < "
                f"{check.higher:.4f} (margin {check.required_margin:.4f}) "
                f"-> {'holds' if check.holds else 'does not hold'}",
            )

        if out_dir is not None:
            out_dir = Path(out_dir)
            frame = table.to_frame()
            self.result_repo.save_table(out_dir / "rmse_beta.csv", frame)
            self.result_repo.save_table(
                out_dir / "rmse_trends.csv",
                pd.DataFrame([c.model_dump() for c in checks], columns=list(TrendCheck.model_fields)),
            )
            plot_rmse_beta(frame, out_dir / "rmse_beta.svg")
            self._echo_config(out_dir, config)
        return table

    async def run_false_edge_demo(
        self, config: ExperimentConfig, out_dir: Optional[Path] = None
    ) -> FalseEdgeResult:
        if not config.impulse_positions:
            raise ConfigError("The false-edge demo needs explicit impulse_positions")
        seed = derive_seed(config.master_seed, "false-edge")
        psd, plan = synthesize_psd(config, seed)
        threshold = EdgeThreshold(eta_fraction=config.eta_fraction)
        cwt_config = MultiscaleConfig(family=config.family, J=1, combiner=Combiner.CWT)
        wmp_config = MultiscaleConfig(
            family=config.family, J=config.J, combiner=Combiner.WMP_NORMALIZED
        )
        cwt_edges, wmp_edges = await self._gather(
            [
                lambda: detect_edges(psd, cwt_config, threshold, plan),
                lambda: detect_edges(psd, wmp_config, threshold, plan),
            ]
        )
        tolerance = 2
        lobe = derivative_lobe_offset(config.family, 2)
        truth = plan.edge_frequencies()
        grid = psd.grid
        result = FalseEdgeResult(
            psd=psd,
            true_edges=truth,
            impulse_positions=list(config.impulse_positions),
            cwt_edges=cwt_edges,
            wmp_edges=wmp_edges,
            tolerance_bins=tolerance,
            lobe_offset_bins=lobe,
            cwt_flags_impulse=any(
                _flags_impulse(cwt_edges, f, grid, tolerance, lobe)
                for f in config.impulse_positions
            ),
            # anything between the outer lobes counts against the product
            wmp_flags_impulse=any(
                _near(wmp_edges, f, grid, lobe + tolerance) for f in config.impulse_positions
            ),
            wmp_keeps_true_edges=all(_near(wmp_edges, f, grid, tolerance) for f in truth),
        )
        self.logger.info(
            f"False-edge demo: CWT flags impulse={result.cwt_flags_impulse}, "
            f"normalized WMP flags impulse={result.wmp_flags_impulse}, "
            f"WMP keeps true edges={result.wmp_keeps_true_edges}"
        )

        if out_dir is not None:
            out_dir = Path(out_dir)
            self.result_repo.save_psd(out_dir / "psd.txt", psd)
            self.result_repo.save_plan(out_dir / "plan.txt", plan)
            self.result_repo.save_table(out_dir / "edges_cwt.csv", edges_frame(cwt_edges))
            self.result_repo.save_table(
                out_dir / "edges_wmp_normalized.csv", edges_frame(wmp_edges)
            )
            self.result_repo.save_table(
                out_dir / "true_edges.csv", pd.DataFrame({"frequency_mhz": truth})
            )
            plot_false_edges(
                psd,
                {
                    "CWT derivative": cwt_edges.frequencies,
                    "normalized WMP": wmp_edges.frequencies,
                },
                truth,
                config.impulse_positions,
                out_dir / "false_edge.svg",
            )
            self._echo_config(out_dir, config)
        return result

    def _roc_point(self, config: ExperimentConfig, snr_db: float) -> List[RocRow]:
        n_fft = config.n_fft
        power = 0.0 if math.isinf(snr_db) and snr_db < 0 else band_power(config, snr_db)
        h0_rng = derive_rng(config.master_seed, "roc", snr_db, "h0")
        h1_rng = derive_rng(config.master_seed, "roc", snr_db, "h1")
        h0, h1 = [], []
        remaining = config.roc_trials
        while remaining > 0:
            n = min(_ROC_CHUNK, remaining)
            h0.append(energy_statistics(_noise_block(h0_rng, n, n_fft, config.awgn_floor), n_fft))
            samples = _noise_block(h1_rng, n, n_fft, config.awgn_floor)
            if power > 0:
                samples = samples + _noise_block(h1_rng, n, n_fft, power)
            h1.append(energy_statistics(samples, n_fft))
            remaining -= n
        e0, e1 = np.concatenate(h0), np.concatenate(h1)

        rows = []
        for pfa in config.pfa_grid:
            policy = ThresholdPolicy(target_pfa=pfa, noise_power=config.awgn_floor, n_fft=n_fft)
            xi = threshold_for_pfa(policy)
            pfa_hat, pfa_se, pd_hat, pd_se = empirical_rates(e0, e1, xi)
            rows.append(
                RocRow(
                    snr_db=snr_db,
                    target_pfa=pfa,
                    threshold=xi,
                    empirical_pfa=pfa_hat,
                    pfa_std_error=pfa_se,
                    empirical_pd=pd_hat,
                    pd_std_error=pd_se,
                    trials=config.roc_trials,
                )
            )
        return rows

    async def run_roc(
        self, config: ExperimentConfig, out_dir: Optional[Path] = None
    ) -> pd.DataFrame:
        results = await self._gather(
            [(lambda s=snr: self._roc_point(config, s)) for snr in config.roc_snr_db]
        )
        rows = [row for block in results for row in block]
        frame = pd.DataFrame([r.model_dump() for r in rows], columns=list(RocRow.model_fields))
        for row in rows:
            self.logger.info(
                f"snr={row.snr_db:g} pfa target {row.target_pfa:g}: "
                f"empirical pfa {row.empirical_pfa:.4f}, pd {row.empirical_pd:.4f}"
            )
        if out_dir is not None:
            out_dir = Path(out_dir)
            self.result_repo.save_table(out_dir / "roc.csv", frame)
            plot_roc(frame, out_dir / "roc.svg")
            self._echo_config(out_dir, config)
        return frame

    def cs_trial(
        self,
        config: ExperimentConfig,
        occupancy: Sequence[bool],
        ratio: float,
        trial: int,
        label: str,
    ) -> Tuple[List[ChannelDecision], CsDiagnostics]:
        plan = cs_plan(config, occupancy)
        ts_seed = derive_seed(config.master_seed, "cs", label, ratio, trial)
        samples = synthesize_time_series(
            plan,
            NoiseSpec(awgn_floor=config.awgn_floor, fluctuation_sigma=0.0),
            TimeSeriesSpec(n_samples_per_channel=config.cs_n_fft, seed=ts_seed),
        )
        policy = ThresholdPolicy(
            target_pfa=config.target_pfa, noise_power=config.awgn_floor, n_fft=config.cs_n_fft
        )
        return cs_sense_pipeline(
            samples,
            ratio,
            config.cs_basis,
            policy,
            seed=derive_seed(ts_seed, "theta"),
            measurement_kind=config.cs_measurement,
            max_atoms_fraction=config.cs_max_atoms_fraction,
            trial=trial,
            sparsity=(
                sum(occupancy) * config.cs_n_fft
                if config.cs_stop == CsStop.SPARSITY
                else None
            ),
        )

    def _cs_cell(
        self, config: ExperimentConfig, occupancy: Sequence[bool], ratio: float, label: str
    ) -> CsTradeoffRow:
        errors, mus, hits, false_alarms = [], [], [], []
        diagnostics = None
        for trial in range(config.cs_trials):
            decisions, diagnostics = self.cs_trial(config, occupancy, ratio, trial, label)
            errors.append(diagnostics.rel_error)
            mus.append(diagnostics.mu)
            for occupied, decision in zip(occupancy, decisions):
                positive = decision.hypothesis == Hypothesis.H1
                (hits if occupied else false_alarms).append(positive)
        mean_err, se_err = mean_and_std_error(errors)
        return CsTradeoffRow(
            ratio=ratio,
            m_rows=diagnostics.m_rows,
            l_cols=diagnostics.l_cols,
            mean_rel_error=mean_err,
            rel_error_std_error=se_err,
            mean_mu=float(np.mean(mus)),
            detection_rate=float(np.mean(hits)) if hits else float("nan"),
            false_alarm_rate=float(np.mean(false_alarms)) if false_alarms else float("nan"),
            trials=config.cs_trials,
        )

    async def run_cs_tradeoff(
        self, config: ExperimentConfig, out_dir: Optional[Path] = None
    ) -> pd.DataFrame:
        scenarios = [
            ("sparse", list(config.cs_occupancy)),
            ("dense", [True] * config.cs_channels),
        ]
        cells = [(label, occ, ratio) for label, occ in scenarios for ratio in config.cs_ratio_grid]
        results = await self._gather(
            [
                (lambda c=cell: self._cs_cell(config, c[1], c[2], c[0]))
                for cell in cells
            ]
        )
        records = []
        for (label, _, _), row in zip(cells, results):
            records.append({"occupancy": label, **row.model_dump()})
            self.logger.info(
                f"{label} M/L={row.ratio:g}: rel_error {row.mean_rel_error:.4f}, "
                f"mu {row.mean_mu:.3f}, detection {row.detection_rate:.3f}"
            )
        frame = pd.DataFrame(
            records, columns=["occupancy", *CsTradeoffRow.model_fields]
        )
        if out_dir is not None:
            out_dir = Path(out_dir)
            self.result_repo.save_table(out_dir / "cs_tradeoff.csv", frame)
            plot_cs_tradeoff(frame[frame["occupancy"] == "sparse"], out_dir / "cs_tradeoff.svg")
            self._echo_config(out_dir, config)
        return frame

    # single-shot commands

    def generate(self, config: ExperimentConfig, out_dir: Path) -> WidebandPsd:
        grid, plan, _ = edge_scenario(config)
        seed = derive_seed(config.master_seed, "generate")
        psd, _ = synthesize_psd(config, seed)
        out_dir = Path(out_dir)
        self.result_repo.save_psd(out_dir / "ideal_psd.txt", build_ideal_psd(plan, grid))
        self.result_repo.save_psd(out_dir / "psd.txt", psd)
        self.result_repo.save_plan(out_dir / "plan.txt", plan)
        self._echo_config(out_dir, config)
        return psd

    def sense_energy(self, config: ExperimentConfig) -> List[ChannelDecision]:
        _, plan, noise = edge_scenario(config)
        samples = synthesize_time_series(
            plan,
            noise,
            TimeSeriesSpec(
                n_samples_per_channel=config.n_fft,
                seed=derive_seed(config.master_seed, "detect-energy"),
            ),
        )
        policy = ThresholdPolicy(
            target_pfa=config.target_pfa, noise_power=config.awgn_floor, n_fft=config.n_fft
        )
        return multiband_decide(samples, policy)

    def detect_energy(
        self, config: ExperimentConfig, out_dir: Path
    ) -> List[ChannelDecision]:
        decisions = self.sense_energy(config)
        out_dir = Path(out_dir)
        self.result_repo.save_table(out_dir / "decisions.csv", decisions_frame(decisions))
        self._echo_config(out_dir, config)
        return decisions

    def sense_edges(
        self, config: ExperimentConfig, psd: Optional[WidebandPsd] = None
    ) -> Tuple[WidebandPsd, MultiscaleResponse, EdgeEstimate]:
        if psd is None:
            psd, _ = synthesize_psd(config, derive_seed(config.master_seed, "detect-edges"))
        ms_config = MultiscaleConfig(family=config.family, J=config.J, combiner=config.combiner)
        response = multiscale_response(psd, ms_config, config.n_channels)
        neighborhood = (
            2 if config.combiner in (Combiner.CWT, Combiner.WMM) else ms_config.neighborhood
        )
        estimate = extract_edges(
            response, EdgeThreshold(eta_fraction=config.eta_fraction), neighborhood
        )
        return psd, response, estimate

    def detect_edges(
        self, config: ExperimentConfig, out_dir: Path, psd_path: Optional[Path] = None
    ) -> EdgeEstimate:
        psd = self.result_repo.load_psd(psd_path) if psd_path is not None else None
        psd, response, estimate = self.sense_edges(config, psd)
        estimated_plan = edges_to_plan(
            estimate, psd.grid, psd, default_occupancy_threshold(config)
        )
        out_dir = Path(out_dir)
        self.result_repo.save_table(out_dir / "edges.csv", edges_frame(estimate))
        self.result_repo.save_response(
            out_dir / "response.txt",
            response,
            f"combiner={config.combiner.value} J={config.J} family={config.family.value}",
        )
        self.result_repo.save_plan(out_dir / "estimated_plan.txt", estimated_plan)
        self._echo_config(out_dir, config)
        return estimate

    async def cs_recover(self, config: ExperimentConfig, out_dir: Path) -> pd.DataFrame:
        results = await self._gather(
            [
                (lambda t=trial: self.cs_trial(config, config.cs_occupancy, config.cs_ratio, t, "recover"))
                for trial in range(config.cs_trials)
            ]
        )
        frame = pd.DataFrame(
            [
                {
                    "trial": d.trial,
                    "M": d.m_rows,
                    "L": d.l_cols,
                    "mu": d.mu,
                    "rel_error": d.rel_error,
                    "iterations": d.iterations,
                    "converged": int(d.converged),
                }
                for _, d in results
            ],
            columns=["trial", "M", "L", "mu", "rel_error", "iterations", "converged"],
        )
        out_dir = Path(out_dir)
        self.result_repo.save_table(out_dir / "cs_diagnostics.csv", frame)
        self.result_repo.save_table(out_dir / "decisions.csv", decisions_frame(results[0][0]))
        self._echo_config(out_dir, config)
        return frame


def _noise_block(rng: np.random.Generator, n: int, n_fft: int, variance: float) -> np.ndarray:
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal((n, n_fft)) + 1j * rng.standard_normal((n, n_fft)))


def cs_plan(config: ExperimentConfig, occupancy: Sequence[bool]) -> SubchannelPlan:
    power = band_power(config, config.cs_snr_db)
    k = len(occupancy)
    return uniform_plan(0.0, float(k), k, occupancy, [power if o else 0.0 for o in occupancy])
