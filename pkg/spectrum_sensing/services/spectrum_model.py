"""
spectrum_model.py
Synthetic wideband spectra: subchannel plans, ideal and raised-cosine
shaped PSDs, PSD-domain noise, per-channel time series and averaged
periodogram PSD estimation.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy import signal

from spectrum_sensing.errors import GridMismatchError, InsufficientSamplesError
from spectrum_sensing.schemas.spectrum_schemas import (
    MIN_GRID_POINTS,
    EdgeShape,
    FrequencyGrid,
    NoiseSpec,
    SubchannelPlan,
    TimeSeriesSpec,
    WidebandPsd,
)
from spectrum_sensing.services.seeding import derive_rng

logger = logging.getLogger(__name__)


def uniform_plan(
    f_start: float,
    f_stop: float,
    K: int,
    occupancy: Sequence[bool],
    power: Sequence[float],
) -> SubchannelPlan:
    """K equal-width contiguous subchannels spanning [f_start, f_stop]."""
    if K < 1:
        raise ValueError("K must be at least 1")
    if f_stop <= f_start:
        raise ValueError("f_stop must be greater than f_start")
    if len(occupancy) != K or len(power) != K:
        raise ValueError(
            f"Expected {K} occupancy flags and powers, got "
            f"{len(occupancy)} and {len(power)}"
        )
    boundaries = np.linspace(f_start, f_stop, K + 1)
    return SubchannelPlan(
        boundaries=boundaries.tolist(),
        occupancy=[bool(o) for o in occupancy],
        power=[float(p) for p in power],
    )


def channel_index_per_bin(plan: SubchannelPlan, grid: FrequencyGrid) -> np.ndarray:
    """Subchannel index of every grid bin, -1 outside the plan.

    Intervals are half-open [b_k, b_{k+1}) except the last one, which also
    owns its upper boundary.
    """
    if not plan.fits(grid):
        raise GridMismatchError("Plan boundaries fall outside the frequency grid")
    freqs = grid.frequencies
    bounds = np.asarray(plan.boundaries, dtype=float)
    idx = np.searchsorted(bounds, freqs, side="right") - 1
    idx[freqs == bounds[-1]] = plan.n_channels - 1
    idx[(idx < 0) | (idx >= plan.n_channels)] = -1
    return idx


def build_ideal_psd(plan: SubchannelPlan, grid: FrequencyGrid) -> WidebandPsd:
    membership = channel_index_per_bin(plan, grid)
    levels = np.append(np.asarray(plan.power, dtype=float), 0.0)
    return WidebandPsd(grid=grid, values=levels[membership])


def raised_cosine_profile(offset: np.ndarray, width: float) -> np.ndarray:
    """Share of the lower-frequency level kept at `offset` from a boundary."""
    return 0.5 * (1.0 + np.cos(np.pi * (offset + width / 2.0) / width))


def apply_raised_cosine(
    psd: WidebandPsd, edge_shape: EdgeShape, plan: SubchannelPlan
) -> WidebandPsd:
    """Replace every step transition of `plan` by a raised-cosine transition.

    The window at boundary b is T = beta * W with W the narrower adjacent
    subchannel. Outside the windows the input is left untouched.
    """
    if edge_shape.beta == 0:
        return psd
    grid = psd.grid
    freqs = grid.frequencies
    values = np.array(psd.values, dtype=float)
    widths = plan.widths
    levels = [0.0, *plan.power, 0.0]

    for i, b in enumerate(plan.boundaries):
        # boundaries on the grid extremes have no outside neighbour on the grid
        if b <= grid.f_start or b >= grid.f_stop:
            continue
        left, right = levels[i], levels[i + 1]
        if left == right:
            continue
        adjacent = [widths[k] for k in (i - 1, i) if 0 <= k < plan.n_channels]
        window = edge_shape.beta * min(adjacent)
        offset = freqs - b
        inside = np.abs(offset) < window / 2.0
        if not np.any(inside):
            continue
        step = (offset[inside] < 0).astype(float)
        profile = raised_cosine_profile(offset[inside], window)
        values[inside] += (left - right) * (profile - step)

    return WidebandPsd(grid=grid, values=np.maximum(values, 0.0))


def add_noise(psd: WidebandPsd, noise_spec: NoiseSpec, seed: int) -> WidebandPsd:
    grid = psd.grid
    n = grid.n_points
    gauss = derive_rng(seed, "psd-fluctuation").standard_normal(n)
    values = (psd.values + noise_spec.awgn_floor) * (
        1.0 + noise_spec.fluctuation_sigma * gauss
    )
    values = np.maximum(values, 0.0)

    if noise_spec.impulse_count > 0:
        if noise_spec.impulse_positions is not None:
            try:
                bins = [grid.nearest_bin(f) for f in noise_spec.impulse_positions]
            except ValueError as e:
                raise GridMismatchError(str(e)) from e
        else:
            rng = derive_rng(seed, "psd-impulses")
            bins = rng.integers(0, n, size=noise_spec.impulse_count).tolist()
        np.add.at(values, bins, noise_spec.impulse_amplitude)

    return WidebandPsd(grid=grid, values=values)


def _complex_gaussian(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def synthesize_time_series(
    plan: SubchannelPlan, noise_spec: NoiseSpec, ts_spec: TimeSeriesSpec
) -> List[np.ndarray]:
    """Complex baseband vectors r_k = x_k + w_k, one per subchannel."""
    n = ts_spec.n_samples_per_channel
    channels = []
    for k, (occupied, power) in enumerate(zip(plan.occupancy, plan.power), start=1):
        noise = _complex_gaussian(
            derive_rng(ts_spec.seed, "ts-noise", k), n, noise_spec.awgn_floor
        )
        if occupied:
            noise = noise + _complex_gaussian(
                derive_rng(ts_spec.seed, "ts-signal", k), n, power
            )
        channels.append(noise)
    return channels


def estimate_psd(
    samples: np.ndarray,
    n_fft: int,
    n_segments: int,
    sample_rate: Optional[float] = None,
) -> WidebandPsd:
    """Averaged periodogram: mean over segments of |FFT|^2 / n_fft.

    Bins keep FFT order (bin m at index m). With a sample rate (Hz) the grid
    is labelled in MHz, otherwise in cycles per sample.
    """
    if n_fft < MIN_GRID_POINTS:
        raise InsufficientSamplesError(
            f"n_fft must be at least {MIN_GRID_POINTS} for a PSD grid, got {n_fft}"
        )
    if n_segments < 1:
        raise InsufficientSamplesError(f"Need at least one segment, got {n_segments}")
    samples = np.asarray(samples)
    needed = n_fft * n_segments
    if samples.size < needed:
        raise InsufficientSamplesError(
            f"Need {needed} samples for {n_segments} segments of {n_fft}, "
            f"got {samples.size}"
        )
    _, pxx = signal.welch(
        samples[:needed],
        fs=1.0,
        window="boxcar",
        nperseg=n_fft,
        noverlap=0,
        detrend=False,
        return_onesided=False,
        scaling="density",
        average="mean",
    )
    spacing = (sample_rate / 1e6 / n_fft) if sample_rate else 1.0 / n_fft
    grid = FrequencyGrid(f_start=0.0, f_stop=spacing * (n_fft - 1), n_points=n_fft)
    logger.debug(f"Estimated PSD from {n_segments} segments of {n_fft} samples")
    return WidebandPsd(grid=grid, values=np.maximum(pxx, 0.0))
