"""
wavelet_edge.py
Edge detection on the wideband PSD with dilated smoothing kernels.

The PSD is smoothed at dyadic scales s = 2^j, differentiated, and the
derivative responses are used alone (CWT / WMM), multiplied (WMP,
optionally normalized by the mean channel energy) or summed (WMS). Edges
are the local maxima of the response magnitude above a fraction of its
global maximum.
"""

import logging
import math
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import signal, stats

from spectrum_sensing.config import settings
from spectrum_sensing.errors import GridMismatchError, NormalizationError
from spectrum_sensing.schemas.spectrum_schemas import (
    FrequencyGrid,
    SubchannelPlan,
    WidebandPsd,
)
from spectrum_sensing.schemas.wavelet_schemas import (
    Combiner,
    EdgeEstimate,
    EdgeThreshold,
    MultiscaleConfig,
    MultiscaleResponse,
    SmoothingKernel,
    WaveletFamily,
)
from spectrum_sensing.services.spectrum_model import channel_index_per_bin

logger = logging.getLogger(__name__)

# base widths at s = 1, in grid bins
GAUSSIAN_SIGMA_BINS = 2.0
DB1_WIDTH_BINS = 4
SUPPORTED_SCALES = tuple(2**j for j in range(1, 9))
_TRUNCATION = 1e-12

PlanOrK = Union[SubchannelPlan, int]


def _check_scale(scale: int) -> None:
    if scale not in SUPPORTED_SCALES:
        raise ValueError(f"Unsupported scale {scale}; expected one of {SUPPORTED_SCALES}")


@lru_cache(maxsize=settings.kernel_cache_size)
def _kernel_arrays(
    family: WaveletFamily, scale: int, delta_f: float
) -> Tuple[int, np.ndarray, int, np.ndarray]:
    """(origin, smoothing samples, derivative origin, derivative samples)."""
    if family == WaveletFamily.GAUSSIAN:
        sigma_bins = GAUSSIAN_SIGMA_BINS * scale
        half = math.ceil(sigma_bins * math.sqrt(2.0 * math.log(1.0 / _TRUNCATION)))
        offsets = np.arange(-half, half + 1) * delta_f
        sigma = sigma_bins * delta_f
        smooth = stats.norm.pdf(offsets, scale=sigma)
        deriv = -offsets / sigma**2 * smooth
        smooth.setflags(write=False)
        deriv.setflags(write=False)
        return half, smooth, half, deriv

    width = DB1_WIDTH_BINS * scale
    smooth = np.full(width, 1.0 / (width * delta_f))
    # Haar difference of two adjacent boxes: mean of [i, i+w) minus mean of
    # [i-w, i), over w * delta_f. A step between bins b-1 and b peaks at b.
    deriv = np.concatenate(
        [np.full(width, 1.0), np.full(width, -1.0)]
    ) / (width * delta_f) ** 2
    smooth.setflags(write=False)
    deriv.setflags(write=False)
    return width // 2, smooth, width - 1, deriv


def kernel_samples(
    family: WaveletFamily, scale: int, grid: FrequencyGrid
) -> SmoothingKernel:
    """psi_s(f) = (1/s) psi(f/s) sampled at the grid spacing."""
    _check_scale(scale)
    family = WaveletFamily(family)
    origin, smooth, _, _ = _kernel_arrays(family, scale, grid.delta_f)
    return SmoothingKernel(
        family=family,
        scale=scale,
        delta_f=grid.delta_f,
        origin=origin,
        support=smooth,
    )


def derivative_lobe_offset(family: WaveletFamily, scale: int) -> int:
    """Distance in bins between an isolated impulse and the peak of the
    derivative response it produces at `scale`.

    The db1 response to an impulse is a plateau one box wide on either side,
    so the farthest plateau bin is returned.
    """
    _check_scale(scale)
    if WaveletFamily(family) == WaveletFamily.GAUSSIAN:
        return int(math.ceil(GAUSSIAN_SIGMA_BINS * scale))
    return DB1_WIDTH_BINS * scale


def _check_grid(psd: WidebandPsd, kernel: SmoothingKernel) -> None:
    if not math.isclose(psd.grid.delta_f, kernel.delta_f, rel_tol=1e-9):
        raise GridMismatchError(
            f"Kernel spacing {kernel.delta_f} does not match grid spacing "
            f"{psd.grid.delta_f}"
        )


def convolve_reflect(
    values: np.ndarray,
    support: np.ndarray,
    origin: int,
    delta_f: float,
    method: str = "fft",
) -> np.ndarray:
    """sum_j x(i - (j - origin)) k(j) delta_f with symmetric reflection."""
    n = support.size
    padded = np.pad(values, (n - 1 - origin, origin), mode="symmetric")
    if method == "fft":
        out = signal.fftconvolve(padded, support, mode="valid")
    elif method == "direct":
        out = np.convolve(padded, support, mode="valid")
    else:
        raise ValueError(f"Unknown convolution method {method}")
    return out * delta_f


def cwt(psd: WidebandPsd, kernel: SmoothingKernel, method: str = "fft") -> MultiscaleResponse:
    _check_grid(psd, kernel)
    values = convolve_reflect(
        psd.values, kernel.support, kernel.origin, kernel.delta_f, method
    )
    return MultiscaleResponse(grid=psd.grid, values=values, label=f"cwt_s{kernel.scale}")


def cwt_derivative(
    psd: WidebandPsd, kernel: SmoothingKernel, method: str = "fft"
) -> MultiscaleResponse:
    """d/df of the smoothed PSD.

    Gaussian: convolution with the sampled derivative of the kernel. db1:
    central difference of the box-smoothed PSD taken half a box to either
    side, W(i + w/2 - 1) - W(i - w/2 - 1) over w * delta_f, which is the Haar
    wavelet response at that scale.
    """
    _check_grid(psd, kernel)
    _, _, origin, deriv = _kernel_arrays(kernel.family, kernel.scale, kernel.delta_f)
    values = convolve_reflect(psd.values, deriv, origin, kernel.delta_f, method)
    return MultiscaleResponse(grid=psd.grid, values=values, label=f"dcwt_s{kernel.scale}")


def derivative_responses(psd: WidebandPsd, config: MultiscaleConfig) -> List[np.ndarray]:
    """W'_s for s = 2, 4, ..., 2^J in increasing scale order."""
    return [
        cwt_derivative(psd, kernel_samples(config.family, s, psd.grid)).values
        for s in config.scales
    ]


def wmp(psd: WidebandPsd, config: MultiscaleConfig) -> MultiscaleResponse:
    product = np.prod(np.vstack(derivative_responses(psd, config)), axis=0)
    return MultiscaleResponse(grid=psd.grid, values=product, label="wmp")


def channel_energies(psd: WidebandPsd, plan_or_K: PlanOrK) -> np.ndarray:
    """E_k as the integral of the PSD over subchannel k."""
    grid = psd.grid
    if isinstance(plan_or_K, SubchannelPlan):
        membership = channel_index_per_bin(plan_or_K, grid)
        k = plan_or_K.n_channels
    else:
        k = int(plan_or_K)
        if k < 1:
            raise ValueError("K must be at least 1")
        bounds = np.linspace(grid.f_start, grid.f_stop, k + 1)
        membership = np.clip(
            np.searchsorted(bounds, grid.frequencies, side="right") - 1, 0, k - 1
        )
    inside = membership >= 0
    energies = np.bincount(
        membership[inside], weights=psd.values[inside], minlength=k
    )
    return energies * grid.delta_f


def wmp_normalized(
    psd: WidebandPsd, config: MultiscaleConfig, plan_or_K: PlanOrK
) -> MultiscaleResponse:
    mean_energy = float(np.mean(channel_energies(psd, plan_or_K)))
    if mean_energy <= 0:
        raise NormalizationError("Mean channel energy is zero; cannot normalize WMP")
    values = wmp(psd, config).values / mean_energy**config.J
    return MultiscaleResponse(grid=psd.grid, values=values, label="wmp_normalized")


def wms(psd: WidebandPsd, config: MultiscaleConfig) -> MultiscaleResponse:
    total = np.sum(np.vstack(derivative_responses(psd, config)), axis=0)
    return MultiscaleResponse(grid=psd.grid, values=total, label="wms")


def multiscale_response(
    psd: WidebandPsd, config: MultiscaleConfig, plan_or_K: Optional[PlanOrK] = None
) -> MultiscaleResponse:
    if config.combiner in (Combiner.CWT, Combiner.WMM):
        kernel = kernel_samples(config.family, config.scales[0], psd.grid)
        return cwt_derivative(psd, kernel)
    if config.combiner == Combiner.WMP:
        return wmp(psd, config)
    if config.combiner == Combiner.WMS:
        return wms(psd, config)
    if plan_or_K is None:
        raise ValueError("Normalized WMP needs a plan or a channel count")
    return wmp_normalized(psd, config, plan_or_K)


def wmm_edges(
    response: MultiscaleResponse, threshold: EdgeThreshold, neighborhood: int = 2
) -> EdgeEstimate:
    """Local maxima of |response| over +-neighborhood bins above eta * max.

    Inside a plateau only the lowest-frequency bin qualifies: a bin must be
    strictly above everything to its left and not below anything to its right.
    """
    magnitude = np.abs(response.values)
    peak = float(magnitude.max()) if magnitude.size else 0.0
    if peak <= 0:
        return EdgeEstimate()
    w = max(1, int(neighborhood))
    padded = np.pad(magnitude, w, mode="constant", constant_values=-np.inf)
    windows = sliding_window_view(padded, 2 * w + 1)
    left = windows[:, :w].max(axis=1)
    right = windows[:, w + 1 :].max(axis=1)
    is_max = (
        (magnitude > left)
        & (magnitude >= right)
        & (magnitude >= threshold.eta_fraction * peak)
        & (magnitude > 0)
    )
    bins = np.flatnonzero(is_max)
    freqs = response.grid.frequencies[bins]
    return EdgeEstimate(
        frequencies=freqs.tolist(),
        scores=magnitude[bins].tolist(),
        bins=bins.tolist(),
    )


def extract_edges(
    response: MultiscaleResponse, threshold: EdgeThreshold, neighborhood: int = 2
) -> EdgeEstimate:
    return wmm_edges(response, threshold, neighborhood)


def detect_edges(
    psd: WidebandPsd,
    config: MultiscaleConfig,
    threshold: EdgeThreshold,
    plan_or_K: Optional[PlanOrK] = None,
) -> EdgeEstimate:
    response = multiscale_response(psd, config, plan_or_K)
    neighborhood = 2 if config.combiner in (Combiner.CWT, Combiner.WMM) else config.neighborhood
    return extract_edges(response, threshold, neighborhood)


def edges_to_plan(
    edge_estimate: EdgeEstimate,
    grid: FrequencyGrid,
    psd: WidebandPsd,
    occupancy_threshold: float,
) -> SubchannelPlan:
    for f in edge_estimate.frequencies:
        if f < grid.f_start or f > grid.f_stop:
            raise GridMismatchError(f"Edge {f} MHz outside the grid")
    interior = sorted(
        {f for f in edge_estimate.frequencies if grid.f_start < f < grid.f_stop}
    )
    bounds = np.array([grid.f_start, *interior, grid.f_stop])
    k = bounds.size - 1
    freqs = grid.frequencies
    membership = np.clip(np.searchsorted(bounds, freqs, side="right") - 1, 0, k - 1)
    sums = np.bincount(membership, weights=psd.values, minlength=k)
    counts = np.bincount(membership, minlength=k)
    means = np.divide(sums, counts, out=np.zeros(k), where=counts > 0)
    occupied = means > occupancy_threshold
    return SubchannelPlan(
        boundaries=bounds.tolist(),
        occupancy=occupied.tolist(),
        power=np.where(occupied, means, 0.0).tolist(),
    )


TruthOrPlan = Union[SubchannelPlan, Sequence[float]]


def _truth_and_width(
    true_boundaries: TruthOrPlan, penalty_width: Optional[float]
) -> Tuple[np.ndarray, float]:
    """True edges and the miss penalty: explicit width, else the narrowest
    subchannel of the plan, else the narrowest spacing of the true edges.
    A lone bare edge has no width to fall back on and misses cost inf."""
    if isinstance(true_boundaries, SubchannelPlan):
        truth = np.asarray(true_boundaries.edge_frequencies(), dtype=float)
        width = float(true_boundaries.widths.min())
    else:
        truth = np.asarray(list(true_boundaries), dtype=float)
        distinct = np.unique(truth)
        width = float(np.diff(distinct).min()) if distinct.size > 1 else math.inf
    if penalty_width is not None:
        width = float(penalty_width)
    return truth, width


def _estimated(estimated_edges: Union[EdgeEstimate, Iterable[float]]) -> np.ndarray:
    if isinstance(estimated_edges, EdgeEstimate):
        return np.asarray(estimated_edges.frequencies, dtype=float)
    return np.asarray(list(estimated_edges), dtype=float)


def edge_rmse(
    true_boundaries: TruthOrPlan,
    estimated_edges: Union[EdgeEstimate, Iterable[float]],
    penalty_width: Optional[float] = None,
) -> float:
    """RMSE between each true edge and its nearest estimate (reuse allowed).

    An empty estimate costs penalty_width^2 per true edge. Pass the plan as
    `true_boundaries` to default the penalty to its subchannel width.
    """
    truth, width = _truth_and_width(true_boundaries, penalty_width)
    if truth.size == 0:
        return 0.0
    estimated = _estimated(estimated_edges)
    if estimated.size == 0:
        return width

    errors = np.min(np.abs(truth[:, None] - estimated[None, :]), axis=1)
    return float(np.sqrt(np.mean(errors**2)))


def two_sided_edge_rmse(
    true_boundaries: TruthOrPlan,
    estimated_edges: Union[EdgeEstimate, Iterable[float]],
    penalty_width: Optional[float] = None,
) -> float:
    """RMSE over every true edge scored against its nearest estimate and
    every estimate scored against its nearest true edge.

    Unlike edge_rmse, extra maxima around or between the true edges add
    error instead of offering closer matches.
    """
    truth, width = _truth_and_width(true_boundaries, penalty_width)
    estimated = _estimated(estimated_edges)
    if truth.size == 0 and estimated.size == 0:
        return 0.0
    if truth.size == 0 or estimated.size == 0:
        return width

    gaps = np.abs(truth[:, None] - estimated[None, :])
    errors = np.concatenate([gaps.min(axis=1), gaps.min(axis=0)])
    return float(np.sqrt(np.mean(errors**2)))
