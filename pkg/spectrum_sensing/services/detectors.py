"""
detectors.py
Per-subchannel energy detection: FFT channelization, the energy statistic
E_k, chi-square thresholds for a target false-alarm rate and the K
independent binary decisions.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
from scipy import stats

from spectrum_sensing.errors import InsufficientSamplesError
from spectrum_sensing.schemas.detector_schemas import (
    ChannelDecision,
    ChannelSpectrum,
    EnergyStatistic,
    Hypothesis,
    ThresholdPolicy,
    is_power_of_two,
)

logger = logging.getLogger(__name__)


def channelize(
    samples_per_channel: Sequence[np.ndarray], n_fft: int
) -> List[ChannelSpectrum]:
    """Unnormalized DFT X(m) = sum_n x(n) exp(-i 2 pi m n / N_F) per channel."""
    if n_fft < 8 or not is_power_of_two(n_fft):
        raise ValueError(f"n_fft {n_fft} must be a power of two >= 8")
    spectra = []
    for k, samples in enumerate(samples_per_channel, start=1):
        samples = np.asarray(samples)
        if samples.size < n_fft:
            raise InsufficientSamplesError(
                f"Channel {k} has {samples.size} samples, needs {n_fft}"
            )
        spectra.append(ChannelSpectrum(channel_index=k, bins=np.fft.fft(samples[:n_fft])))
    return spectra


def energy_statistic(channel_spectrum: ChannelSpectrum) -> EnergyStatistic:
    value = float(np.sum(np.abs(channel_spectrum.bins) ** 2))
    return EnergyStatistic(channel_index=channel_spectrum.channel_index, value=value)


def energy_statistics(samples: np.ndarray, n_fft: int) -> np.ndarray:
    """E_k for every row of a (trials, >= n_fft) sample array."""
    samples = np.asarray(samples)
    if samples.shape[-1] < n_fft:
        raise InsufficientSamplesError(f"Rows need at least {n_fft} samples")
    bins = np.fft.fft(samples[..., :n_fft], axis=-1)
    return np.sum(np.abs(bins) ** 2, axis=-1)


def null_scale(policy: ThresholdPolicy) -> float:
    """E_k / null_scale is chi-square with 2 N_F degrees of freedom under H0."""
    return policy.noise_power * policy.n_fft / 2.0


def threshold_for_pfa(policy: ThresholdPolicy) -> float:
    dof = 2 * policy.n_fft
    return float(null_scale(policy) * stats.chi2.isf(policy.target_pfa, dof))


def decide(statistic: EnergyStatistic, threshold: float) -> ChannelDecision:
    if threshold < 0:
        raise ValueError("Threshold must be non-negative")
    # ties go to H0
    hypothesis = Hypothesis.H1 if statistic.value > threshold else Hypothesis.H0
    return ChannelDecision(
        channel_index=statistic.channel_index,
        hypothesis=hypothesis,
        statistic=statistic,
        threshold=threshold,
    )


def decide_energies(energies: Sequence[float], threshold: float) -> List[ChannelDecision]:
    return [
        decide(EnergyStatistic(channel_index=k, value=float(e)), threshold)
        for k, e in enumerate(energies, start=1)
    ]


def multiband_decide(
    per_channel_samples: Sequence[np.ndarray], policy: ThresholdPolicy
) -> List[ChannelDecision]:
    if len(per_channel_samples) < 1:
        raise ValueError("At least one channel is required")
    threshold = threshold_for_pfa(policy)
    decisions = [
        decide(energy_statistic(spectrum), threshold)
        for spectrum in channelize(per_channel_samples, policy.n_fft)
    ]
    occupied = sum(d.hypothesis == Hypothesis.H1 for d in decisions)
    logger.debug(f"{occupied}/{len(decisions)} channels decided occupied")
    return decisions


def empirical_rate(decisions: np.ndarray) -> Tuple[float, float]:
    """Fraction of positive decisions and its binomial standard error."""
    decisions = np.asarray(decisions, dtype=bool)
    n = decisions.size
    rate = float(decisions.mean())
    return rate, float(np.sqrt(rate * (1.0 - rate) / n))


def empirical_rates(
    h0_energies: np.ndarray, h1_energies: np.ndarray, threshold: float
) -> Tuple[float, float, float, float]:
    """(P_fa, its SE, P_d, its SE) of the rule E > threshold."""
    pfa, pfa_se = empirical_rate(np.asarray(h0_energies) > threshold)
    pd, pd_se = empirical_rate(np.asarray(h1_energies) > threshold)
    return pfa, pfa_se, pd, pd_se
