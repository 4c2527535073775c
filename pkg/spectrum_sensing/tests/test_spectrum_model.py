"""
# Tests for the wideband spectrum model
Plans, ideal and raised-cosine PSDs, PSD-domain noise, per-channel time
series and the averaged-periodogram PSD estimate.
"""

import numpy as np
import pytest

from spectrum_sensing.errors import GridMismatchError, InsufficientSamplesError
from spectrum_sensing.schemas.spectrum_schemas import (
    EdgeShape,
    FrequencyGrid,
    NoiseSpec,
    SubchannelPlan,
    TimeSeriesSpec,
)
from spectrum_sensing.services.spectrum_model import (
    add_noise,
    apply_raised_cosine,
    build_ideal_psd,
    estimate_psd,
    synthesize_time_series,
    uniform_plan,
)


@pytest.fixture
def grid():
    return FrequencyGrid(f_start=0.0, f_stop=100.0, n_points=101)


@pytest.fixture
def plan():
    return uniform_plan(0.0, 100.0, 4, [True, False, True, False], [5.0, 0.0, 7.0, 0.0])


def test_uniform_plan_boundaries(plan):
    assert plan.boundaries == [0.0, 25.0, 50.0, 75.0, 100.0]
    assert plan.n_channels == 4
    np.testing.assert_allclose(plan.widths, 25.0)


def test_uniform_plan_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        uniform_plan(0.0, 100.0, 3, [True, False], [1.0, 0.0])


def test_plan_rejects_power_on_idle_channel():
    with pytest.raises(ValueError):
        SubchannelPlan(boundaries=[0.0, 1.0, 2.0], occupancy=[True, False], power=[1.0, 2.0])


def test_edge_frequencies_only_where_level_changes():
    plan = uniform_plan(0.0, 30.0, 3, [True, True, False], [5.0, 5.0, 0.0])
    assert plan.edge_frequencies() == [20.0]


def test_ideal_psd_levels(grid, plan):
    psd = build_ideal_psd(plan, grid)
    values = dict(zip(grid.frequencies.tolist(), psd.values.tolist()))
    assert values[10.0] == 5.0
    # intervals are half-open on the right
    assert values[25.0] == 0.0
    assert values[50.0] == 7.0
    # last interval owns the upper grid end
    assert values[100.0] == 0.0


def test_ideal_psd_rejects_plan_outside_grid(grid):
    plan = uniform_plan(0.0, 200.0, 2, [True, False], [1.0, 0.0])
    with pytest.raises(GridMismatchError):
        build_ideal_psd(plan, grid)


def test_raised_cosine_zero_beta_is_identity(grid, plan):
    psd = build_ideal_psd(plan, grid)
    assert apply_raised_cosine(psd, EdgeShape(beta=0.0), plan) is psd


def test_raised_cosine_transition(grid, plan):
    ideal = build_ideal_psd(plan, grid)
    # window T = 0.4 * 25 = 10 MHz around each boundary
    shaped = apply_raised_cosine(ideal, EdgeShape(beta=0.4), plan)
    freqs = grid.frequencies
    at = dict(zip(freqs.tolist(), shaped.values.tolist()))

    assert at[25.0] == pytest.approx(2.5)
    assert at[21.0] == pytest.approx(5.0 * 0.5 * (1 + np.cos(np.pi * 0.1)))
    window = shaped.values[(freqs >= 20) & (freqs <= 30)]
    assert np.all(np.diff(window) <= 1e-12)

    outside = np.ones(freqs.size, dtype=bool)
    for b in (25.0, 50.0, 75.0):
        outside &= np.abs(freqs - b) >= 5.0
    np.testing.assert_allclose(shaped.values[outside], ideal.values[outside])
    assert np.all(shaped.values >= 0)


def test_add_noise_is_seed_deterministic(grid, plan):
    psd = build_ideal_psd(plan, grid)
    spec = NoiseSpec(awgn_floor=1.0, fluctuation_sigma=0.05)
    a = add_noise(psd, spec, seed=7)
    b = add_noise(psd, spec, seed=7)
    c = add_noise(psd, spec, seed=8)
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_add_noise_floor_and_impulse(grid, plan):
    psd = build_ideal_psd(plan, grid)
    spec = NoiseSpec(
        awgn_floor=1.0,
        fluctuation_sigma=0.0,
        impulse_count=1,
        impulse_amplitude=30.0,
        impulse_positions=[40.2],
    )
    noisy = add_noise(psd, spec, seed=1)
    expected = psd.values + 1.0
    expected[40] += 30.0
    np.testing.assert_allclose(noisy.values, expected)


def test_add_noise_impulse_outside_grid(grid, plan):
    spec = NoiseSpec(impulse_count=1, impulse_amplitude=3.0, impulse_positions=[500.0])
    with pytest.raises(GridMismatchError):
        add_noise(build_ideal_psd(plan, grid), spec, seed=1)


def test_time_series_channel_powers(plan):
    spec = TimeSeriesSpec(n_samples_per_channel=8192, seed=3)
    channels = synthesize_time_series(plan, NoiseSpec(awgn_floor=1.0), spec)
    assert len(channels) == 4
    powers = [float(np.mean(np.abs(x) ** 2)) for x in channels]
    assert powers[0] == pytest.approx(6.0, rel=0.1)
    assert powers[1] == pytest.approx(1.0, rel=0.1)
    assert powers[2] == pytest.approx(8.0, rel=0.1)
    again = synthesize_time_series(plan, NoiseSpec(awgn_floor=1.0), spec)
    np.testing.assert_array_equal(channels[2], again[2])


def test_estimate_psd_of_white_noise():
    rng = np.random.default_rng(11)
    samples = rng.standard_normal(64 * 400) + 1j * rng.standard_normal(64 * 400)
    psd = estimate_psd(samples, n_fft=64, n_segments=400)
    assert psd.grid.n_points == 64
    assert float(np.mean(psd.values)) == pytest.approx(2.0, rel=0.05)


def test_estimate_psd_keeps_fft_order():
    n = np.arange(64 * 4)
    tone = np.exp(2j * np.pi * 5 * n / 64)
    psd = estimate_psd(tone, n_fft=64, n_segments=4, sample_rate=64e6)
    assert int(np.argmax(psd.values)) == 5
    assert psd.grid.delta_f == pytest.approx(1.0)


def test_estimate_psd_needs_enough_samples():
    with pytest.raises(InsufficientSamplesError):
        estimate_psd(np.zeros(100), n_fft=64, n_segments=2)


@pytest.mark.parametrize("n_fft, n_segments", [(8, 4), (15, 2), (64, 0)])
def test_estimate_psd_rejects_short_grids(n_fft, n_segments):
    with pytest.raises(InsufficientSamplesError):
        estimate_psd(np.zeros(1024), n_fft=n_fft, n_segments=n_segments)
