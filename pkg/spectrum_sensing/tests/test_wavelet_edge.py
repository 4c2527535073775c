"""
# Tests for wavelet edge detection
Kernels, convolution with reflection, multiscale combiners, local-maximum
extraction, the edge-to-plan conversion and the RMSE metric.
"""

import numpy as np
import pytest

from spectrum_sensing.errors import GridMismatchError, NormalizationError
from spectrum_sensing.schemas.spectrum_schemas import (
    EdgeShape,
    FrequencyGrid,
    NoiseSpec,
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
from spectrum_sensing.services.spectrum_model import (
    add_noise,
    apply_raised_cosine,
    build_ideal_psd,
    uniform_plan,
)
from spectrum_sensing.services.wavelet_edge import (
    DB1_WIDTH_BINS,
    channel_energies,
    convolve_reflect,
    cwt,
    cwt_derivative,
    derivative_lobe_offset,
    derivative_responses,
    detect_edges,
    edge_rmse,
    edges_to_plan,
    kernel_samples,
    multiscale_response,
    two_sided_edge_rmse,
    wmm_edges,
    wmp,
    wmp_normalized,
    wms,
)


@pytest.mark.parametrize("family", [WaveletFamily.GAUSSIAN, WaveletFamily.DB1])
def test_kernel_has_unit_area(family, unit_grid):
    kernel = kernel_samples(family, 4, unit_grid)
    assert kernel.area == pytest.approx(1.0, abs=1e-9)


def test_unsupported_scale(unit_grid):
    with pytest.raises(ValueError):
        kernel_samples(WaveletFamily.GAUSSIAN, 3, unit_grid)


@pytest.mark.parametrize("family", [WaveletFamily.GAUSSIAN, WaveletFamily.DB1])
def test_smoothing_keeps_constant_psd(family, unit_grid):
    psd = WidebandPsd(grid=unit_grid, values=np.full(unit_grid.n_points, 3.0))
    smoothed = cwt(psd, kernel_samples(family, 2, unit_grid))
    np.testing.assert_allclose(smoothed.values, 3.0, rtol=1e-9)


def test_kernel_from_other_grid_is_rejected(step_psd):
    other = FrequencyGrid(f_start=0.0, f_stop=100.0, n_points=64)
    with pytest.raises(GridMismatchError):
        cwt(step_psd, kernel_samples(WaveletFamily.GAUSSIAN, 2, other))


def test_fft_and_direct_convolution_agree(step_psd):
    kernel = kernel_samples(WaveletFamily.GAUSSIAN, 4, step_psd.grid)
    args = (step_psd.values, kernel.support, kernel.origin, kernel.delta_f)
    np.testing.assert_allclose(
        convolve_reflect(*args, method="fft"), convolve_reflect(*args, method="direct"), atol=1e-9
    )


@pytest.mark.parametrize("family", [WaveletFamily.GAUSSIAN, WaveletFamily.DB1])
def test_fft_and_direct_agree_on_random_spectra(family):
    grid = FrequencyGrid(f_start=0.0, f_stop=255.0, n_points=256)
    rng = np.random.default_rng(11)
    for trial in range(100):
        psd = WidebandPsd(grid=grid, values=rng.exponential(size=256) * rng.uniform(0.1, 50.0))
        kernel = kernel_samples(family, int(rng.choice([2, 4])), grid)
        for transform in (cwt, cwt_derivative):
            fast = transform(psd, kernel, method="fft").values
            direct = transform(psd, kernel, method="direct").values
            assert np.max(np.abs(fast - direct)) <= 1e-9 * np.max(np.abs(direct))


def test_gaussian_kernel_dilation(unit_grid):
    # psi_4(2m) = psi_2(m) / 2
    fine = kernel_samples(WaveletFamily.GAUSSIAN, 2, unit_grid)
    coarse = kernel_samples(WaveletFamily.GAUSSIAN, 4, unit_grid)
    m = np.arange(-50, 51)
    np.testing.assert_allclose(
        coarse.support[coarse.origin + 2 * m], 0.5 * fine.support[fine.origin + m], rtol=1e-12
    )


def test_gaussian_derivative_peaks_on_the_step(step_psd):
    kernel = kernel_samples(WaveletFamily.GAUSSIAN, 2, step_psd.grid)
    response = cwt_derivative(step_psd, kernel).values
    peak = int(np.argmax(np.abs(response)))
    assert abs(peak - 511.5) <= 1.0
    # rising step
    assert response[peak] > 0


def test_db1_derivative_has_one_peak_on_the_step(step_psd):
    kernel = kernel_samples(WaveletFamily.DB1, 2, step_psd.grid)
    response = cwt_derivative(step_psd, kernel)
    # first bin of the upper level
    assert int(np.argmax(np.abs(response.values))) == 512
    assert response.values[512] == pytest.approx(10.0 / (DB1_WIDTH_BINS * 2))
    assert wmm_edges(response, EdgeThreshold(eta_fraction=0.2)).bins == [512]


@pytest.mark.parametrize("scale", [2, 4])
def test_db1_derivative_is_haar_difference_of_smoothed_psd(scale, unit_grid):
    rng = np.random.default_rng(scale)
    psd = WidebandPsd(grid=unit_grid, values=rng.exponential(size=unit_grid.n_points))
    kernel = kernel_samples(WaveletFamily.DB1, scale, unit_grid)
    w = DB1_WIDTH_BINS * scale
    smoothed = cwt(psd, kernel).values
    i = np.arange(w, unit_grid.n_points - w)
    expected = (smoothed[i + w // 2 - 1] - smoothed[i - w // 2 - 1]) / (w * unit_grid.delta_f)
    np.testing.assert_allclose(cwt_derivative(psd, kernel).values[i], expected, atol=1e-9)


def test_derivative_lobe_offset():
    assert derivative_lobe_offset(WaveletFamily.GAUSSIAN, 2) == 4
    assert derivative_lobe_offset(WaveletFamily.DB1, 2) == 8


@pytest.mark.parametrize("family", [WaveletFamily.GAUSSIAN, WaveletFamily.DB1])
def test_impulse_response_reaches_the_lobe_offset(family, unit_grid):
    values = np.zeros(unit_grid.n_points)
    values[500] = 1.0
    psd = WidebandPsd(grid=unit_grid, values=values)
    response = np.abs(cwt_derivative(psd, kernel_samples(family, 2, unit_grid)).values)
    lobe = derivative_lobe_offset(family, 2)
    if family == WaveletFamily.GAUSSIAN:
        assert sorted(np.argsort(response)[-2:].tolist()) == [500 - lobe, 500 + lobe]
    else:
        # plateaus [p - w + 1, p] and [p + 1, p + w]
        support = np.flatnonzero(response > 1e-9 * response.max())
        assert support.tolist() == list(range(500 - lobe + 1, 500 + lobe + 1))


def test_product_and_sum_combiners(step_psd):
    config = MultiscaleConfig(family=WaveletFamily.GAUSSIAN, J=2)
    responses = derivative_responses(step_psd, config)
    assert len(responses) == 2
    np.testing.assert_allclose(wmp(step_psd, config).values, responses[0] * responses[1])
    np.testing.assert_allclose(wms(step_psd, config).values, responses[0] + responses[1])


def test_channel_energies_from_plan_and_count(step_psd):
    plan = uniform_plan(0.0, 1023.0, 4, [True] * 4, [1.0] * 4)
    np.testing.assert_allclose(channel_energies(step_psd, plan), channel_energies(step_psd, 4))


def test_normalized_product_needs_energy(unit_grid):
    zero = WidebandPsd(grid=unit_grid, values=np.zeros(unit_grid.n_points))
    with pytest.raises(NormalizationError):
        wmp_normalized(zero, MultiscaleConfig(), 4)


def test_normalized_product_needs_plan(step_psd):
    config = MultiscaleConfig(combiner=Combiner.WMP_NORMALIZED)
    with pytest.raises(ValueError):
        multiscale_response(step_psd, config)


def test_local_maxima_plateau_and_threshold():
    grid = FrequencyGrid(f_start=0.0, f_stop=15.0, n_points=16)
    values = np.zeros(16)
    values[5] = values[6] = 5.0
    values[12] = 0.5
    response = MultiscaleResponse(grid=grid, values=values)
    edges = wmm_edges(response, EdgeThreshold(eta_fraction=0.2))
    assert edges.bins == [5]

    values[12] = -2.0
    response = MultiscaleResponse(grid=grid, values=values)
    edges = wmm_edges(response, EdgeThreshold(eta_fraction=0.2))
    assert edges.bins == [5, 12]
    assert edges.scores == [5.0, 2.0]


def test_all_zero_response_has_no_edges(unit_grid):
    response = MultiscaleResponse(grid=unit_grid, values=np.zeros(unit_grid.n_points))
    assert wmm_edges(response, EdgeThreshold()).frequencies == []


@pytest.mark.parametrize(
    "combiner", [Combiner.CWT, Combiner.WMP, Combiner.WMP_NORMALIZED, Combiner.WMS]
)
def test_detects_sharp_edges_of_default_scenario(combiner):
    grid = FrequencyGrid()
    occupancy = [True, False, True, False, True]
    plan = uniform_plan(1000.0, 2000.0, 5, occupancy, [10.0 if o else 0.0 for o in occupancy])
    psd = add_noise(build_ideal_psd(plan, grid), NoiseSpec(), seed=42)
    config = MultiscaleConfig(family=WaveletFamily.GAUSSIAN, J=2, combiner=combiner)
    estimate = detect_edges(psd, config, EdgeThreshold(eta_fraction=0.2), plan)
    truth = plan.edge_frequencies()
    assert truth == [1200.0, 1400.0, 1600.0, 1800.0]
    assert edge_rmse(truth, estimate, 200.0) < 1.0


def test_smooth_transitions_still_found():
    grid = FrequencyGrid()
    occupancy = [True, False, True, False, True]
    plan = uniform_plan(1000.0, 2000.0, 5, occupancy, [10.0 if o else 0.0 for o in occupancy])
    shaped = apply_raised_cosine(build_ideal_psd(plan, grid), EdgeShape(beta=0.2), plan)
    psd = add_noise(shaped, NoiseSpec(fluctuation_sigma=0.0), seed=1)
    config = MultiscaleConfig(family=WaveletFamily.GAUSSIAN, J=2, combiner=Combiner.WMP)
    estimate = detect_edges(psd, config, EdgeThreshold(eta_fraction=0.2))
    # without noise the smoothed transition peaks on the boundary
    assert edge_rmse(plan.edge_frequencies(), estimate, 200.0) < 2 * grid.delta_f


def _default_plan():
    occupancy = [True, False, True, False, True]
    return uniform_plan(1000.0, 2000.0, 5, occupancy, [10.0 if o else 0.0 for o in occupancy])


@pytest.mark.parametrize("combiner", [Combiner.CWT, Combiner.WMP, Combiner.WMS])
@pytest.mark.parametrize("family", [WaveletFamily.GAUSSIAN, WaveletFamily.DB1])
def test_noiseless_sharp_edges_are_found_exactly_once(combiner, family):
    grid = FrequencyGrid()
    plan = _default_plan()
    psd = add_noise(build_ideal_psd(plan, grid), NoiseSpec(fluctuation_sigma=0.0), seed=0)
    config = MultiscaleConfig(family=family, J=2, combiner=combiner)
    estimate = detect_edges(psd, config, EdgeThreshold(eta_fraction=0.2), plan)
    assert len(estimate.frequencies) == 4
    for found, true in zip(estimate.frequencies, plan.edge_frequencies()):
        assert abs(found - true) <= grid.delta_f + 1e-9
    assert edge_rmse(plan, estimate) <= grid.delta_f + 1e-9


def _noisy_default_psd(seed=3):
    plan = _default_plan()
    shaped = apply_raised_cosine(build_ideal_psd(plan, FrequencyGrid()), EdgeShape(beta=0.2), plan)
    return add_noise(shaped, NoiseSpec(), seed=seed), plan


def _assert_close_relative_to_peak(actual, expected, rtol=1e-9):
    assert np.max(np.abs(actual - expected)) <= rtol * np.max(np.abs(expected))


@pytest.mark.parametrize("family", [WaveletFamily.GAUSSIAN, WaveletFamily.DB1])
def test_combiners_scale_with_the_psd(family):
    psd, plan = _noisy_default_psd()
    c = 7.5
    scaled = WidebandPsd(grid=psd.grid, values=c * psd.values)
    config = MultiscaleConfig(family=family, J=3)
    _assert_close_relative_to_peak(wmp(scaled, config).values, c**3 * wmp(psd, config).values)
    _assert_close_relative_to_peak(wms(scaled, config).values, c * wms(psd, config).values)
    _assert_close_relative_to_peak(
        wmp_normalized(scaled, config, plan).values, wmp_normalized(psd, config, plan).values
    )
    threshold = EdgeThreshold(eta_fraction=0.2)
    normalized_config = MultiscaleConfig(family=family, J=3, combiner=Combiner.WMP_NORMALIZED)
    assert (
        detect_edges(scaled, normalized_config, threshold, plan).bins
        == detect_edges(psd, normalized_config, threshold, plan).bins
    )


@pytest.mark.parametrize("combiner", [Combiner.CWT, Combiner.WMP, Combiner.WMS])
def test_raising_eta_only_removes_edges(combiner):
    psd, plan = _noisy_default_psd(seed=8)
    config = MultiscaleConfig(family=WaveletFamily.DB1, J=2, combiner=combiner)
    previous = None
    for eta in (0.05, 0.1, 0.2, 0.4, 0.8):
        bins = set(detect_edges(psd, config, EdgeThreshold(eta_fraction=eta), plan).bins)
        if previous is not None:
            assert bins <= previous
        previous = bins


def test_edges_to_plan(step_psd):
    estimate = EdgeEstimate(frequencies=[512.0], scores=[1.0], bins=[512])
    plan = edges_to_plan(estimate, step_psd.grid, step_psd, occupancy_threshold=6.0)
    assert plan.boundaries == [0.0, 512.0, 1023.0]
    assert plan.occupancy == [False, True]
    assert plan.power == [0.0, pytest.approx(11.0)]


def test_edges_to_plan_rejects_edges_outside_grid(step_psd):
    estimate = EdgeEstimate(frequencies=[2000.0], scores=[1.0])
    with pytest.raises(GridMismatchError):
        edges_to_plan(estimate, step_psd.grid, step_psd, occupancy_threshold=6.0)


def test_edge_rmse_nearest_estimate_with_reuse():
    assert edge_rmse([10.0, 20.0], [11.0]) == pytest.approx(np.sqrt(41.0))
    assert edge_rmse([10.0, 20.0], [10.0, 20.0, 55.0]) == 0.0


def test_edge_rmse_matches_hand_evaluation():
    assert edge_rmse([1200.0, 1400.0], [1195.0, 1390.0, 1600.0]) == pytest.approx(
        np.sqrt((5.0**2 + 10.0**2) / 2)
    )


def test_edge_rmse_penalty_for_empty_estimate():
    # narrowest spacing of the true edges
    assert edge_rmse([10.0, 20.0, 40.0], []) == pytest.approx(10.0)
    assert edge_rmse([10.0, 20.0], EdgeEstimate(), penalty_width=7.0) == 7.0
    assert edge_rmse([], [1.0]) == 0.0


def test_edge_rmse_penalty_defaults_to_subchannel_width():
    plan = uniform_plan(1000.0, 2000.0, 5, [True, False, True, False, True], [10, 0, 10, 0, 10])
    assert edge_rmse(plan, []) == pytest.approx(200.0)
    assert edge_rmse(plan, [1201.0, 1400.0, 1600.0, 1800.0]) == pytest.approx(0.5)


def test_edge_rmse_with_single_true_edge():
    plan = uniform_plan(1000.0, 2000.0, 2, [True, False], [10.0, 0.0])
    assert plan.edge_frequencies() == [1500.0]
    assert edge_rmse(plan, []) == pytest.approx(500.0)
    assert edge_rmse([1500.0], [], penalty_width=200.0) == 200.0
    assert edge_rmse([1500.0], [1502.0]) == pytest.approx(2.0)
    assert edge_rmse([1500.0], []) == np.inf


def test_two_sided_rmse_counts_extra_estimates():
    assert two_sided_edge_rmse([1200.0, 1400.0], [1195.0, 1390.0, 1600.0]) == pytest.approx(
        np.sqrt((25.0 + 100.0 + 25.0 + 100.0 + 200.0**2) / 5)
    )
    assert edge_rmse([10.0, 20.0], [10.0, 20.0, 55.0]) == 0.0
    assert two_sided_edge_rmse([10.0, 20.0], [10.0, 20.0, 55.0]) == pytest.approx(17.5)
    assert two_sided_edge_rmse([10.0, 20.0], [10.0, 20.0]) == 0.0


def test_two_sided_rmse_empty_sides():
    plan = uniform_plan(1000.0, 2000.0, 5, [True, False, True, False, True], [10, 0, 10, 0, 10])
    assert two_sided_edge_rmse(plan, EdgeEstimate()) == pytest.approx(200.0)
    assert two_sided_edge_rmse([], [1.0], penalty_width=5.0) == 5.0
    assert two_sided_edge_rmse([], []) == 0.0
