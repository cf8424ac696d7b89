"""Monte Carlo engine tests: sampling, statistics, sweeps, determinism."""

import logging
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetbeam.analysis import expected_beta, gamma_eavesdropper, gamma_receiver, var_beta
from subsetbeam.array_model import ArrayConfig
from subsetbeam.config import default_scenario
from subsetbeam.precoding import draw_subset, effective_gain, proposed_beamformer
from subsetbeam.simulator import (
    GainSamples,
    SweepRow,
    beam_variance_profile,
    empirical_snr,
    empirical_stats,
    receiver_snr,
    sample_gains,
    substream,
    sweep_eavesdropper_angle,
    sweep_subset_size,
)


@pytest.fixture(scope="module")
def scenario():
    return default_scenario()


def test_conventional_samples_are_constant(scenario):
    g = sample_gains("conventional", scenario, 24, 95.0, 500, 0)
    assert np.all(g.samples == g.samples[0])
    mean, var = empirical_stats(g)
    assert var == 0.0


def test_proposed_receiver_samples_exact(scenario):
    g = sample_gains("proposed", scenario, 24, scenario.receiver.angle_deg, 2000, 3)
    assert np.all(g.samples == 24 / math.sqrt(32))
    assert empirical_stats(g)[1] == 0.0


def test_empirical_mean_tracks_closed_form(scenario):
    g = sample_gains("proposed", scenario, 24, 95.0, 30_000, 5)
    mean, _ = empirical_stats(g)
    predicted = expected_beta(scenario.array, 24, 100.0, 95.0)
    se = np.std(g.samples.real) / math.sqrt(g.samples.size)
    assert abs(mean.real - predicted) < 3 * se


def test_empirical_stats_base_cases(scenario):
    constant = GainSamples(95.0, "conventional", np.full(10, 0.3 + 0.1j), 0)
    assert empirical_stats(constant) == (0.3 + 0.1j, 0.0)
    alternating = GainSamples(95.0, "proposed", np.array([1.0 + 0j, -1.0 + 0j]), 0)
    mean, var = empirical_stats(alternating)
    assert mean == 0.0 and var == pytest.approx(1.0, rel=1e-15)


def test_empirical_stats_single_sample_warns():
    g = GainSamples(95.0, "proposed", np.array([0.5 + 0.5j]), 0)
    with pytest.warns(UserWarning, match="single sample"):
        mean, var = empirical_stats(g)
    assert (mean, var) == (0.5 + 0.5j, 0.0)


def test_empirical_stats_against_two_pass_fsum():
    # reference: exact two-pass computation with compensated summation
    rng = np.random.default_rng(17)
    b = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
    g = GainSamples(95.0, "proposed", b, 17)
    mean, var = empirical_stats(g)
    ref_mean = complex(math.fsum(b.real) / b.size, math.fsum(b.imag) / b.size)
    ref_var = math.fsum(abs(x - ref_mean) ** 2 for x in b) / b.size
    assert mean == pytest.approx(ref_mean, rel=1e-12)
    assert var == pytest.approx(ref_var, rel=1e-12)


def test_empirical_snr_limits(scenario):
    link = scenario.receiver
    c = link.tx_power_w * link.path_loss * link.combined_rx_gain
    assert empirical_snr(2.0, 0.0, link) == pytest.approx(c * 4.0 / link.noise_power_w, rel=1e-12)
    assert empirical_snr(0.0, 0.7, link) == 0.0
    with pytest.raises(ValueError):
        empirical_snr(1.0, -0.1, link)


@given(
    var_low=st.floats(min_value=0.0, max_value=5.0),
    bump=st.floats(min_value=1e-6, max_value=5.0),
)
@settings(max_examples=100, deadline=None)
def test_empirical_snr_decreasing_in_variance(scenario, var_low, bump):
    link = scenario.eavesdropper
    assert empirical_snr(1.0, var_low, link) > empirical_snr(1.0, var_low + bump, link)


def test_empirical_snr_cross_checks_closed_form(scenario):
    # the closed-form eavesdropper SINR and the Monte Carlo estimate agree to 5%
    g = sample_gains("proposed", scenario, 24, 95.0, 100_000, 11)
    mean, var = empirical_stats(g)
    estimated = empirical_snr(mean, var, scenario.eavesdropper)
    predicted = gamma_eavesdropper(scenario, 24)
    assert abs(estimated - predicted) / predicted < 0.05


def test_receiver_snr_per_scheme(scenario):
    n = scenario.array.n_t
    assert receiver_snr("proposed", scenario, 24) == pytest.approx(
        gamma_receiver(scenario, 24), rel=1e-12
    )
    assert receiver_snr("switched", scenario, 24) == pytest.approx(
        empirical_snr(math.sqrt(24), 0.0, scenario.receiver), rel=1e-12
    )
    assert receiver_snr("conventional", scenario, 24) == pytest.approx(
        empirical_snr(math.sqrt(n), 0.0, scenario.receiver), rel=1e-12
    )
    with pytest.raises(ValueError):
        receiver_snr("beamhopping", scenario, 24)


def test_sample_gains_deterministic(scenario):
    a = sample_gains("proposed", scenario, 24, 95.0, 4000, 123)
    b = sample_gains("proposed", scenario, 24, 95.0, 4000, 123)
    assert np.array_equal(a.samples, b.samples)
    c = sample_gains("proposed", scenario, 24, 95.0, 4000, 124)
    assert not np.array_equal(a.samples, c.samples)


@pytest.mark.parametrize("split", ["random", "alternate"])
def test_sample_gains_matches_plan_by_plan_draws(scenario, split):
    # the vectorized sampler consumes the stream exactly like draw_subset
    k = 40
    vec = sample_gains("proposed", scenario, 24, 95.0, k, 9, split=split).samples
    rng = np.random.default_rng(np.random.SeedSequence(9))
    cfg = scenario.array
    for i in range(k):
        plan = draw_subset(cfg, 24, rng, split=split)
        beam = proposed_beamformer(plan, scenario.receiver.angle_deg, cfg)
        assert vec[i] == pytest.approx(effective_gain(beam, 95.0, cfg), abs=1e-12)


def test_mean_error_shrinks_like_root_k(scenario):
    predicted = expected_beta(scenario.array, 24, 100.0, 95.0)
    for k in (1_000, 10_000, 100_000):
        g = sample_gains("proposed", scenario, 24, 95.0, k, 29)
        err = abs(float(g.samples.real.mean()) - predicted)
        assert err < 4 * np.std(g.samples.real) / math.sqrt(k)


def test_sweep_rows_identical_across_worker_counts(scenario):
    grid = [40.0, 70.0, 95.0, 100.0, 130.0, 160.0]
    serial = sweep_eavesdropper_angle(scenario, 24, grid, 2000, 7, workers=1)
    threaded = sweep_eavesdropper_angle(scenario, 24, grid, 2000, 7, workers=3)
    assert serial == threaded


def test_sweep_conventional_rows_run_independent(scenario):
    grid = [40.0, 95.0, 150.0]
    first = sweep_eavesdropper_angle(scenario, 24, grid, 100, 1, scheme="conventional")
    second = sweep_eavesdropper_angle(scenario, 24, grid, 500, 99, scheme="conventional")
    for a, b in zip(first, second):
        assert a.r_empirical_bits == pytest.approx(b.r_empirical_bits, rel=1e-12)
        assert a.r_empirical_bits == pytest.approx(a.r_theory_bits, abs=1e-9)


def test_sweep_minimum_sits_on_receiver_angle(scenario):
    grid = [90.0, 95.0, 100.0, 105.0, 110.0]
    rows = sweep_eavesdropper_angle(scenario, 24, grid, 2000, 13)
    values = [r.r_empirical_bits for r in rows]
    assert grid[int(np.argmin(values))] == 100.0
    assert min(values) == 0.0  # deterministic receiver-angle gain swamps the clamp


def test_sweep_switched_theory_is_nan(scenario):
    rows = sweep_eavesdropper_angle(scenario, 24, [95.0], 500, 3, scheme="switched")
    assert math.isnan(rows[0].r_theory_bits)
    assert rows[0].r_empirical_bits >= 0.0


def test_sweep_subset_size_skips_invalid(scenario, caplog):
    with caplog.at_level(logging.WARNING, logger="subsetbeam.simulator"):
        rows = sweep_subset_size(scenario, [4, 5, 8, 40], 500, 3)
    assert [int(r.x) for r in rows] == [4, 8]
    assert any("m=5" in record.message for record in caplog.records)
    assert any("m=40" in record.message for record in caplog.records)


def test_sweep_subset_size_variance_column(scenario):
    rows = sweep_subset_size(scenario, [8, 16, 24], 50_000, 21)
    variances = [r.beta_var_emp for r in rows]
    assert variances == sorted(variances, reverse=True)  # more co-phased antennas, less noise
    for row, m in zip(rows, (8, 16, 24)):
        assert abs(row.beta_var_emp - var_beta(scenario.array, m)) / var_beta(
            scenario.array, m
        ) < 0.10


def test_beam_variance_profile_properties(scenario):
    profile = beam_variance_profile("proposed", scenario, 24, [95.0, 100.0], 20_000, 31)
    by_angle = dict(profile)
    assert by_angle[100.0] == 0.0
    assert by_angle[95.0] > 0.1
    conventional = beam_variance_profile("conventional", scenario, 24, [50.0, 95.0], 100, 0)
    assert all(var == 0.0 for _, var in conventional)
    switched = dict(beam_variance_profile("switched", scenario, 24, [95.0], 20_000, 31))
    assert by_angle[95.0] > switched[95.0] > 0.0


def test_gain_samples_validation():
    with pytest.raises(ValueError, match="scheme"):
        GainSamples(95.0, "mystery", np.ones(3, complex), 0)
    with pytest.raises(ValueError, match="non-empty"):
        GainSamples(95.0, "proposed", np.array([], complex), 0)


def test_sweep_row_validation():
    with pytest.raises(ValueError, match="empirical"):
        SweepRow(95.0, 1.0, -0.1, 0.0, 0.1)
    with pytest.raises(ValueError, match="theory"):
        SweepRow(95.0, -1.0, 0.1, 0.0, 0.1)
    nan_theory = SweepRow(95.0, math.nan, 0.1, 0.0, 0.1)
    assert math.isnan(nan_theory.r_theory_bits)


def test_sample_gains_contracts(scenario):
    with pytest.raises(ValueError, match="scheme"):
        sample_gains("other", scenario, 24, 95.0, 10, 0)
    with pytest.raises(ValueError, match="split"):
        sample_gains("proposed", scenario, 24, 95.0, 10, 0, split="even")
    with pytest.raises(ValueError, match="k_symbols"):
        sample_gains("proposed", scenario, 24, 95.0, 0, 0)
    with pytest.raises(ValueError, match="odd"):
        sample_gains("proposed", scenario, 23, 95.0, 10, 0)
    with pytest.raises(ValueError, match="angle grid"):
        sweep_eavesdropper_angle(scenario, 24, [], 10, 0)


def test_substream_reproducible_and_distinct():
    assert substream(5, 0).random(4).tolist() == substream(5, 0).random(4).tolist()
    assert substream(5, 0).random(4).tolist() != substream(5, 1).random(4).tolist()


def test_switched_scheme_ignores_parity(scenario):
    g = sample_gains("switched", scenario, 23, 95.0, 100, 0)
    assert g.samples.size == 100


def test_small_array_empirical_matches_enumeration():
    # n_t=8, m=4: compare against the exact distribution over all 70 subsets
    from subsetbeam.acceptance import enumerate_gain_distribution

    scenario = replace(default_scenario(), array=ArrayConfig(8))
    values = enumerate_gain_distribution(scenario.array, 4, 100.0, 95.0, "random")
    exact_mean = complex(values.mean())
    exact_var = float(np.mean(np.abs(values - exact_mean) ** 2))
    g = sample_gains("proposed", scenario, 4, 95.0, 100_000, 37)
    mean, var = empirical_stats(g)
    k = g.samples.size
    assert abs(mean.real - exact_mean.real) < 3 * math.sqrt(
        float(np.mean((values.real - exact_mean.real) ** 2)) / k
    )
    m4 = float(np.mean(np.abs(values - exact_mean) ** 4))
    assert abs(var - exact_var) < 3 * math.sqrt((m4 - exact_var**2) / k)
