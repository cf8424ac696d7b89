"""Geometry and channel primitive tests.

Scalar expectations are pinned against independent high-precision evaluation
(mpmath at 40 digits) of the same formulas.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetbeam.array_model import (
    ArrayConfig,
    LinkParams,
    Scenario,
    TwoRayLink,
    TwoRayRegimeWarning,
    free_space_path_loss,
    link_from_two_ray,
    steering_phase,
    steering_phases,
    steering_vector,
    two_ray_phase,
    two_ray_power_gain,
)

mp.mp.dps = 40

angles = st.floats(min_value=0.1, max_value=179.9, allow_nan=False)


def test_steering_phase_vanishes_at_broadside():
    cfg = ArrayConfig(32)
    for n in range(32):
        assert steering_phase(cfg, n, 90.0) == pytest.approx(0.0, abs=1e-12)


def test_steering_phase_two_elements_endfire():
    cfg = ArrayConfig(2, 0.5)
    assert steering_phase(cfg, 0, 0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert steering_phase(cfg, 1, 0.0) == pytest.approx(-math.pi / 2, rel=1e-15)


def test_steering_phase_pinned_value():
    # ((31/2) - 5) * 2*pi*0.5 * cos(100 deg) at 40-digit precision
    expected = float((mp.mpf(31) / 2 - 5) * 2 * mp.pi * mp.mpf("0.5") * mp.cos(mp.mpf(100) * mp.pi / 180))
    assert expected == pytest.approx(-5.7280843123106777, rel=1e-15)
    got = steering_phase(ArrayConfig(32, 0.5), 5, 100.0)
    assert got == pytest.approx(expected, rel=1e-12)


def test_steering_phase_index_contract():
    cfg = ArrayConfig(8)
    with pytest.raises(ValueError, match="out of range"):
        steering_phase(cfg, 8, 90.0)
    with pytest.raises(ValueError, match="out of range"):
        steering_phase(cfg, -1, 90.0)


@given(
    n_t=st.integers(min_value=2, max_value=64),
    d=st.floats(min_value=0.01, max_value=0.5),
    theta=angles,
    data=st.data(),
)
@settings(max_examples=100, deadline=None)
def test_steering_phase_antisymmetric_about_center(n_t, d, theta, data):
    n = data.draw(st.integers(min_value=0, max_value=n_t - 1))
    cfg = ArrayConfig(n_t, d)
    assert steering_phase(cfg, n, theta) + steering_phase(cfg, n_t - 1 - n, theta) == pytest.approx(
        0.0, abs=1e-12
    )


def test_steering_vector_broadside_is_all_ones():
    sv = steering_vector(ArrayConfig(16), 90.0)
    np.testing.assert_allclose(sv, np.ones(16), atol=1e-12)


def test_steering_vector_four_elements_endfire():
    cfg = ArrayConfig(4, 0.5)
    sv = steering_vector(cfg, 0.0)
    expected = np.exp(-1j * np.array([1.5, 0.5, -0.5, -1.5]) * np.pi)
    np.testing.assert_allclose(sv, expected, atol=1e-12)


@given(n_t=st.integers(min_value=2, max_value=64), d=st.floats(min_value=0.01, max_value=0.5), theta=angles)
@settings(max_examples=100, deadline=None)
def test_steering_vector_unit_modulus_and_self_product(n_t, d, theta):
    cfg = ArrayConfig(n_t, d)
    sv = steering_vector(cfg, theta)
    assert np.max(np.abs(np.abs(sv) - 1.0)) < 1e-12
    assert np.vdot(sv, sv).real == pytest.approx(n_t, rel=1e-12)
    assert steering_vector(cfg, theta)[0] == np.exp(-1j * steering_phase(cfg, 0, theta))


def test_steering_phases_matches_scalar():
    cfg = ArrayConfig(9, 0.37)
    per_element = [steering_phase(cfg, n, 123.4) for n in range(9)]
    np.testing.assert_allclose(steering_phases(cfg, 123.4), per_element, rtol=1e-15)


def test_two_ray_phase_pinned_value():
    # (2*pi/0.005) * (2*1*1/30) at 40-digit precision
    expected = float(2 * mp.pi / mp.mpf("0.005") * (mp.mpf(2) / 30))
    assert expected == pytest.approx(83.77580409572782, rel=1e-15)
    link = TwoRayLink(h_t_m=1.0, h_r_m=1.0, distance_m=30.0)
    with pytest.warns(TwoRayRegimeWarning):
        got = two_ray_phase(link, 0.005)
    assert got == pytest.approx(expected, rel=1e-12)


def test_two_ray_phase_vanishes_with_height():
    phi = two_ray_phase(TwoRayLink(1e-9, 1.0, 30.0), 0.005)
    assert 0.0 < phi < 1e-6


@given(
    h_t=st.floats(min_value=0.1, max_value=3.0),
    h_r=st.floats(min_value=0.1, max_value=3.0),
    d=st.floats(min_value=10.0, max_value=1000.0),
)
@settings(max_examples=100, deadline=None)
def test_two_ray_phase_inverse_in_distance(h_t, h_r, d):
    near = two_ray_phase(TwoRayLink(h_t, h_r, d), 0.005)
    far = two_ray_phase(TwoRayLink(h_t, h_r, 2 * d), 0.005)
    assert far == pytest.approx(near / 2, rel=1e-12)
    assert far < near


def test_two_ray_small_angle_flag():
    tight = TwoRayLink(h_t_m=1.0, h_r_m=1.0, distance_m=30.0)
    assert tight.violates_small_angle(0.005)  # 2/30 m > 5 mm
    assert not tight.violates_small_angle(0.1)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        two_ray_phase(tight, 0.1)  # inside the regime: must stay silent


def test_two_ray_phase_wavelength_contract():
    with pytest.raises(ValueError, match="wavelength"):
        two_ray_phase(TwoRayLink(1.0, 1.0, 30.0), 0.0)


@pytest.mark.parametrize(
    "phi,expected",
    [(0.0, 0.0), (math.pi, 2.0), (math.pi / 2, 1.0)],
)
def test_two_ray_power_gain_values(phi, expected):
    assert two_ray_power_gain(phi) == pytest.approx(expected, abs=1e-14)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
@settings(max_examples=200, deadline=None)
def test_two_ray_power_gain_bounded(phi):
    assert 0.0 <= two_ray_power_gain(phi) <= 2.0


def test_free_space_path_loss_pinned_value():
    # (0.005/(4*pi))^2 / 30^2 at 40-digit precision
    expected = float((mp.mpf("0.005") / (4 * mp.pi)) ** 2 / 900)
    assert expected == pytest.approx(1.7590483271239196e-10, rel=1e-15)
    assert free_space_path_loss(30.0, 0.005, 2.0) == pytest.approx(expected, rel=1e-12)


def test_free_space_path_loss_inverse_square():
    ratio = free_space_path_loss(10.0, 0.005) / free_space_path_loss(30.0, 0.005)
    assert ratio == pytest.approx(9.0, rel=1e-12)


def test_free_space_path_loss_degenerate_exponent():
    assert free_space_path_loss(123.0, 0.005, 0.0) == pytest.approx(
        (0.005 / (4 * math.pi)) ** 2, rel=1e-12
    )


@given(
    d=st.floats(min_value=1.0, max_value=1e4),
    wavelength=st.floats(min_value=1e-3, max_value=1.0),
    exponent=st.floats(min_value=0.0, max_value=4.0),
)
@settings(max_examples=100, deadline=None)
def test_free_space_path_loss_doubling(d, wavelength, exponent):
    ratio = free_space_path_loss(2 * d, wavelength, exponent) / free_space_path_loss(
        d, wavelength, exponent
    )
    assert ratio == pytest.approx(2.0**-exponent, rel=1e-12)


def test_free_space_path_loss_contract():
    with pytest.raises(ValueError, match="distance"):
        free_space_path_loss(0.0, 0.005)
    with pytest.raises(ValueError, match="wavelength"):
        free_space_path_loss(30.0, -0.005)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_t": 1},
        {"n_t": 32, "d_over_lambda": 0.6},
        {"n_t": 32, "d_over_lambda": 0.0},
        {"n_t": 32, "wavelength_m": 0.0},
        {"n_t": 2.5},
    ],
)
def test_array_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        ArrayConfig(**kwargs)


def test_two_ray_link_rejects_bad_values():
    with pytest.raises(ValueError):
        TwoRayLink(0.0, 1.0, 30.0)
    with pytest.raises(ValueError, match="exponent"):
        TwoRayLink(1.0, 1.0, 30.0, path_loss_exponent=1.9)


@pytest.mark.parametrize("angle", [0.0, 180.0, -5.0, 200.0])
def test_link_params_angle_open_interval(angle):
    with pytest.raises(ValueError, match="angle"):
        LinkParams(angle, 1.0, 1e-10, 8.0, 1e-13)


def test_link_params_rejects_nonpositive_fields():
    with pytest.raises(ValueError):
        LinkParams(100.0, 0.0, 1e-10, 8.0, 1e-13)
    with pytest.raises(ValueError):
        LinkParams(100.0, 1.0, 1e-10, 8.0, 0.0)


def test_scenario_allows_coincident_angles():
    link = LinkParams(100.0, 1.0, 1e-10, 8.0, 1e-13)
    scenario = Scenario(ArrayConfig(32), link, link)
    assert scenario.receiver.angle_deg == scenario.eavesdropper.angle_deg


def test_link_from_two_ray_composes_gain_and_loss():
    geometry = TwoRayLink(1.0, 1.0, 30.0, path_loss_exponent=2.0)
    wavelength = 0.3  # stays in the small-angle regime
    link = link_from_two_ray(100.0, 5.0, geometry, wavelength, rx_array_gain=4.0, noise_power_w=1e-13)
    phi = two_ray_phase(geometry, wavelength)
    assert link.combined_rx_gain == pytest.approx(two_ray_power_gain(phi) * 4.0, rel=1e-12)
    assert link.path_loss == pytest.approx(free_space_path_loss(30.0, wavelength, 2.0), rel=1e-12)
    assert link.tx_power_w == 5.0
