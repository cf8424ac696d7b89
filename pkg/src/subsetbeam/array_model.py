"""Geometry and channel primitives for a uniform linear transmit array.

Conventions used throughout the package:

* Angles are azimuth degrees, strictly inside (0, 180) at type boundaries,
  and are converted to radians internally.
* Antenna index ``n`` runs ``0 .. n_t - 1`` with the phase reference at the
  physical array center, so element ``n`` carries the progressive phase
  ``((n_t - 1)/2 - n) * 2*pi*(d/lambda) * cos(theta)``.
* All powers and gains are linear (watts / ratios); dB enters only at the
  configuration and reporting boundaries.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SPEED_OF_LIGHT",
    "ArrayConfig",
    "TwoRayLink",
    "LinkParams",
    "Scenario",
    "TwoRayRegimeWarning",
    "steering_phase",
    "steering_phases",
    "steering_vector",
    "two_ray_phase",
    "two_ray_power_gain",
    "free_space_path_loss",
    "link_from_two_ray",
]

SPEED_OF_LIGHT = 299_792_458.0
"""Vacuum speed of light in m/s."""


class TwoRayRegimeWarning(UserWarning):
    """Raised when ``2*h_t*h_r/D > lambda``, i.e. the small-angle regime the
    two-ray gain formula assumes no longer holds."""


def _check_angle(angle_deg: float, what: str) -> None:
    if not 0.0 < angle_deg < 180.0:
        raise ValueError(f"{what} must lie strictly inside (0, 180) degrees, got {angle_deg}")


@dataclass(frozen=True)
class ArrayConfig:
    """Transmit ULA geometry.

    Parameters
    ----------
    n_t:
        Number of transmit antennas (>= 2).
    d_over_lambda:
        Element spacing in wavelengths, in (0, 0.5]. Spacing above half a
        wavelength would introduce grating lobes and is rejected.
    wavelength_m:
        Carrier wavelength in meters (default: 60 GHz carrier).
    """

    n_t: int
    d_over_lambda: float = 0.5
    wavelength_m: float = SPEED_OF_LIGHT / 60e9

    def __post_init__(self) -> None:
        if not isinstance(self.n_t, (int, np.integer)) or self.n_t < 2:
            raise ValueError(f"n_t must be an integer >= 2, got {self.n_t!r}")
        if not 0.0 < self.d_over_lambda <= 0.5:
            raise ValueError(f"d_over_lambda must be in (0, 0.5], got {self.d_over_lambda}")
        if self.wavelength_m <= 0.0:
            raise ValueError(f"wavelength_m must be positive, got {self.wavelength_m}")


@dataclass(frozen=True)
class TwoRayLink:
    """Direct plus ground-reflected path geometry between two endpoints."""

    h_t_m: float
    h_r_m: float
    distance_m: float
    path_loss_exponent: float = 2.0

    def __post_init__(self) -> None:
        for name in ("h_t_m", "h_r_m", "distance_m"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.path_loss_exponent < 2.0:
            raise ValueError(f"path_loss_exponent must be >= 2, got {self.path_loss_exponent}")

    def violates_small_angle(self, wavelength_m: float) -> bool:
        """True when ``2*h_t*h_r/D > lambda`` (path phase difference > 2*pi)."""
        return 2.0 * self.h_t_m * self.h_r_m / self.distance_m > wavelength_m


@dataclass(frozen=True)
class LinkParams:
    """Link budget for one endpoint (receiver or eavesdropper).

    ``combined_rx_gain`` is the product of the two-ray power gain and the
    endpoint's receive array gain, i.e. ``|g|^2 * N``. It may be supplied
    directly or derived from geometry via :func:`link_from_two_ray`.
    """

    angle_deg: float
    tx_power_w: float
    path_loss: float
    combined_rx_gain: float
    noise_power_w: float

    def __post_init__(self) -> None:
        _check_angle(self.angle_deg, "angle_deg")
        for name in ("tx_power_w", "path_loss", "combined_rx_gain", "noise_power_w"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class Scenario:
    """Full link scenario: the transmit array plus both endpoints.

    The receiver and eavesdropper angles may coincide (the worst case for
    secrecy); no constraint ties them together.
    """

    array: ArrayConfig
    receiver: LinkParams
    eavesdropper: LinkParams


def steering_phase(cfg: ArrayConfig, n: int, theta_deg: float) -> float:
    """Progressive phase of antenna ``n`` toward azimuth ``theta_deg``.

    ``((n_t - 1)/2 - n) * 2*pi*(d/lambda) * cos(theta)``; antisymmetric about
    the array center.
    """
    if not 0 <= n < cfg.n_t:
        raise ValueError(f"antenna index {n} out of range for n_t={cfg.n_t}")
    return ((cfg.n_t - 1) / 2 - n) * 2.0 * math.pi * cfg.d_over_lambda * math.cos(
        math.radians(theta_deg)
    )


def steering_phases(cfg: ArrayConfig, theta_deg: float) -> np.ndarray:
    """All ``n_t`` progressive phases toward ``theta_deg`` as one array."""
    idx = np.arange(cfg.n_t)
    return ((cfg.n_t - 1) / 2 - idx) * (
        2.0 * np.pi * cfg.d_over_lambda * math.cos(math.radians(theta_deg))
    )


def steering_vector(cfg: ArrayConfig, theta_deg: float) -> np.ndarray:
    """Array response row for azimuth ``theta_deg``: entry n is ``exp(-j*psi_n)``.

    Every entry has unit modulus; the inner product with a weight vector gives
    the effective beam gain at ``theta_deg``.
    """
    return np.exp(-1j * steering_phases(cfg, theta_deg))


def two_ray_phase(link: TwoRayLink, wavelength_m: float) -> float:
    """Phase angle between the direct and ground-reflected paths.

    ``phi = (2*pi/lambda) * (2*h_t*h_r/D)``. Warns with
    :class:`TwoRayRegimeWarning` when the geometry leaves the small-angle
    regime the downstream gain formula assumes.
    """
    if wavelength_m <= 0.0:
        raise ValueError(f"wavelength_m must be positive, got {wavelength_m}")
    if link.violates_small_angle(wavelength_m):
        warnings.warn(
            f"2*h_t*h_r/D = {2 * link.h_t_m * link.h_r_m / link.distance_m:.4g} m exceeds "
            f"lambda = {wavelength_m:.4g} m; two-ray small-angle regime violated",
            TwoRayRegimeWarning,
            stacklevel=2,
        )
    return (2.0 * math.pi / wavelength_m) * (2.0 * link.h_t_m * link.h_r_m / link.distance_m)


def two_ray_power_gain(phi_rad: float) -> float:
    """Two-ray power gain ``|g|^2 = 2*sin^2(phi/2)``, bounded in [0, 2]."""
    return 2.0 * math.sin(phi_rad / 2.0) ** 2


def free_space_path_loss(distance_m: float, wavelength_m: float, exponent: float = 2.0) -> float:
    """Linear path loss ``(lambda/(4*pi))^2 * D^(-exponent)``.

    Friis free-space reference with a configurable distance exponent.
    """
    if distance_m <= 0.0:
        raise ValueError(f"distance_m must be positive, got {distance_m}")
    if wavelength_m <= 0.0:
        raise ValueError(f"wavelength_m must be positive, got {wavelength_m}")
    return (wavelength_m / (4.0 * math.pi)) ** 2 * distance_m ** (-exponent)


def link_from_two_ray(
    angle_deg: float,
    tx_power_w: float,
    geometry: TwoRayLink,
    wavelength_m: float,
    rx_array_gain: float,
    noise_power_w: float,
) -> LinkParams:
    """Build :class:`LinkParams` from two-ray geometry.

    Path loss comes from :func:`free_space_path_loss` at the link distance and
    exponent; the combined gain is ``2*sin^2(phi/2) * rx_array_gain``.
    """
    phi = two_ray_phase(geometry, wavelength_m)
    return LinkParams(
        angle_deg=angle_deg,
        tx_power_w=tx_power_w,
        path_loss=free_space_path_loss(
            geometry.distance_m, wavelength_m, geometry.path_loss_exponent
        ),
        combined_rx_gain=two_ray_power_gain(phi) * rx_array_gain,
        noise_power_w=noise_power_w,
    )
