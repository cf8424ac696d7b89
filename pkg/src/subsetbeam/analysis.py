"""Closed-form link analysis for the random-subset transmitter.

Predicts the receiver SNR, the eavesdropper SINR under the Gaussian
artificial-noise approximation, and the resulting secrecy throughput. The
same expressions double as oracles for the Monte Carlo engine in
:mod:`.simulator`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .array_model import ArrayConfig, Scenario

__all__ = [
    "BetaStats",
    "SecrecyReport",
    "dirichlet_ratio",
    "dirichlet_kernel",
    "expected_beta",
    "var_beta",
    "beta_stats",
    "gamma_receiver",
    "gamma_eavesdropper",
    "secrecy_throughput",
    "secrecy_throughput_closed_form",
    "conventional_gains",
]

# below this |sin(u)| the kernel ratio switches to its analytic limit
_SINGULARITY_TOL = 1e-9


@dataclass(frozen=True)
class BetaStats:
    """Mean and variance of the off-receiver beam gain (artificial noise).

    The mean is real by the center-symmetric phase reference; ``|mean|`` never
    exceeds ``sqrt(n_t)``.
    """

    mean: float
    variance: float

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")


@dataclass(frozen=True)
class SecrecyReport:
    """Receiver SNR, eavesdropper SINR and the secrecy throughput they imply."""

    gamma_r: float
    gamma_e: float
    r_bits: float

    def __post_init__(self) -> None:
        if self.gamma_r < 0.0 or self.gamma_e < 0.0:
            raise ValueError("SNRs must be non-negative")
        expected = secrecy_throughput(self.gamma_r, self.gamma_e)
        if not math.isclose(self.r_bits, expected, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(
                f"r_bits={self.r_bits} inconsistent with gammas (expected {expected})"
            )

    @classmethod
    def from_gammas(cls, gamma_r: float, gamma_e: float) -> "SecrecyReport":
        return cls(gamma_r, gamma_e, secrecy_throughput(gamma_r, gamma_e))


def dirichlet_ratio(u: float, n_t: int) -> float:
    """``sin(n_t*u)/sin(u)`` with the removable singularities filled in.

    Near ``u = k*pi`` the ratio is evaluated by its analytic limit
    ``n_t * cos(n_t*u)/cos(u)``, which equals ``+-n_t`` at the singular points
    and keeps the function continuous through them.
    """
    s = math.sin(u)
    if abs(s) < _SINGULARITY_TOL:
        return n_t * math.cos(n_t * u) / math.cos(u)
    return math.sin(n_t * u) / s


def dirichlet_kernel(cfg: ArrayConfig, theta_r_deg: float, theta_e_deg: float) -> float:
    """Coherent array factor between two azimuths.

    ``sin(n_t*u)/sin(u)`` with ``u = pi*(d/lambda)*(cos(theta_r) - cos(theta_e))``;
    equals ``n_t`` when the angles coincide.
    """
    u = (
        math.pi
        * cfg.d_over_lambda
        * (math.cos(math.radians(theta_r_deg)) - math.cos(math.radians(theta_e_deg)))
    )
    return dirichlet_ratio(u, cfg.n_t)


def _check_m(cfg: ArrayConfig, m: int) -> None:
    if not 0 <= m <= cfg.n_t:
        raise ValueError(f"m={m} must satisfy 0 <= m <= n_t={cfg.n_t}")


def expected_beta(cfg: ArrayConfig, m: int, theta_r_deg: float, theta_e_deg: float) -> float:
    """Mean artificial-noise gain ``m/(n_t*sqrt(n_t)) * dirichlet_kernel``.

    Exact (not approximate) under the uniform-subset model with a random
    equal split of the remainder; it reduces to ``m/sqrt(n_t)`` at the
    receiver angle.
    """
    _check_m(cfg, m)
    return (
        m / (cfg.n_t * math.sqrt(cfg.n_t)) * dirichlet_kernel(cfg, theta_r_deg, theta_e_deg)
    )


def var_beta(cfg: ArrayConfig, m: int) -> float:
    """Large-array artificial-noise variance ``(n_t^2 - m^2)/n_t^2``.

    Angle independent; carries the independent-signs approximation, so the
    exact angle-dependent variance deviates near the receiver direction
    (quantified by the enumeration oracle in the test suite).
    """
    _check_m(cfg, m)
    return (cfg.n_t**2 - m**2) / cfg.n_t**2


def beta_stats(cfg: ArrayConfig, m: int, theta_r_deg: float, theta_e_deg: float) -> BetaStats:
    """Bundle :func:`expected_beta` and :func:`var_beta` for one geometry."""
    return BetaStats(
        mean=expected_beta(cfg, m, theta_r_deg, theta_e_deg),
        variance=var_beta(cfg, m),
    )


def gamma_receiver(scenario: Scenario, m: int) -> float:
    """Receiver SNR ``P * alpha * G_R * m^2 / (n_t * sigma^2)``.

    ``G_R`` is the combined gain ``|g_R|^2 * N_R``; when it is populated from
    two-ray geometry this expands to the ``2*sin^2(phi_R/2)`` form. The beam
    gain at the receiver is deterministic, so no variance term appears.
    """
    _check_m(scenario.array, m)
    r = scenario.receiver
    return (
        r.tx_power_w * r.path_loss * r.combined_rx_gain * m**2
        / (scenario.array.n_t * r.noise_power_w)
    )


def gamma_eavesdropper(scenario: Scenario, m: int) -> float:
    """Eavesdropper SINR ``C*E[b]^2 / (C*var[b] + sigma_E^2)`` with ``C = P*alpha_E*G_E``.

    Uses the closed-form mean and variance of the artificial noise; in the
    interference-dominated limit (``sigma_E^2 -> 0``) it collapses to
    ``E[b]^2/var[b]`` independent of transmit power.
    """
    e = scenario.eavesdropper
    mean = expected_beta(
        scenario.array, m, scenario.receiver.angle_deg, e.angle_deg
    )
    c = e.tx_power_w * e.path_loss * e.combined_rx_gain
    return c * mean**2 / (c * var_beta(scenario.array, m) + e.noise_power_w)


def secrecy_throughput(gamma_r: float, gamma_e: float) -> float:
    """``max(0, log2(1+gamma_r) - log2(1+gamma_e))`` in bits per channel use."""
    if gamma_r < 0.0 or gamma_e < 0.0:
        raise ValueError(f"SNRs must be non-negative, got {gamma_r}, {gamma_e}")
    return max(0.0, math.log2(1.0 + gamma_r) - math.log2(1.0 + gamma_e))


def secrecy_throughput_closed_form(scenario: Scenario, m: int) -> SecrecyReport:
    """Compose the closed-form SNRs into a full secrecy prediction."""
    return SecrecyReport.from_gammas(
        gamma_receiver(scenario, m), gamma_eavesdropper(scenario, m)
    )


def conventional_gains(
    cfg: ArrayConfig, theta_r_deg: float, theta_e_deg: float
) -> tuple[float, float]:
    """Deterministic amplitude gains of the conventional (co-phased) array.

    Returns ``(sqrt(n_t), |dirichlet_kernel|/sqrt(n_t))``; the conventional
    beam has zero variance, so downstream SNRs use these with variance 0.
    """
    root = math.sqrt(cfg.n_t)
    return root, abs(dirichlet_kernel(cfg, theta_r_deg, theta_e_deg)) / root
