"""Monte Carlo engine: per-symbol beam draws, gain statistics, and sweeps.

Seeding contract
----------------
Every sweep takes one 64-bit master seed. Sweep point ``i`` draws from the
substream ``SeedSequence(seed, spawn_key=(i,))``, so results depend only on
the inputs and the point's position in the grid, never on execution order or
the number of workers. Within a point, symbols are drawn sequentially from
that substream: symbol ``k`` consumes uniforms ``k*n_t .. (k+1)*n_t - 1``,
which makes the vectorized sampler reproduce ``draw_subset`` call for call.

Additive noise is never sampled; SNRs are formed from beam statistics plus
the analytic noise power, which removes avoidable Monte Carlo error.
"""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import analysis
from .array_model import LinkParams, Scenario, steering_phases
from .precoding import SPLIT_MODES, _check_subset_size

__all__ = [
    "SCHEMES",
    "GainSamples",
    "SweepRow",
    "substream",
    "sample_gains",
    "empirical_stats",
    "empirical_snr",
    "receiver_snr",
    "sweep_eavesdropper_angle",
    "sweep_subset_size",
    "beam_variance_profile",
]

SCHEMES = ("proposed", "switched", "conventional")

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GainSamples:
    """Complex effective beam gains at one angle, one entry per symbol."""

    angle_deg: float
    scheme: str
    samples: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("samples must be a non-empty 1-d complex vector")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)


@dataclass(frozen=True)
class SweepRow:
    """One point of a sweep: swept value, throughputs, and beta statistics.

    ``r_theory_bits`` is NaN for the switched baseline, which has no closed
    form here. ``beta_mean_emp`` stores the real part of the empirical mean
    (the component the closed form predicts); the variance is the full
    complex second moment about the mean.
    """

    x: float
    r_theory_bits: float
    r_empirical_bits: float
    beta_mean_emp: float
    beta_var_emp: float

    def __post_init__(self) -> None:
        if self.r_empirical_bits < 0.0:
            raise ValueError("empirical throughput must be >= 0")
        if not math.isnan(self.r_theory_bits) and self.r_theory_bits < 0.0:
            raise ValueError("theory throughput must be >= 0 (or NaN)")
        if self.beta_var_emp < 0.0:
            raise ValueError("empirical variance must be >= 0")


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sweep point ``index`` under ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _gain_array(
    rng: np.random.Generator,
    scheme: str,
    scenario: Scenario,
    m: int,
    angle_deg: float,
    k_symbols: int,
    split: str,
) -> np.ndarray:
    """Vectorized per-symbol effective gains b(angle), length ``k_symbols``.

    Works on the phase differences ``psi_n(theta_R) - psi_n(theta)`` so the
    receiver-angle samples are exact (the exponents vanish identically and
    each sample reduces to an integer sum of signs).
    """
    cfg = scenario.array
    n = cfg.n_t
    c = np.exp(
        1j * (steering_phases(cfg, scenario.receiver.angle_deg) - steering_phases(cfg, angle_deg))
    )
    if scheme == "conventional":
        return np.full(k_symbols, c.sum() / math.sqrt(n))

    if not 1 <= m <= n:
        raise ValueError(f"subset size m={m} must satisfy 1 <= m <= n_t={n}")
    order = np.argsort(rng.random((k_symbols, n)), axis=1)
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.broadcast_to(np.arange(n), (k_symbols, n)), axis=1)
    in_subset = ranks < m

    if scheme == "switched":
        return (in_subset @ c) / math.sqrt(m)

    _check_subset_size(n, m)
    if split == "alternate":
        # position within the ascending-sorted remainder
        pos = np.cumsum(~in_subset, axis=1) - 1
        w = np.where(in_subset | (pos % 2 == 0), 1.0, -1.0)
    else:
        # position within the randomly ordered remainder: uniform equal split
        w = np.where(in_subset | ((ranks - m) % 2 == 0), 1.0, -1.0)
    return (w @ c) / math.sqrt(n)


def sample_gains(
    scheme: str,
    scenario: Scenario,
    m: int,
    angle_deg: float,
    k_symbols: int,
    seed: int | np.random.SeedSequence,
    split: str = "random",
) -> GainSamples:
    """Draw ``k_symbols`` per-symbol beams and evaluate their gain at ``angle_deg``.

    Deterministic given all inputs and the seed. For the proposed scheme at
    the receiver angle every sample equals ``m/sqrt(n_t)`` exactly.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if split not in SPLIT_MODES:
        raise ValueError(f"split must be one of {SPLIT_MODES}, got {split!r}")
    if k_symbols < 1:
        raise ValueError(f"k_symbols must be >= 1, got {k_symbols}")
    if isinstance(seed, np.random.SeedSequence):
        seq, seed_label = seed, int(seed.entropy or 0)
    else:
        seq, seed_label = np.random.SeedSequence(seed), int(seed)
    rng = np.random.default_rng(seq)
    samples = _gain_array(rng, scheme, scenario, m, angle_deg, k_symbols, split)
    return GainSamples(angle_deg=angle_deg, scheme=scheme, samples=samples, seed=seed_label)


def _mean_and_var(b: np.ndarray) -> tuple[complex, float]:
    # identical samples mean a deterministic beam: report the exact constant
    # and variance 0 instead of summation round-off
    if np.all(b == b[0]):
        return complex(b[0]), 0.0
    mean = complex(b.mean())
    return mean, float(np.mean(np.abs(b - mean) ** 2))


def empirical_stats(samples: GainSamples) -> tuple[complex, float]:
    """Mean and population variance ``E|b - E[b]|^2`` of the gain samples."""
    b = samples.samples
    if b.size < 2:
        warnings.warn("variance of a single sample reported as 0", stacklevel=2)
        return complex(b[0]), 0.0
    return _mean_and_var(b)


def empirical_snr(mean: complex, variance: float, link: LinkParams) -> float:
    """SNR from beam statistics: ``C*|mean|^2 / (C*variance + sigma^2)``.

    ``C = P * alpha * combined_gain``; with zero variance this reduces to the
    noise-limited SNR.
    """
    if variance < 0.0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    c = link.tx_power_w * link.path_loss * link.combined_rx_gain
    return c * abs(mean) ** 2 / (c * variance + link.noise_power_w)


def receiver_snr(scheme: str, scenario: Scenario, m: int) -> float:
    """Deterministic receiver-side SNR of a scheme (zero beam variance)."""
    n = scenario.array.n_t
    if scheme == "proposed":
        gain = m / math.sqrt(n)
    elif scheme == "switched":
        gain = math.sqrt(m)
    elif scheme == "conventional":
        gain = math.sqrt(n)
    else:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    return empirical_snr(gain, 0.0, scenario.receiver)


def _at_angle(scenario: Scenario, angle_deg: float) -> Scenario:
    return replace(scenario, eavesdropper=replace(scenario.eavesdropper, angle_deg=angle_deg))


def _theory_bits(scheme: str, scenario: Scenario, m: int, angle_deg: float) -> float:
    """Closed-form throughput for one sweep point; NaN for switched."""
    at = _at_angle(scenario, angle_deg)
    if scheme == "proposed":
        return analysis.secrecy_throughput_closed_form(at, m).r_bits
    if scheme == "conventional":
        g_r, g_e = analysis.conventional_gains(
            at.array, at.receiver.angle_deg, angle_deg
        )
        return analysis.secrecy_throughput(
            empirical_snr(g_r, 0.0, at.receiver), empirical_snr(g_e, 0.0, at.eavesdropper)
        )
    return math.nan


def _empirical_row(
    x: float,
    scheme: str,
    scenario: Scenario,
    m: int,
    angle_deg: float,
    k_symbols: int,
    rng: np.random.Generator,
    split: str,
) -> SweepRow:
    b = _gain_array(rng, scheme, scenario, m, angle_deg, k_symbols, split)
    mean, var = _mean_and_var(b) if b.size > 1 else (complex(b[0]), 0.0)
    gamma_e = empirical_snr(mean, var, _at_angle(scenario, angle_deg).eavesdropper)
    r_emp = analysis.secrecy_throughput(receiver_snr(scheme, scenario, m), gamma_e)
    return SweepRow(
        x=x,
        r_theory_bits=_theory_bits(scheme, scenario, m, angle_deg),
        r_empirical_bits=r_emp,
        beta_mean_emp=mean.real,
        beta_var_emp=var,
    )


def _map_points(fn, count: int, workers: int) -> list:
    """Apply ``fn`` to point indices, always returning results in input order."""
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def sweep_eavesdropper_angle(
    scenario: Scenario,
    m: int,
    angles,
    k_symbols: int,
    seed: int,
    scheme: str = "proposed",
    split: str = "random",
    workers: int = 1,
) -> list[SweepRow]:
    """Empirical and closed-form throughput versus the eavesdropper angle.

    The receiver-side SNR is deterministic and identical across rows; only
    the eavesdropper statistics are re-estimated per angle.
    """
    angles = [float(a) for a in angles]
    if not angles:
        raise ValueError("angle grid must be non-empty")

    def point(i: int) -> SweepRow:
        return _empirical_row(
            angles[i], scheme, scenario, m, angles[i], k_symbols, substream(seed, i), split
        )

    return _map_points(point, len(angles), workers)


def sweep_subset_size(
    scenario: Scenario,
    m_values,
    k_symbols: int,
    seed: int,
    scheme: str = "proposed",
    split: str = "random",
    workers: int = 1,
) -> list[SweepRow]:
    """Throughput versus the subset size ``m`` at the scenario's eavesdropper angle.

    Values of ``m`` that violate the scheme's constraints are skipped with a
    logged record rather than failing the whole sweep.
    """
    m_values = [int(v) for v in m_values]
    if not m_values:
        raise ValueError("m grid must be non-empty")
    valid: list[int] = []
    for m in m_values:
        if not 1 <= m <= scenario.array.n_t:
            log.warning("skipping m=%d: outside 1..%d", m, scenario.array.n_t)
        elif scheme == "proposed" and (scenario.array.n_t - m) % 2 != 0:
            log.warning(
                "skipping m=%d: n_t - m odd, receiver cancellation impossible", m
            )
        else:
            valid.append(m)
    angle = scenario.eavesdropper.angle_deg

    def point(i: int) -> SweepRow:
        return _empirical_row(
            float(valid[i]), scheme, scenario, valid[i], angle, k_symbols,
            substream(seed, i), split,
        )

    return _map_points(point, len(valid), workers)


def beam_variance_profile(
    scheme: str,
    scenario: Scenario,
    m: int,
    angles,
    k_symbols: int,
    seed: int,
    split: str = "random",
    workers: int = 1,
) -> list[tuple[float, float]]:
    """Empirical variance of the beam gain per angle.

    Zero at the receiver angle for the proposed scheme (per-draw cancellation)
    and identically zero at every angle for the conventional one.
    """
    angles = [float(a) for a in angles]
    if not angles:
        raise ValueError("angle grid must be non-empty")

    def point(i: int) -> tuple[float, float]:
        b = _gain_array(
            substream(seed, i), scheme, scenario, m, angles[i], k_symbols, split
        )
        return angles[i], _mean_and_var(b)[1]

    return _map_points(point, len(angles), workers)
