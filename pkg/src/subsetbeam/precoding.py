"""Per-symbol beamforming weights: random-subset scheme plus two baselines.

The random-subset transmitter co-phases a fresh random subset of ``m``
antennas toward the receiver for every symbol and splits the remaining
``n_t - m`` antennas into equally sized positive-phase and phase-inverted
halves. The split guarantees exact cancellation of the remainder at the
receiver angle while leaving a random sidelobe pattern everywhere else.

Two split rules are provided for the remainder:

* ``"random"`` (default): a uniformly random equal split. Each antenna's sign
  then carries the marginal ``P(+1) = (n_t + m) / (2 * n_t)`` exactly, which
  is the model behind the closed-form mean/variance in :mod:`.analysis`.
* ``"alternate"``: positions 0, 2, 4, ... of the ascending-sorted remainder
  keep the positive phase, odd positions are inverted. Deterministic given
  the subset; useful as a sensitivity check. Its sign statistics are edge
  biased, so off-receiver variance deviates from the closed form near the
  receiver direction (the receiver-angle cancellation is unaffected).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array_model import ArrayConfig, steering_phases, steering_vector

__all__ = [
    "SPLIT_MODES",
    "SubsetPlan",
    "BeamVector",
    "draw_subset",
    "proposed_beamformer",
    "conventional_beamformer",
    "switched_beamformer",
    "effective_gain",
]

SPLIT_MODES = ("random", "alternate")

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class SubsetPlan:
    """Partition of the antenna indices for one symbol.

    ``i_m`` is co-phased toward the receiver, ``e_l`` keeps the positive
    phase, ``o_l`` is phase-inverted. The three sets are disjoint, cover
    ``0 .. n_t - 1`` exactly, each is sorted ascending, and ``e_l`` and
    ``o_l`` have equal size (required for exact remainder cancellation at
    the receiver).
    """

    i_m: tuple[int, ...]
    e_l: tuple[int, ...]
    o_l: tuple[int, ...]

    def __post_init__(self) -> None:
        for name in ("i_m", "e_l", "o_l"):
            part = getattr(self, name)
            if list(part) != sorted(set(part)):
                raise ValueError(f"{name} must be sorted and free of duplicates, got {part}")
        union = set(self.i_m) | set(self.e_l) | set(self.o_l)
        total = len(self.i_m) + len(self.e_l) + len(self.o_l)
        if len(union) != total:
            raise ValueError("i_m, e_l and o_l must be pairwise disjoint")
        if union != set(range(total)):
            raise ValueError(f"subsets must cover exactly 0..{total - 1}")
        if len(self.e_l) != len(self.o_l):
            raise ValueError(
                f"|e_l| = {len(self.e_l)} and |o_l| = {len(self.o_l)} must be equal "
                "for the remainder to cancel at the receiver"
            )

    @property
    def n_t(self) -> int:
        return len(self.i_m) + len(self.e_l) + len(self.o_l)

    @property
    def m(self) -> int:
        return len(self.i_m)

    @property
    def signs(self) -> np.ndarray:
        """Per-antenna sign pattern W: +1 on i_m and e_l, -1 on o_l."""
        w = np.ones(self.n_t)
        w[list(self.o_l)] = -1.0
        return w


@dataclass(frozen=True)
class BeamVector:
    """Unit-norm complex weight vector for one symbol."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.complex128)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-d complex vector")
        norm = np.linalg.norm(w)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"weights must have unit norm, got ||w|| = {norm!r}")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.size


def _check_subset_size(n_t: int, m: int) -> None:
    if not 1 <= m <= n_t:
        raise ValueError(f"subset size m={m} must satisfy 1 <= m <= n_t={n_t}")
    if (n_t - m) % 2 != 0:
        raise ValueError(
            f"n_t - m = {n_t - m} is odd: the remainder cannot be split into equal "
            "positive and inverted halves, so exact receiver-gain cancellation is "
            "impossible; choose m with the same parity as n_t"
        )


def draw_subset(
    cfg: ArrayConfig, m: int, rng: np.random.Generator, split: str = "random"
) -> SubsetPlan:
    """Draw a uniformly random ``m``-subset and split the remainder.

    Consumes exactly ``cfg.n_t`` uniforms from ``rng`` (one random permutation
    via argsort), so repeated calls reproduce the vectorized sampler in
    :mod:`.simulator` draw for draw.
    """
    _check_subset_size(cfg.n_t, m)
    if split not in SPLIT_MODES:
        raise ValueError(f"split must be one of {SPLIT_MODES}, got {split!r}")
    order = np.argsort(rng.random(cfg.n_t))
    i_m = np.sort(order[:m])
    rem = order[m:]
    if split == "alternate":
        rem = np.sort(rem)
    return SubsetPlan(
        i_m=tuple(int(i) for i in i_m),
        e_l=tuple(int(i) for i in np.sort(rem[0::2])),
        o_l=tuple(int(i) for i in np.sort(rem[1::2])),
    )


def proposed_beamformer(plan: SubsetPlan, theta_r_deg: float, cfg: ArrayConfig) -> BeamVector:
    """Weights for the random-subset scheme, steered at ``theta_r_deg``.

    ``f_n = +exp(j*psi_n)/sqrt(n_t)`` for n in ``i_m`` or ``e_l`` and
    ``f_n = -exp(j*psi_n)/sqrt(n_t)`` for n in ``o_l``. The effective gain at
    the receiver angle is ``m/sqrt(n_t)`` for every valid plan.
    """
    if plan.n_t != cfg.n_t:
        raise ValueError(f"plan covers {plan.n_t} antennas but the array has {cfg.n_t}")
    w = plan.signs * np.exp(1j * steering_phases(cfg, theta_r_deg)) / math.sqrt(cfg.n_t)
    return BeamVector(w)


def conventional_beamformer(cfg: ArrayConfig, theta_r_deg: float) -> BeamVector:
    """All antennas co-phased toward ``theta_r_deg`` (no randomization)."""
    w = np.exp(1j * steering_phases(cfg, theta_r_deg)) / math.sqrt(cfg.n_t)
    return BeamVector(w)


def switched_beamformer(i_m, theta_r_deg: float, cfg: ArrayConfig) -> BeamVector:
    """Only the ``i_m`` antennas transmit, co-phased; the rest stay idle.

    Active weights are ``exp(j*psi_n)/sqrt(m)`` so total radiated power
    matches the other schemes.
    """
    idx = np.asarray(sorted(i_m), dtype=int)
    if idx.size == 0:
        raise ValueError("i_m must contain at least one antenna")
    if np.unique(idx).size != idx.size or idx[0] < 0 or idx[-1] >= cfg.n_t:
        raise ValueError(f"i_m must be distinct indices in 0..{cfg.n_t - 1}, got {list(i_m)}")
    w = np.zeros(cfg.n_t, dtype=np.complex128)
    w[idx] = np.exp(1j * steering_phases(cfg, theta_r_deg)[idx]) / math.sqrt(idx.size)
    return BeamVector(w)


def effective_gain(beam: BeamVector, theta_deg: float, cfg: ArrayConfig) -> complex:
    """Complex beam gain ``b(theta) = sum_n exp(-j*psi_n(theta)) * f_n``.

    The received amplitude at an endpoint along ``theta`` is
    ``sqrt(P * alpha * N) * g * b(theta)``; linear in the weights and bounded
    by ``sqrt(n_t)`` for unit-norm beams.
    """
    if len(beam) != cfg.n_t:
        raise ValueError(f"beam has {len(beam)} weights but the array has {cfg.n_t} antennas")
    return complex(np.dot(steering_vector(cfg, theta_deg), beam.weights))
