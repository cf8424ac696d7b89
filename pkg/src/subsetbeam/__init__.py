"""subsetbeam: secure mmWave transmission with per-symbol random antenna subsets.

A simulation and analysis library for a uniform-linear-array transmitter that
co-phases a fresh random subset of antennas toward the receiver on every
symbol and phase-inverts half of the remaining ones. The receiver sees a
constant array gain; everyone else sees a noise-like sidelobe pattern.
The package provides the closed-form receiver SNR, eavesdropper SINR and
secrecy throughput, a deterministic Monte Carlo engine that validates them,
and a CLI that emits sweep results as CSV.
"""

__version__ = "0.1.0"

from .analysis import (
    BetaStats,
    SecrecyReport,
    conventional_gains,
    dirichlet_kernel,
    expected_beta,
    gamma_eavesdropper,
    gamma_receiver,
    secrecy_throughput,
    secrecy_throughput_closed_form,
    var_beta,
)
from .array_model import (
    SPEED_OF_LIGHT,
    ArrayConfig,
    LinkParams,
    Scenario,
    TwoRayLink,
    free_space_path_loss,
    link_from_two_ray,
    steering_phase,
    steering_vector,
    two_ray_phase,
    two_ray_power_gain,
)
from .config import RunConfig, default_run_config, default_scenario, load_config
from .precoding import (
    BeamVector,
    SubsetPlan,
    conventional_beamformer,
    draw_subset,
    effective_gain,
    proposed_beamformer,
    switched_beamformer,
)
from .runner import read_rows, run
from .simulator import (
    GainSamples,
    SweepRow,
    beam_variance_profile,
    empirical_snr,
    empirical_stats,
    sample_gains,
    sweep_eavesdropper_angle,
    sweep_subset_size,
)

__all__ = [
    "__version__",
    "SPEED_OF_LIGHT",
    "ArrayConfig",
    "TwoRayLink",
    "LinkParams",
    "Scenario",
    "SubsetPlan",
    "BeamVector",
    "BetaStats",
    "SecrecyReport",
    "GainSamples",
    "SweepRow",
    "RunConfig",
    "steering_phase",
    "steering_vector",
    "two_ray_phase",
    "two_ray_power_gain",
    "free_space_path_loss",
    "link_from_two_ray",
    "draw_subset",
    "proposed_beamformer",
    "conventional_beamformer",
    "switched_beamformer",
    "effective_gain",
    "dirichlet_kernel",
    "expected_beta",
    "var_beta",
    "gamma_receiver",
    "gamma_eavesdropper",
    "secrecy_throughput",
    "secrecy_throughput_closed_form",
    "conventional_gains",
    "sample_gains",
    "empirical_stats",
    "empirical_snr",
    "sweep_eavesdropper_angle",
    "sweep_subset_size",
    "beam_variance_profile",
    "default_scenario",
    "default_run_config",
    "load_config",
    "run",
    "read_rows",
]
