"""Energy efficiency of fixed-rate transmissions over a pilot-trained fading link under queueing constraints."""

from .asymptotics import (
    WidebandConstants,
    WidebandResult,
    alpha_star,
    low_power_scan,
    phi,
    snr_eff_opt,
    wideband_result,
)
from .channel import (
    EstimationStats,
    SystemParams,
    alpha_threshold,
    capacity_lower_bound,
    estimation_stats,
    on_probability,
    optimal_rho,
    training_energies,
)
from .effective_capacity import (
    EffCapSolution,
    bit_energy,
    objective,
    solve,
    to_db,
    zero_theta_objective,
)
from .errors import ConfigError, DomainError, EstimationError
from .queue_sim import SimConfig, TailEstimate, estimate_decay, simulate, validate_theta

__version__ = "0.1.0"
