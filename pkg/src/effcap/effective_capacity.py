"""
Effective capacity of the ON/OFF fixed-rate link.

The service process delivers ``r T`` bits in an ON frame and nothing in an
OFF frame, with frames i.i.d. across time. For a QoS exponent ``theta`` the
normalized effective capacity at rate ``r`` is

    -1 / (theta T B) * ln(1 - exp(-alpha) (1 - exp(-theta T r)))

and at ``theta = 0`` it reduces to the mean service ``(r / B) exp(-alpha)``.
The training fraction is pinned to :func:`effcap.channel.optimal_rho`; the
rate is found numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import SystemParams, alpha_threshold, estimation_stats, optimal_rho
from .errors import DomainError
from .optimize import scan_then_refine

__all__ = [
    "EffCapSolution",
    "objective",
    "zero_theta_objective",
    "objective_at_snr_eff",
    "maximize_rate",
    "solve",
    "bit_energy",
    "to_db",
]

SMALL_THETA_TR = 1e-8
SCAN_POINTS = 256
REFINE_RTOL = 1e-10


@dataclass(frozen=True)
class EffCapSolution:
    """Maximized spectral efficiency and the operating point attaining it."""

    re: float
    r_opt: float
    rho_opt: float
    alpha_opt: float
    theta: float
    snr_eff: float


def _check_theta(theta):
    if not (theta >= 0 and math.isfinite(theta)):
        raise DomainError(f"theta must be finite and non-negative, got {theta!r}")


def objective_at_snr_eff(r: float, snr_eff: float, theta: float, params: SystemParams) -> float:
    """Spectral efficiency (bits/s/Hz) at rate ``r`` for a given effective SNR.

    ``theta == 0`` is the mean-service branch. For ``theta T r`` below
    ``SMALL_THETA_TR`` the first-order expansion is used, which coincides
    with the mean-service value.
    """
    if r <= 0:
        return 0.0
    p_on = math.exp(-alpha_threshold(r, snr_eff, params))
    x = theta * params.frame_t * r
    if x < SMALL_THETA_TR:
        return r / params.bandwidth_b * p_on
    # log1p/expm1 keep precision when p_on or x are small
    return -math.log1p(p_on * math.expm1(-x)) / (theta * params.tb)


def objective(r: float, rho: float, theta: float, params: SystemParams) -> float:
    """Spectral efficiency at fixed rate ``r`` and training fraction ``rho`` for ``theta > 0``."""
    if not theta > 0:
        raise DomainError("objective needs theta > 0; use zero_theta_objective for theta = 0")
    if r < 0:
        raise DomainError(f"rate must be non-negative, got {r!r}")
    snr_eff = estimation_stats(params, rho).snr_eff
    if r == 0:
        return 0.0
    if snr_eff == 0:
        return 0.0
    return objective_at_snr_eff(r, snr_eff, theta, params)


def zero_theta_objective(r: float, rho: float, params: SystemParams) -> float:
    """Mean service ``(r / B) exp(-alpha)`` in bits/s/Hz."""
    if r < 0:
        raise DomainError(f"rate must be non-negative, got {r!r}")
    snr_eff = estimation_stats(params, rho).snr_eff
    if r == 0 or snr_eff == 0:
        return 0.0
    return r / params.bandwidth_b * math.exp(-alpha_threshold(r, snr_eff, params))


def rate_bracket(theta: float, snr_eff: float, params: SystemParams) -> tuple[float, float]:
    """Search interval for the optimal rate.

    Anchored at the rate whose outage threshold is 1, which tracks the
    optimum across many decades of effective SNR; the lower end also
    reaches below ``1 / (theta T)`` where the queueing penalty takes over.
    """
    unit_rate = (params.tb - 1.0) / params.frame_t * math.log1p(snr_eff) / math.log(2.0)
    lo = unit_rate
    if theta > 0:
        lo = min(lo, 1.0 / (theta * params.frame_t))
    return lo * 1e-6, unit_rate * 64.0


def maximize_rate(theta: float, params: SystemParams, snr_eff: float) -> tuple[float, float]:
    """Return ``(r_opt, re)`` maximizing the objective over the rate."""
    _check_theta(theta)
    if snr_eff <= 0:
        return 0.0, 0.0
    lo, hi = rate_bracket(theta, snr_eff, params)
    r_opt, re = scan_then_refine(
        lambda r: objective_at_snr_eff(r, snr_eff, theta, params),
        lo, hi, points=SCAN_POINTS, rtol=REFINE_RTOL,
    )
    return r_opt, re


def solve(theta: float, params: SystemParams) -> EffCapSolution:
    """Normalized effective capacity with the training fraction at its optimum."""
    _check_theta(theta)
    rho = optimal_rho(params)
    snr_eff = estimation_stats(params, rho).snr_eff
    r_opt, re = maximize_rate(theta, params, snr_eff)
    alpha = alpha_threshold(r_opt, snr_eff, params)
    return EffCapSolution(re=re, r_opt=r_opt, rho_opt=rho, alpha_opt=alpha,
                          theta=theta, snr_eff=snr_eff)


def bit_energy(params: SystemParams, re: float) -> float:
    """Bit energy ``SNR / re`` (linear). Zero spectral efficiency maps to ``inf``."""
    if re < 0:
        raise DomainError(f"spectral efficiency must be non-negative, got {re!r}")
    if re == 0:
        return math.inf
    return params.snr / re


def to_db(x: float) -> float:
    if x == math.inf:
        return math.inf
    return 10.0 * math.log10(x)
