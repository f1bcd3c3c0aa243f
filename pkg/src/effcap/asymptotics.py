"""
Low-SNR energy efficiency: wideband limits and the low-power scan.

Wideband regime: average power fixed, ``B -> inf``. The minimum bit energy
and wideband slope have closed forms in terms of

    phi    = (g P / N0) (sqrt(1 + N0 / (g P T)) - sqrt(N0 / (g P T)))^2
    delta  = theta T P / (N0 ln 2)
    alpha* = ln2 / (theta T phi) * ln(1 + theta T phi / ln2)
    xi     = 1 - exp(-alpha*) (1 - exp(-theta T phi alpha* / ln2))

At ``theta = 0`` these are replaced by their analytic limits:
``alpha* = 1``, ``xi = 1``, ``Eb/N0_min = P e ln2 / (N0 phi)`` and
``S0 = phi / (e K)`` where ``K`` is the bracketed slope term evaluated at
``alpha* = 1``.

Low-power regime: bandwidth fixed, ``P -> 0``; the bit energy grows
without bound, which :func:`low_power_scan` exhibits numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams, optimal_rho
from .effective_capacity import _check_theta, bit_energy, maximize_rate
from .errors import DomainError

__all__ = [
    "WidebandConstants",
    "WidebandResult",
    "phi",
    "alpha_star",
    "alpha_star_residual",
    "wideband_result",
    "snr_eff_opt",
    "low_power_scan",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class WidebandConstants:
    phi: float
    delta: float
    alpha_star: float
    xi: float


@dataclass(frozen=True)
class WidebandResult:
    ebn0_min_linear: float
    ebn0_min_db: float
    s0: float
    constants: WidebandConstants


def phi(params: SystemParams) -> float:
    """Wideband effective-SNR coefficient ``phi`` (per unit of ``1/B``)."""
    g_snr = params.gamma * params.pbar / params.n0
    a = 1.0 / (g_snr * params.frame_t)
    return g_snr * (math.sqrt(1.0 + a) - math.sqrt(a)) ** 2


def _theta_t_phi(theta, params):
    return theta * params.frame_t * phi(params) / LN2


def alpha_star(theta: float, params: SystemParams) -> float:
    """Limit of the optimal outage threshold as ``B -> inf``."""
    _check_theta(theta)
    x = _theta_t_phi(theta, params)
    if x == 0:
        return 1.0
    return math.log1p(x) / x


def alpha_star_residual(alpha: float, theta: float, params: SystemParams) -> float:
    """Relative residual of ``alpha`` in the defining fixed-point equation."""
    x = _theta_t_phi(theta, params)
    rhs = 1.0 if x == 0 else math.log1p(x) / x
    return abs(alpha - rhs) / rhs


def wideband_result(theta: float, params: SystemParams) -> WidebandResult:
    """Minimum bit energy and wideband slope for QoS exponent ``theta``.

    ``params.bandwidth_b`` is irrelevant here; only ``gamma``, ``n0``,
    ``frame_t`` and ``pbar`` enter.
    """
    _check_theta(theta)
    T, p_n0 = params.frame_t, params.pbar / params.n0
    ph = phi(params)
    a_star = alpha_star(theta, params)
    slope_term = (math.sqrt(1.0 + params.gamma * p_n0 * T) - 1.0) / T + ph * a_star / 2.0
    if theta == 0:
        xi = 1.0
        delta = 0.0
        eb = p_n0 * math.e * LN2 / ph
        s0 = ph * math.exp(-1.0) / slope_term
    else:
        delta = theta * T * p_n0 / LN2
        one_minus_xi = -math.exp(-a_star) * math.expm1(-theta * T * ph * a_star / LN2)
        xi = 1.0 - one_minus_xi
        log_xi = math.log1p(-one_minus_xi)
        eb = -delta * LN2 / log_xi
        s0 = (xi * log_xi ** 2 * LN2
              / (theta * T * a_star * one_minus_xi * slope_term))
    return WidebandResult(
        ebn0_min_linear=eb,
        ebn0_min_db=10.0 * math.log10(eb),
        s0=s0,
        constants=WidebandConstants(phi=ph, delta=delta, alpha_star=a_star, xi=xi),
    )


def _phi_psi(params: SystemParams):
    rho = optimal_rho(params)
    g, tb = params.gamma, params.tb
    phi_snr = rho * (1.0 - rho) * (g * tb) ** 2
    psi_snr = (1.0 + (tb - 2.0) * rho) * g * tb
    return phi_snr, psi_snr


def snr_eff_opt(params: SystemParams) -> float:
    """Effective SNR at the optimal training fraction, via the ``phi(SNR)``/``psi(SNR)`` form."""
    phi_snr, psi_snr = _phi_psi(params)
    snr = params.snr
    return phi_snr * snr ** 2 / (psi_snr * snr + params.tb - 1.0)


def low_power_scan(theta: float, params_template: SystemParams, snr_grid) -> list[tuple[float, float]]:
    """Bit energy along a descending SNR grid at fixed bandwidth.

    Average power is varied to hit each SNR. Returns ``(snr, Eb/N0)``
    pairs with the bit energy in linear scale.
    """
    _check_theta(theta)
    snr_grid = np.asarray(snr_grid, dtype=float)
    if snr_grid.size == 0:
        raise DomainError("snr_grid is empty")
    if np.any(snr_grid <= 0) or np.any(np.diff(snr_grid) >= 0):
        raise DomainError("snr_grid must be positive and strictly descending")
    out = []
    p = params_template
    for snr in snr_grid:
        params = p.replace(pbar=float(snr) * p.n0 * p.bandwidth_b)
        _, re = maximize_rate(theta, params, snr_eff_opt(params))
        out.append((float(snr), bit_energy(params, re)))
    return out
