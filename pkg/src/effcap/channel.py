"""
Physical-layer model of a pilot-assisted block-fading Rayleigh link.

Each frame of duration ``T`` carries ``TB`` symbols: one pilot and
``TB - 1`` data symbols. A fraction ``rho`` of the frame energy
``P T`` goes to the pilot, the rest is spread uniformly over the data
symbols. The receiver forms an MMSE estimate of the fading coefficient
and treats the estimation error as extra Gaussian noise, which yields an
effective SNR and a lower bound on the instantaneous rate.

With a fixed transmission rate ``r`` the frame is either ON (``r < C_L``)
or OFF. Since ``|w|^2`` is unit-mean exponential, the ON probability is
``exp(-alpha)`` with ``alpha`` the outage threshold on ``|w|^2``.

``TB`` need not be an integer: the symbol counts only enter algebraically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "SystemParams",
    "EstimationStats",
    "training_energies",
    "estimation_stats",
    "snr_eff_rational",
    "optimal_rho",
    "alpha_threshold",
    "on_probability",
    "capacity_lower_bound",
    "grid_argmax_rho",
]


@dataclass(frozen=True)
class SystemParams:
    """Physical link constants.

    Attributes
    ----------
    gamma : float
        Mean channel power gain ``E|h|^2``.
    n0 : float
        Noise spectral density.
    frame_t : float
        Frame duration ``T`` in seconds.
    bandwidth_b : float
        Bandwidth ``B`` in Hz (also the symbol rate).
    pbar : float
        Average power.
    """

    gamma: float = 1.0
    n0: float = 1.0
    frame_t: float = 2e-3
    bandwidth_b: float = 1e5
    pbar: float = 1e4

    def __post_init__(self):
        for name in ("gamma", "n0", "frame_t", "bandwidth_b", "pbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and positive, got {value!r}")
        if not self.tb > 2:
            raise DomainError(
                f"frame_t * bandwidth_b must exceed 2, got {self.tb!r}"
            )
        snr = self.snr
        if not (math.isfinite(snr) and snr > 0):
            raise DomainError(f"derived snr must be finite and positive, got {snr!r}")

    @property
    def tb(self) -> float:
        """Symbols per frame."""
        return self.frame_t * self.bandwidth_b

    @property
    def snr(self) -> float:
        return self.pbar / (self.n0 * self.bandwidth_b)

    @classmethod
    def from_snr(cls, snr: float, gamma=1.0, n0=1.0, frame_t=2e-3, bandwidth_b=1e5):
        """Build parameters hitting ``snr`` by choosing ``pbar`` at fixed bandwidth."""
        return cls(gamma=gamma, n0=n0, frame_t=frame_t, bandwidth_b=bandwidth_b,
                   pbar=snr * n0 * bandwidth_b)

    def replace(self, **changes) -> "SystemParams":
        fields = dict(gamma=self.gamma, n0=self.n0, frame_t=self.frame_t,
                      bandwidth_b=self.bandwidth_b, pbar=self.pbar)
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class EstimationStats:
    """MMSE estimation statistics for one training split."""

    rho: float
    e_t: float
    e_s: float
    var_est: float
    var_err: float
    snr_eff: float


def _check_fraction(rho):
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [0, 1], got {rho!r}")


def training_energies(params: SystemParams, rho: float) -> tuple[float, float]:
    """Pilot energy and per-data-symbol energy for training fraction ``rho``."""
    _check_fraction(rho)
    frame_energy = params.pbar * params.frame_t
    return rho * frame_energy, (1.0 - rho) * frame_energy / (params.tb - 1.0)


def snr_eff_rational(params: SystemParams, rho):
    """Effective SNR from the closed rational form in ``rho``.

    Vectorised over ``rho``. Used as the second route for the effective
    SNR and as the objective of the brute-force ``rho`` search.
    """
    rho = np.asarray(rho, dtype=float)
    g, tb, snr = params.gamma, params.tb, params.snr
    num = rho * (1.0 - rho) * (g * tb * snr) ** 2
    den = rho * g * tb * (tb - 2.0) * snr + g * tb * snr + tb - 1.0
    out = num / den
    return float(out) if out.ndim == 0 else out


def estimation_stats(params: SystemParams, rho: float) -> EstimationStats:
    """MMSE variances and effective SNR for a training fraction.

    The effective SNR is evaluated from the energy/variance definition and
    checked against :func:`snr_eff_rational`; a disagreement beyond
    ``1e-12`` relative raises ``ArithmeticError``.
    """
    e_t, e_s = training_energies(params, rho)
    g, n0 = params.gamma, params.n0
    denom = g * e_t + n0
    var_est = g * g * e_t / denom
    var_err = g * n0 / denom
    snr_eff = e_s * var_est / (var_err * e_s + n0)
    check = snr_eff_rational(params, rho)
    if not math.isclose(snr_eff, check, rel_tol=1e-12, abs_tol=1e-300):
        raise ArithmeticError(
            f"effective SNR forms disagree: {snr_eff!r} vs {check!r}"
        )
    return EstimationStats(rho=rho, e_t=e_t, e_s=e_s, var_est=var_est,
                           var_err=var_err, snr_eff=snr_eff)


def optimal_rho(params: SystemParams) -> float:
    """Training fraction maximizing the effective SNR.

    Returns ``sqrt(eta (eta + 1)) - eta`` with
    ``eta = (g TB snr + TB - 1) / (g TB (TB - 2) snr)``. The rate and the
    QoS exponent do not enter: they only see ``rho`` through the
    effective SNR, which the fraction maximizes.
    """
    tb = params.tb
    if not tb > 2:
        raise DomainError(f"TB must exceed 2, got {tb!r}")
    g, snr = params.gamma, params.snr
    eta = (g * tb * snr + tb - 1.0) / (g * tb * (tb - 2.0) * snr)
    # sqrt(eta^2 + eta) - eta, rearranged to avoid cancellation for large eta
    return eta / (math.sqrt(eta * (eta + 1.0)) + eta)


def grid_argmax_rho(params: SystemParams, step: float = 1e-6) -> float:
    """Brute-force maximizer of the effective SNR over a uniform ``rho`` grid."""
    n = int(round(1.0 / step))
    best_rho, best_val = 0.0, -math.inf
    chunk = 1 << 20
    for start in range(1, n, chunk):
        idx = np.arange(start, min(start + chunk, n), dtype=float)
        vals = snr_eff_rational(params, idx * step)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best_rho = float(vals[k]), float(idx[k] * step)
    return best_rho


def alpha_threshold(r: float, snr_eff: float, params: SystemParams) -> float:
    """Outage threshold on ``|w|^2`` for a fixed rate ``r`` in bits/s."""
    if snr_eff <= 0:
        raise DomainError(f"snr_eff must be positive, got {snr_eff!r}")
    if r < 0:
        raise DomainError(f"rate must be non-negative, got {r!r}")
    exponent = r * params.frame_t / (params.tb - 1.0) * math.log(2.0)
    if exponent > 709.0:
        return math.inf
    return math.expm1(exponent) / snr_eff


def on_probability(alpha: float) -> float:
    """Probability ``P{|w|^2 > alpha} = exp(-alpha)`` that a frame is ON."""
    if alpha < 0:
        raise DomainError(f"alpha must be non-negative, got {alpha!r}")
    return math.exp(-alpha)


def capacity_lower_bound(w_sq, snr_eff: float, params: SystemParams):
    """Instantaneous rate lower bound ``(TB-1)/T log2(1 + snr_eff |w|^2)``."""
    w_sq = np.asarray(w_sq, dtype=float)
    out = (params.tb - 1.0) / params.frame_t * np.log1p(snr_eff * w_sq) / math.log(2.0)
    return float(out) if out.ndim == 0 else out
