"""
Frame-level Monte-Carlo simulation of the ON/OFF service queue.

Each frame draws an independent ``|w|^2 ~ Exp(1)`` (inverse CDF on a
Philox stream). The frame serves ``r T`` bits when ``|w|^2 > alpha`` and
nothing otherwise, while a constant number of bits arrives. The backlog
follows the Lindley recursion ``Q[n+1] = max(Q[n] + a - s[n], 0)`` from an
empty buffer.

The recursion is evaluated in blocks with the running-minimum identity

    Q[n] = S[n] + max(Q[0], -min_{k<=n} S[k]),    S[k] = sum_{j<=k} (a - s[j])

which is exact and vectorizes over a block.

The tail exponent is then fitted from exceedance frequencies
``P(Q >= q)`` at a set of thresholds, to be compared with the QoS exponent
the effective capacity was computed for. Alongside the frame counts the
simulator counts up-crossings of each threshold, i.e. the number of
distinct excursions that reached it.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import SystemParams, alpha_threshold, estimation_stats
from .effective_capacity import solve
from .errors import DomainError, EstimationError

__all__ = [
    "SimConfig",
    "QueueSummary",
    "TailEstimate",
    "ValidationResult",
    "simulate",
    "estimate_decay",
    "validate_theta",
    "run_replications",
    "replication_record",
    "RECORD_FIELDS",
]

BLOCK = 1 << 16
MIN_EXCEEDANCES = 100
AUTO_LEVELS = 16


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``warmup=None`` discards the first 1% of frames. ``q_levels=None``
    places thresholds automatically between the median non-zero backlog
    and the level exceeded by ``MIN_EXCEEDANCES`` frames. The lower end is
    never below one ON frame of service ``r T``: smaller backlogs drain in
    a single frame and carry no tail information.
    """

    frames: int
    arrival_per_frame: float
    r: float
    rho: float
    seed: int = 0
    warmup: int | None = None
    q_levels: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.warmup is None:
            object.__setattr__(self, "warmup", self.frames // 100)
        if not self.frames > self.warmup >= 0:
            raise DomainError(f"need frames > warmup >= 0, got {self.frames}, {self.warmup}")
        if self.arrival_per_frame < 0:
            raise DomainError("arrival_per_frame must be non-negative")
        if self.r < 0:
            raise DomainError("rate must be non-negative")
        if self.q_levels is not None:
            q = np.asarray(self.q_levels, dtype=float)
            if q.ndim != 1 or q.size == 0 or np.any(q <= 0) or np.any(np.diff(q) <= 0):
                raise DomainError("q_levels must be positive and strictly increasing")
            object.__setattr__(self, "q_levels", tuple(float(v) for v in q))


@dataclass(frozen=True)
class QueueSummary:
    """Stationary statistics of one simulated replication."""

    seed: int
    frames: int
    warmup: int
    arrival_per_frame: float
    r: float
    rho: float
    alpha: float
    service_bits: float
    stable: bool
    observed: int
    on_count: int
    on_fraction: float
    mean_service: float
    q_levels: np.ndarray
    counts: np.ndarray
    median_nonzero_q: float
    final_q: float
    crossings: np.ndarray | None = None
    transitions: dict = field(default_factory=dict)

    @property
    def exceedance(self) -> np.ndarray:
        return self.counts / self.observed


@dataclass(frozen=True)
class TailEstimate:
    theta_hat: float
    intercept: float
    r_squared: float
    counts: np.ndarray
    q_used: np.ndarray
    stable: bool


@dataclass(frozen=True)
class ValidationResult:
    theta_hat: float
    theta: float
    ratio: float
    summary: QueueSummary
    tail: TailEstimate


def _upcrossings(prev, trace, levels):
    """Number of frames at which the backlog rises from below to at/above each level."""
    lo = np.concatenate(([prev], trace[:-1]))
    rising = trace > lo
    hi_sorted = np.sort(trace[rising])
    lo_sorted = np.sort(lo[rising])
    levels = np.asarray(levels, dtype=float)
    # lo < L <= hi  <=>  (hi >= L) and not (lo >= L), since lo < hi
    n_hi = hi_sorted.size - np.searchsorted(hi_sorted, levels, side="left")
    n_lo = lo_sorted.size - np.searchsorted(lo_sorted, levels, side="left")
    return (n_hi - n_lo).astype(np.int64)


def _auto_levels(prev, trace, floor):
    positive = trace[trace > 0]
    if positive.size < MIN_EXCEEDANCES:
        return np.empty(0)
    q_lo = max(float(np.median(positive)), floor)
    q_max = float(positive.max())
    if not q_max > q_lo:
        return np.empty(0)
    candidates = np.linspace(q_lo, q_max, 1024)
    usable = candidates[_upcrossings(prev, trace, candidates) >= MIN_EXCEEDANCES]
    if usable.size == 0 or not usable[-1] > q_lo:
        return np.empty(0)
    return np.linspace(q_lo, usable[-1], AUTO_LEVELS)


def simulate(config: SimConfig, params: SystemParams) -> QueueSummary:
    """Run one replication of the ON/OFF queue."""
    snr_eff = estimation_stats(params, config.rho).snr_eff
    if snr_eff > 0:
        alpha = alpha_threshold(config.r, snr_eff, params)
    else:
        alpha = math.inf
    service = config.r * params.frame_t
    a = float(config.arrival_per_frame)
    p_on = math.exp(-alpha)
    stable = a < service * p_on

    rng = np.random.Generator(np.random.Philox(config.seed))
    keep_trace = config.q_levels is None
    trace = np.empty(config.frames - config.warmup) if keep_trace else None
    levels = None if keep_trace else np.asarray(config.q_levels)
    counts = None if keep_trace else np.zeros(levels.size, dtype=np.int64)
    crossings = None if keep_trace else np.zeros(levels.size, dtype=np.int64)
    q_before = 0.0
    # absolute floor below which a backlog is rounding noise from the block sums
    eps = 1e-9 * max(a, service, 1.0)

    q = 0.0
    on_count = 0
    trans = np.zeros((2, 2), dtype=np.int64)
    prev_on = None
    done = 0
    while done < config.frames:
        n = min(BLOCK, config.frames - done)
        u = rng.random(n)
        w_sq = -np.log1p(-u)
        on = w_sq > alpha
        s = np.cumsum(np.where(on, a - service, a))
        run_min = np.minimum.accumulate(s)
        block_q = s + np.maximum(q, -run_min)
        block_q[block_q < eps] = 0.0

        on_i = on.astype(np.int8)
        if prev_on is not None:
            trans[prev_on, on_i[0]] += 1
        np.add.at(trans, (on_i[:-1], on_i[1:]), 1)
        prev_on = int(on_i[-1])

        start = max(config.warmup - done, 0)
        if start < n:
            obs = block_q[start:]
            prev = block_q[start - 1] if start > 0 else q
            if done + start == config.warmup:
                q_before = prev
            on_count += int(np.count_nonzero(on[start:]))
            if keep_trace:
                off = done + start - config.warmup
                trace[off:off + obs.size] = obs
            else:
                above = obs[:, None] >= levels[None, :]
                below_before = np.concatenate(([prev], obs[:-1]))[:, None] < levels[None, :]
                counts += np.count_nonzero(above, axis=0)
                crossings += np.count_nonzero(above & below_before, axis=0)
        q = float(block_q[-1])
        done += n

    observed = config.frames - config.warmup
    if keep_trace:
        levels = _auto_levels(q_before, trace, service)
        sorted_trace = np.sort(trace)
        counts = observed - np.searchsorted(sorted_trace, levels, side="left")
        crossings = _upcrossings(q_before, trace, levels)
        positive = trace[trace > 0]
        median_nz = float(np.median(positive)) if positive.size else 0.0
    else:
        median_nz = math.nan

    return QueueSummary(
        seed=config.seed,
        frames=config.frames,
        warmup=config.warmup,
        arrival_per_frame=a,
        r=config.r,
        rho=config.rho,
        alpha=alpha,
        service_bits=service,
        stable=stable,
        observed=observed,
        on_count=on_count,
        on_fraction=on_count / observed,
        mean_service=service * on_count / observed,
        q_levels=np.asarray(levels, dtype=float),
        counts=np.asarray(counts, dtype=np.int64),
        crossings=np.asarray(crossings, dtype=np.int64),
        median_nonzero_q=median_nz,
        final_q=q,
        transitions={"off_off": int(trans[0, 0]), "off_on": int(trans[0, 1]),
                     "on_off": int(trans[1, 0]), "on_on": int(trans[1, 1])},
    )


def estimate_decay(summary: QueueSummary, q_levels=None) -> TailEstimate:
    """Least-squares fit of ``ln P(Q >= q)`` against ``q``.

    A threshold is usable when it was exceeded in at least
    ``MIN_EXCEEDANCES`` separate excursions (up-crossings); frames within
    one excursion are strongly correlated and do not count separately.
    Summaries without crossing counts fall back to frame counts. ``q_levels`` optionally restricts the fit to a subset of the
    summary's thresholds.
    """
    if not summary.stable:
        raise EstimationError(
            f"unstable queue: arrival {summary.arrival_per_frame!r} >= mean service "
            f"{summary.service_bits * math.exp(-summary.alpha)!r} bits/frame"
        )
    q = np.asarray(summary.q_levels, dtype=float)
    counts = np.asarray(summary.counts)
    events = counts if summary.crossings is None else np.asarray(summary.crossings)
    mask = events >= MIN_EXCEEDANCES
    if q_levels is not None:
        mask &= np.isin(q, np.asarray(q_levels, dtype=float))
    if np.count_nonzero(mask) < 3:
        raise EstimationError(
            f"only {int(np.count_nonzero(mask))} thresholds with >= {MIN_EXCEEDANCES} "
            f"exceedances (levels={q.tolist()}, events={events.tolist()}); need 3"
        )
    x = q[mask]
    y = np.log(counts[mask] / summary.observed)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return TailEstimate(theta_hat=float(-slope), intercept=float(intercept),
                        r_squared=min(max(r2, 0.0), 1.0), counts=counts[mask],
                        q_used=x, stable=True)


def validate_theta(theta: float, params: SystemParams, safety: float = 1.0,
                   frames: int = 10**7, seed: int = 0, warmup=None,
                   q_levels=None) -> ValidationResult:
    """Simulate at the optimal operating point and fit the tail exponent.

    The arrival is ``safety * R_E * T * B`` bits per frame; ``safety = 1``
    loads the queue at exactly its effective capacity for ``theta``.
    """
    if not theta > 0:
        raise DomainError("validation needs theta > 0")
    if not 0 < safety <= 1:
        raise DomainError(f"safety must lie in (0, 1], got {safety!r}")
    sol = solve(theta, params)
    arrival = safety * sol.re * params.tb
    cfg = SimConfig(frames=frames, arrival_per_frame=arrival, r=sol.r_opt,
                    rho=sol.rho_opt, seed=seed, warmup=warmup, q_levels=q_levels)
    summary = simulate(cfg, params)
    tail = estimate_decay(summary)
    return ValidationResult(theta_hat=tail.theta_hat, theta=theta,
                            ratio=tail.theta_hat / theta, summary=summary, tail=tail)


def _validate_job(job):
    return validate_theta(**job)


def run_replications(theta, params, seeds, safety=1.0, frames=10**7, workers=1, **kwargs):
    """Independent replications, one Philox stream per seed, in seed order."""
    jobs = [dict(theta=theta, params=params, safety=safety, frames=frames, seed=s, **kwargs)
            for s in seeds]
    if workers <= 1:
        return [_validate_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_validate_job, jobs))


RECORD_FIELDS = ("seed", "frames", "arrival_bits", "r", "rho", "alpha", "on_fraction",
                 "q_levels", "counts", "crossings", "theta_hat", "r_squared")


def replication_record(summary: QueueSummary, tail: TailEstimate | None) -> dict:
    """Flat record of one replication; list-valued fields are ``;``-joined."""
    return {
        "seed": summary.seed,
        "frames": summary.frames,
        "arrival_bits": summary.arrival_per_frame,
        "r": summary.r,
        "rho": summary.rho,
        "alpha": summary.alpha,
        "on_fraction": summary.on_fraction,
        "q_levels": ";".join(repr(float(v)) for v in summary.q_levels),
        "counts": ";".join(str(int(c)) for c in summary.counts),
        "crossings": ";".join(str(int(c)) for c in summary.crossings),
        "theta_hat": tail.theta_hat if tail is not None else math.nan,
        "r_squared": tail.r_squared if tail is not None else math.nan,
    }
