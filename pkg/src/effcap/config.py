"""
Run configuration for the ``effcap`` command.

A configuration document is flat ``key = value`` text, one entry per line,
``#`` starting a comment. Sweep axes use dotted keys::

    mode = ebn0-lowpower
    theta_list = [0.001, 0.01, 0.1, 1]
    sweep.snr.start = 1e-6
    sweep.snr.stop = 1
    sweep.snr.points = 61
    sweep.snr.scale = log

Values are JSON scalars or lists; bare words are strings, and a bare
comma-separated list of numbers is accepted for ``theta_list``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .channel import SystemParams
from .errors import ConfigError, DomainError

__all__ = ["MODES", "SweepSpec", "QueueSpec", "RunConfig", "parse_config", "parse_document"]

MODES = ("ebn0-lowpower", "ebn0-wideband", "wideband-table", "optimal-rho", "validate-queue")

# figure-reproduction defaults: gamma = 1, T = 2 ms, B = 100 kHz, P/N0 = 1e4
PARAM_DEFAULTS = {"gamma": 1.0, "n0": 1.0, "frame_t": 2e-3, "bandwidth_b": 1e5, "pbar": 1e4}

SWEEP_VARS = {
    "ebn0-lowpower": ("snr",),
    "optimal-rho": ("snr",),
    "ebn0-wideband": ("bandwidth_b",),
    "wideband-table": (),
    "validate-queue": (),
}

DEFAULT_SWEEPS = {
    "ebn0-lowpower": ("snr", 1e-6, 1.0, 61, "log"),
    "optimal-rho": ("snr", 1e-6, 1e2, 41, "log"),
    "ebn0-wideband": ("bandwidth_b", 1e4, 1e7, 31, "log"),
}

DEFAULT_THETAS = {
    "ebn0-lowpower": (0.001, 0.01, 0.1, 1.0),
    "ebn0-wideband": (0.001, 0.01, 0.1, 1.0),
    "wideband-table": (0.0, 0.001, 0.01, 0.1, 1.0),
    "optimal-rho": (),
    "validate-queue": (0.01,),
}

SWEEP_FIELDS = ("start", "stop", "points", "scale")
QUEUE_KEYS = {"queue.frames": "frames", "queue.replications": "replications",
              "queue.safety": "safety", "queue.workers": "workers", "queue.warmup": "warmup"}
TOP_KEYS = {"mode", "theta_list", "output_path", "seed", *PARAM_DEFAULTS}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "log"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class QueueSpec:
    frames: int = 10**7
    replications: int = 10
    safety: float = 1.0
    workers: int = 1
    warmup: int | None = None


@dataclass(frozen=True)
class RunConfig:
    mode: str
    params: SystemParams
    sweep: SweepSpec | None
    theta_list: tuple[float, ...]
    output_path: str | None = None
    seed: int = 0
    queue: QueueSpec = field(default_factory=QueueSpec)


def _parse_value(text):
    text = text.strip()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    if "," in text:
        return [_parse_value(part) for part in text.split(",")]
    try:
        return float(text)
    except ValueError:
        return text


def parse_document(text: str) -> dict:
    """Split a key-value document into a ``{key: value}`` mapping."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = _parse_value(value)
    return out


def _number(key, value, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def parse_config(text: str | dict, overrides: dict | None = None) -> RunConfig:
    """Validate a configuration document (or pre-split mapping) into a ``RunConfig``.

    ``overrides`` entries replace document entries of the same key.
    """
    entries = dict(parse_document(text) if isinstance(text, str) else text)
    if overrides:
        entries.update(overrides)

    sweep_raw: dict[str, dict] = {}
    queue_raw = {}
    for key, value in entries.items():
        if key in TOP_KEYS:
            continue
        if key in QUEUE_KEYS:
            queue_raw[QUEUE_KEYS[key]] = value
            continue
        parts = key.split(".")
        if len(parts) == 3 and parts[0] == "sweep" and parts[2] in SWEEP_FIELDS:
            sweep_raw.setdefault(parts[1], {})[parts[2]] = value
            continue
        raise ConfigError(f"unknown key {key!r}")

    mode = entries.get("mode")
    if mode is None:
        raise ConfigError("mode is required")
    if mode not in MODES:
        raise ConfigError(f"mode: unknown mode {mode!r}; expected one of {', '.join(MODES)}")

    values = {}
    for name, default in PARAM_DEFAULTS.items():
        values[name] = _number(name, entries.get(name, default))
    try:
        params = SystemParams(**values)
    except DomainError as exc:
        raise ConfigError(f"params: {exc}") from None

    if len(sweep_raw) > 1:
        raise ConfigError(
            "sweep: exactly one variable may be swept, got " + ", ".join(sorted(sweep_raw))
        )
    sweep = None
    allowed = SWEEP_VARS[mode]
    if sweep_raw:
        (var, spec), = sweep_raw.items()
        if var not in allowed:
            raise ConfigError(
                f"sweep.{var}: mode {mode} sweeps "
                + (", ".join(allowed) if allowed else "no variable")
            )
        default = DEFAULT_SWEEPS[mode]
        start = _number(f"sweep.{var}.start", spec.get("start", default[1]))
        stop = _number(f"sweep.{var}.stop", spec.get("stop", default[2]))
        points = _number(f"sweep.{var}.points", spec.get("points", default[3]), int)
        scale = spec.get("scale", default[4])
        if scale not in ("log", "linear"):
            raise ConfigError(f"sweep.{var}.scale: expected 'log' or 'linear', got {scale!r}")
        if points < 2:
            raise ConfigError(f"sweep.{var}.points: need at least 2, got {points}")
        if not (start > 0 and stop > 0):
            raise ConfigError(f"sweep.{var}: start and stop must be positive")
        if var == "bandwidth_b" and min(start, stop) * params.frame_t <= 2:
            raise ConfigError(f"sweep.{var}: frame_t * bandwidth_b must exceed 2")
        sweep = SweepSpec(var, start, stop, points, scale)
    elif mode in DEFAULT_SWEEPS:
        sweep = SweepSpec(*DEFAULT_SWEEPS[mode])

    if "theta_list" in entries:
        raw = entries["theta_list"]
        raw = raw if isinstance(raw, list) else [raw]
        thetas = tuple(_number("theta_list", v) for v in raw)
        if not thetas and mode != "optimal-rho":
            raise ConfigError("theta_list: must not be empty")
        if any(t < 0 for t in thetas):
            raise ConfigError("theta_list: QoS exponents must be non-negative")
        if mode == "validate-queue" and any(t == 0 for t in thetas):
            raise ConfigError("theta_list: validate-queue needs theta > 0")
    else:
        thetas = DEFAULT_THETAS[mode]

    seed = _number("seed", entries.get("seed", 0), int)

    q = QueueSpec()
    qv = {}
    for name, value in queue_raw.items():
        kind = float if name == "safety" else int
        qv[name] = _number(f"queue.{name}", value, kind)
    q = QueueSpec(**{**q.__dict__, **qv})
    if q.replications < 1:
        raise ConfigError("queue.replications: need at least 1")
    if not 0 < q.safety <= 1:
        raise ConfigError(f"queue.safety: must lie in (0, 1], got {q.safety}")
    if q.frames < 2 or (q.warmup is not None and not q.frames > q.warmup >= 0):
        raise ConfigError("queue.frames: need frames > warmup >= 0")

    output = entries.get("output_path")
    if output is not None and not isinstance(output, str):
        raise ConfigError(f"output_path: expected a path, got {output!r}")

    return RunConfig(mode=mode, params=params, sweep=sweep, theta_list=thetas,
                     output_path=output, seed=seed, queue=q)
