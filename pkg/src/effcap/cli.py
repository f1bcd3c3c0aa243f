"""
``effcap`` command line: parameter sweeps and queue validation to CSV.

    effcap <mode> [--config PATH] [--set key=value ...] --out PATH [--seed N]

Exit status: 0 success, 1 configuration error, 2 numerical/domain error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import tempfile

from .asymptotics import wideband_result
from .channel import estimation_stats, optimal_rho
from .config import MODES, RunConfig, parse_config, parse_document
from .effective_capacity import bit_energy, solve, to_db
from .errors import ConfigError, DomainError, EstimationError
from .queue_sim import RECORD_FIELDS, replication_record, run_replications

__all__ = ["COLUMNS", "rows_for", "write_csv", "run", "main"]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

COLUMNS = {
    "ebn0-lowpower": ("snr", "theta", "rho_opt", "r_opt", "re_bits_s_hz", "ebn0_db"),
    "ebn0-wideband": ("bandwidth", "theta", "re_bits_s_hz", "ebn0_db"),
    "wideband-table": ("theta", "alpha_star", "xi", "ebn0_min_db", "s0"),
    "optimal-rho": ("snr", "rho_opt", "snr_eff_opt"),
    "validate-queue": ("theta", "safety") + RECORD_FIELDS,
}


def _lowpower_rows(cfg: RunConfig):
    p = cfg.params
    for theta in cfg.theta_list:
        for snr in cfg.sweep.values():
            params = p.replace(pbar=float(snr) * p.n0 * p.bandwidth_b)
            sol = solve(theta, params)
            yield (float(snr), theta, sol.rho_opt, sol.r_opt, sol.re,
                   to_db(bit_energy(params, sol.re)))


def _wideband_rows(cfg: RunConfig):
    for theta in cfg.theta_list:
        for b in cfg.sweep.values():
            params = cfg.params.replace(bandwidth_b=float(b))
            sol = solve(theta, params)
            yield float(b), theta, sol.re, to_db(bit_energy(params, sol.re))


def _table_rows(cfg: RunConfig):
    for theta in cfg.theta_list:
        res = wideband_result(theta, cfg.params)
        yield theta, res.constants.alpha_star, res.constants.xi, res.ebn0_min_db, res.s0


def _rho_rows(cfg: RunConfig):
    p = cfg.params
    for snr in cfg.sweep.values():
        params = p.replace(pbar=float(snr) * p.n0 * p.bandwidth_b)
        rho = optimal_rho(params)
        yield float(snr), rho, estimation_stats(params, rho).snr_eff


def _queue_rows(cfg: RunConfig):
    q = cfg.queue
    for theta in cfg.theta_list:
        seeds = [cfg.seed + i for i in range(q.replications)]
        results = run_replications(theta, cfg.params, seeds, safety=q.safety,
                                   frames=q.frames, workers=q.workers, warmup=q.warmup)
        for res in results:
            rec = replication_record(res.summary, res.tail)
            yield (theta, q.safety) + tuple(rec[k] for k in RECORD_FIELDS)


_ROWS = {
    "ebn0-lowpower": _lowpower_rows,
    "ebn0-wideband": _wideband_rows,
    "wideband-table": _table_rows,
    "optimal-rho": _rho_rows,
    "validate-queue": _queue_rows,
}


def rows_for(cfg: RunConfig) -> list[tuple]:
    """All CSV data rows for a configuration, in axis order."""
    return list(_ROWS[cfg.mode](cfg))


def _fmt(v):
    if isinstance(v, float):
        # repr is the shortest string that round-trips exactly
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def write_csv(path, header, rows):
    """Write a CSV atomically: a sibling temp file renamed over ``path`` on success."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".effcap-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: RunConfig, out: str | None = None, stderr=None) -> int:
    """Execute a configuration and write its CSV. Returns the exit status."""
    stderr = stderr or sys.stderr
    path = out or cfg.output_path
    if not path:
        print("error: output_path: no output path given (use --out)", file=stderr)
        return EXIT_CONFIG
    try:
        rows = rows_for(cfg)
    except (DomainError, EstimationError, ArithmeticError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NUMERIC
    try:
        write_csv(path, COLUMNS[cfg.mode], rows)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=stderr)
        return EXIT_IO
    return EXIT_OK


def _parse_set(items):
    text = "\n".join(items)
    return parse_document(text)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="effcap",
        description="Effective capacity and bit-energy sweeps for a training-based fixed-rate link.",
    )
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--config", help="key = value configuration file")
    ap.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                    help="override a configuration key (repeatable)")
    ap.add_argument("--out", help="output CSV path")
    ap.add_argument("--seed", type=int, help="base PRNG seed (validate-queue)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        overrides = _parse_set(args.sets)
        overrides["mode"] = args.mode
        if args.seed is not None:
            overrides["seed"] = args.seed
        cfg = parse_config(text, overrides)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, out=args.out)


if __name__ == "__main__":
    sys.exit(main())
