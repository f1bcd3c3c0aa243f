"""Exit criteria for the package, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the terminal summary.
"""

import math

import numpy as np
import pytest

from effcap.asymptotics import alpha_star, alpha_star_residual, low_power_scan, wideband_result
from effcap.channel import (
    SystemParams,
    estimation_stats,
    grid_argmax_rho,
    optimal_rho,
    snr_eff_rational,
)
from effcap.effective_capacity import bit_energy, solve, to_db
from effcap.queue_sim import SimConfig, simulate

from conftest import EBN0_TABLE_DB, S0_TABLE, THETA_TABLE, random_params, record


def test_1_wideband_table(defaults):
    rows = [wideband_result(t, defaults) for t in THETA_TABLE]
    eb_err = max(abs(r.ebn0_min_db - e) for r, e in zip(rows, EBN0_TABLE_DB))
    s0_err = max(abs(r.s0 - s) for r, s in zip(rows, S0_TABLE))
    ok = eb_err <= 1e-3 and s0_err <= 1e-3
    record("1 wideband table", ok, f"max |dEb/N0| = {eb_err:.2e} dB, max |dS0| = {s0_err:.2e} (tol 1e-3)")
    assert ok


def test_2_finite_bandwidth_convergence(defaults):
    eb = []
    for b in (1e5, 1e6, 1e7):
        p = defaults.replace(bandwidth_b=b)
        eb.append(to_db(bit_energy(p, solve(0.01, p).re)))
    gap = eb[-1] - 4.9177
    ok = eb[0] > eb[1] > eb[2] and 0 <= gap < 0.05
    record("2 finite-B convergence", ok,
           "Eb/N0 = " + ", ".join(f"{e:.4f}" for e in eb) + f" dB, gap at 1e7 = {gap:.4f} dB (< 0.05)")
    assert ok


def test_3_low_power_divergence(defaults):
    grid = np.geomspace(1.0, 1e-6, 61)
    eb = np.array([e for _, e in low_power_scan(0.01, defaults, grid)])
    k = int(np.argmin(eb))
    excess = 10 * math.log10(eb[-1] / eb[k])
    ok = 0 < k < len(grid) - 1 and excess > 10 and bool(np.all(np.diff(eb[k:]) > 0))
    record("3 low-power divergence", ok,
           f"minimum at SNR = {grid[k]:.3g} ({to_db(eb[k]):.3f} dB), excess at 1e-6 = {excess:.1f} dB (> 10)")
    assert ok


def test_4_optimal_rho_vs_grid():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(50):
        p = random_params(rng)
        worst = max(worst, abs(optimal_rho(p) - grid_argmax_rho(p, 1e-6)))
    ok = worst <= 1e-6
    record("4 optimal-rho grid oracle", ok, f"max |rho_opt - grid argmax| = {worst:.2e} (grid step 1e-6)")
    assert ok


@pytest.mark.slow
def test_5_queue_tail(queue_runs):
    full = queue_runs[1.0]
    ratios = np.array([v.ratio for v in full])
    r2 = np.array([v.tail.r_squared for v in full])
    loose = sum(v.theta_hat > 0.01 for v in queue_runs[0.8])
    med_ratio, med_r2 = float(np.median(ratios)), float(np.median(r2))
    ok = 0.85 <= med_ratio <= 1.25 and med_r2 > 0.98 and loose >= 9
    record("5 queue-tail validation", ok,
           f"median theta_hat/theta = {med_ratio:.3f} in [0.85, 1.25], median r^2 = {med_r2:.4f} (> 0.98), "
           f"80% load theta_hat > theta in {loose}/10 seeds (>= 9)")
    assert ok


def test_6_theta_monotonicity(defaults):
    thetas = (0.001, 0.01, 0.1, 1.0)
    bad = []
    for snr in np.geomspace(1e-6, 10.0, 20):
        p = SystemParams.from_snr(float(snr))
        re = [solve(t, p).re for t in thetas]
        eb = [bit_energy(p, x) for x in re]
        if not (all(a >= b for a, b in zip(re, re[1:])) and all(a <= b for a, b in zip(eb, eb[1:]))):
            bad.append(float(snr))
    ok = not bad
    record("6 theta monotonicity", ok, f"violations at SNR {bad}" if bad else "20/20 SNR points ordered")
    assert ok


def test_7_algebraic_self_checks(defaults):
    worst_form = worst_var = 0.0
    for snr in np.geomspace(1e-8, 1e4, 25):
        p = SystemParams.from_snr(float(snr))
        for rho in np.arange(1, 100) / 100:
            s = estimation_stats(p, float(rho))
            worst_form = max(worst_form, abs(s.snr_eff / snr_eff_rational(p, rho) - 1))
            worst_var = max(worst_var, abs((s.var_est + s.var_err) / p.gamma - 1))
    rng = np.random.default_rng(17)
    worst_alpha = 0.0
    for _ in range(100):
        theta = float(10 ** rng.uniform(-6, 1))
        p = SystemParams(pbar=float(10 ** rng.uniform(0, 6)), frame_t=float(10 ** rng.uniform(-4, -1)),
                         bandwidth_b=1e6)
        worst_alpha = max(worst_alpha, alpha_star_residual(alpha_star(theta, p), theta, p))
    rho = optimal_rho(defaults)
    snr_eff = estimation_stats(defaults, rho).snr_eff
    r_unit = (defaults.tb - 1) / defaults.frame_t * math.log2(1 + snr_eff)
    summary = simulate(SimConfig(frames=10**6, arrival_per_frame=1.0, r=r_unit, rho=rho, warmup=0,
                                 q_levels=(1.0,)), defaults)
    p_on = math.exp(-summary.alpha)
    z = abs(summary.on_fraction - p_on) / math.sqrt(p_on * (1 - p_on) / summary.observed)
    ok = worst_form < 1e-12 and worst_var < 1e-12 and worst_alpha < 1e-12 and z < 3
    record("7 algebraic self-checks", ok,
           f"dual-form {worst_form:.1e}, variance {worst_var:.1e}, alpha* residual {worst_alpha:.1e} "
           f"(all < 1e-12), ON fraction z = {z:.2f} (< 3)")
    assert ok
