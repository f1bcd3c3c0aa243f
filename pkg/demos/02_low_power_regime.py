"""
Bit energy against SNR at fixed bandwidth.

As the average power falls, the pilot gets weaker and the channel estimate
degrades. The bit energy therefore has a minimum at a non-zero SNR and
grows without bound below it. More bandwidth lowers that minimum and moves
it to a lower SNR.
"""
import numpy as np

from effcap.asymptotics import low_power_scan
from effcap.channel import SystemParams
from effcap.effective_capacity import solve, to_db

grid = np.geomspace(10.0, 1e-6, 57)
for b in (1e4, 1e5, 1e6):
    scan = low_power_scan(0.01, SystemParams(bandwidth_b=b), grid)
    snr_min, eb_min = min(scan, key=lambda t: t[1])
    print(f"B = {b:8.0e}: min Eb/N0 = {to_db(eb_min):6.3f} dB at SNR = {snr_min:.3g}; "
          f"at SNR = 1e-6: {to_db(scan[-1][1]):6.2f} dB")

# stricter queueing constraints cost spectral efficiency at every SNR
p = SystemParams.from_snr(0.1)
for theta in (0.0, 0.001, 0.01, 0.1, 1.0):
    sol = solve(theta, p)
    print(f"theta = {theta:<6} R_E = {sol.re:.5f} bits/s/Hz  r_opt = {sol.r_opt:9.1f} b/s  "
          f"alpha_opt = {sol.alpha_opt:.4f}")
