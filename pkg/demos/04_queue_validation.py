"""
Check the QoS exponent against a simulated queue.

Constant arrivals at the effective capacity for theta feed the ON/OFF
server. The fitted decay rate of P(Q >= q) should then come out close to
theta. With a lighter load (80% of capacity) the tail falls off faster.
"""
import numpy as np

from effcap.channel import SystemParams
from effcap.queue_sim import run_replications

p = SystemParams()
for safety in (1.0, 0.8):
    runs = run_replications(0.01, p, seeds=range(4), safety=safety, frames=4 * 10**6)
    ratios = [v.ratio for v in runs]
    print(f"load {safety:.0%}: theta_hat/theta = {np.round(ratios, 3)}, "
          f"r^2 = {np.round([v.tail.r_squared for v in runs], 4)}")

v = runs[0]
print("fit window (bits):", v.tail.q_used[0], "...", v.tail.q_used[-1])
print("ON fraction:", v.summary.on_fraction, "expected:", np.exp(-v.summary.alpha))
