"""
How much of each frame's energy should go to the pilot?

The optimal training fraction has a closed form. Here it is compared with a
brute-force search over rho, across SNR. At high SNR it settles at
(sqrt(TB - 1) - 1) / (TB - 2). At low SNR it approaches one half.
"""
import math

import numpy as np

from effcap.channel import SystemParams, estimation_stats, grid_argmax_rho, optimal_rho

print(f"{'SNR':>10} {'rho_opt':>10} {'grid':>10} {'snr_eff':>12}")
for snr in np.geomspace(1e-4, 1e4, 9):
    p = SystemParams.from_snr(float(snr))
    rho = optimal_rho(p)
    print(f"{snr:10.3g} {rho:10.6f} {grid_argmax_rho(p, 1e-5):10.6f} "
          f"{estimation_stats(p, rho).snr_eff:12.5g}")

tb = SystemParams().tb
print("high-SNR limit:", (math.sqrt(tb - 1) - 1) / (tb - 2))

# estimate/error variances always add back up to the channel gain
s = estimation_stats(SystemParams.from_snr(0.1), 0.2)
print("var_est + var_err =", s.var_est + s.var_err)
