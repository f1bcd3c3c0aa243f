"""
Wideband regime: fixed power (P/N0 = 1e4), bandwidth growing.

The closed-form minimum bit energy and wideband slope per QoS exponent are
printed first. Then the finite-bandwidth optimum is shown approaching them.
Frame duration is T = 2 ms.
"""
from effcap.asymptotics import wideband_result
from effcap.channel import SystemParams
from effcap.effective_capacity import bit_energy, solve, to_db

p = SystemParams()
print(f"{'theta':>7} {'alpha*':>9} {'Eb/N0 min [dB]':>15} {'S0':>8}")
for theta in (0.0, 0.001, 0.01, 0.1, 1.0):
    res = wideband_result(theta, p)
    print(f"{theta:7g} {res.constants.alpha_star:9.5f} {res.ebn0_min_db:15.4f} {res.s0:8.4f}")

print("\ntheta = 0.01, growing bandwidth:")
for b in (1e4, 1e5, 1e6, 1e7, 1e8):
    q = p.replace(bandwidth_b=b)
    sol = solve(0.01, q)
    print(f"  B = {b:6.0e}  SNR = {q.snr:8.2e}  Eb/N0 = {to_db(bit_energy(q, sol.re)):.4f} dB"
          f"  alpha_opt = {sol.alpha_opt:.5f}")
