"""Walkthrough: selfish lane choice at a weaving ramp, and what it costs.

Lane-1 through drivers pick between staying in the conflict lane (steadfast)
and moving over to Lane 2 (bypass). Both costs are affine in the steadfast
share, one rising and one falling, so the selfish equilibrium is just the
clamped crossing point. This script sweeps the exogenous mix and compares
the selfish outcome with the system optimum.
"""

import numpy as np

from weavelane import (
    FlowConfig,
    RampConfig,
    admissible,
    gamma,
    phi,
    solve_hdv,
    solve_social_optimum,
    ue_so_gap,
)

print("=== One configuration in detail ===")
cfg = RampConfig(FlowConfig(1 / 3, 1 / 3, 1 / 3))
eq = solve_hdv(cfg)
opt = solve_social_optimum(cfg)
print(f"crossing share Phi      : {phi(cfg):.6f}")
print(f"equilibrium              : x1s* = {eq.x1s_star:.6f} ({eq.case_label})")
print(f"lane costs at equilibrium: j1s = {eq.j1s:.6f}, j1b = {eq.j1b:.6f}")
print(f"social vertex Gamma      : {gamma(cfg):.6f}")
print(f"system optimum           : x1s = {opt.x1s_so:.6f}, delay = {opt.j_opt:.6f}")
j_ue, j_so, gap = ue_so_gap(cfg)
print(f"selfishness gap          : {j_ue:.6f} - {j_so:.6f} = {gap:.6f}")

print()
print("=== Sweeping the exiting share (entering share fixed at 1/6) ===")
print(f"{'n2_exit':>8} {'x1s*':>9} {'case':>13} {'gap':>10} {'admissible':>11}")
for n2_exit in np.linspace(0.0, 0.8, 9):
    flows = FlowConfig(1 / 6, float(n2_exit), 1 - 1 / 6 - float(n2_exit))
    cfg = RampConfig(flows)
    eq = solve_hdv(cfg)
    _, _, gap = ue_so_gap(cfg)
    print(
        f"{n2_exit:8.3f} {eq.x1s_star:9.5f} {str(eq.case_label):>13} "
        f"{gap:10.6f} {str(admissible(cfg)):>11}"
    )

print()
print("More exiting traffic raises the crossing pressure on Lane 1, pushing")
print("through vehicles toward the bypass lane, and the selfish outcome")
print("persistently undershoots the steadfast share the system would prefer.")
