"""Walkthrough: fitting cost coefficients to observed lane-choice data.

Observations pair an exogenous flow mix with the steadfast share traffic
settled on. The fit minimizes squared complementarity residuals, which are
zero exactly when an observation is consistent with the selfish equilibrium
conditions. The demo builds a synthetic dataset from known coefficients,
perturbs the observations, recovers the coefficients, and scores the fit
with the mean prediction error rate (MPER).
"""

from pathlib import Path

import numpy as np

from weavelane import (
    CostCoefficients,
    FlowConfig,
    Observation,
    RampConfig,
    calibrate,
    count_satisfied,
    load_dataset,
    mper,
    save_dataset,
    solve_hdv,
)

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

truth = CostCoefficients(alpha=1.45, beta=0.9, gamma=2.1, delta=2.6)
rng = np.random.default_rng(2024)

observations = []
while len(observations) < 150:
    flows = FlowConfig(*rng.dirichlet((1.0, 1.0, 1.0)))
    share = solve_hdv(RampConfig(flows, truth)).x1s_star
    share = min(1.0, max(0.0, share + rng.uniform(-0.01, 0.01)))
    if share > 0.0:
        observations.append(Observation(flows, share))

dataset_path = OUT / "synthetic_observations.csv"
save_dataset(dataset_path, observations)
dataset = load_dataset(dataset_path)
print(f"wrote and reloaded {len(dataset)} observations from {dataset_path.name}")

result = calibrate(dataset, seed=0)
print()
print("=== Fit ===")
print(f"{'field':<7} {'truth':>8} {'fitted':>9}")
for field in ("alpha", "beta", "omega", "gamma", "rho", "delta"):
    print(
        f"{field:<7} {getattr(truth, field):8.4f} "
        f"{getattr(result.coeffs, field):9.4f}"
    )
print(f"objective : {result.objective:.3e}")
print(f"mper      : {result.mper:.3f}%")
exact = count_satisfied(dataset, result.coeffs)
loose = count_satisfied(dataset, result.coeffs, tol=1e-3)
print(f"satisfied : {exact}/{len(dataset)} exactly, {loose}/{len(dataset)} at tol 1e-3")
print(f"iterations: {result.iterations}, converged: {result.converged}")

print()
print("=== Unit-cost scale is pinned, not estimated ===")
scaled = result.coeffs.with_scaled_unit_costs(2.0)
print(
    "doubling all unit costs leaves every predicted share unchanged "
    f"(MPER {mper(dataset, scaled):.3f}% vs {mper(dataset, result.coeffs):.3f}%), "
    "so the fit keeps the four unit costs fixed and estimates only the weights."
)
