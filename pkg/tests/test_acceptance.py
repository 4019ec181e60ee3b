"""Acceptance suite.

Each test prints one [PASS]/[FAIL] line (visible under ``pytest -s`` or in
the captured output of a failing run) and then asserts. Expected values are
recomputed here by the independent oracles before being compared against the
frozen goldens, so every tolerance below is pinned against a derivation that
does not share code with the solvers.
"""

from __future__ import annotations

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from weavelane.calibration import Observation, calibrate
from weavelane.model import (
    CostCoefficients,
    FlowConfig,
    RampConfig,
    affine_reduce,
    social_cost,
    social_quadratic,
)
from weavelane.social import gamma, solve_social_optimum
from weavelane.stackelberg import penetration_thresholds, solve_closed, solve_numeric
from weavelane.svo import (
    CAV,
    HDV,
    Population,
    VehicleType,
    chi,
    plateau_intervals,
    population_shares,
    solve_heterogeneous,
    sweep_heterogeneous,
    type_thresholds,
)
from weavelane.stackelberg import sweep_penetration
from weavelane.wardrop import phi, solve_hdv

from frozen import GAMMA_THIRDS, PHI_CORNER, PHI_THIRDS
from oracles import (
    bisect_equal_costs,
    grid_argmin_social,
    random_admissible_config,
    random_config,
)

THIRDS = RampConfig(FlowConfig(1 / 3, 1 / 3, 1 / 3))
CORNER = RampConfig(FlowConfig(0.0, 0.0, 1.0))


def report(number: int, name: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}")
    assert ok, f"criterion {number} failed: {name}"


def test_criterion_1_hdv_oracle_equivalence():
    rng = np.random.default_rng(101)
    configs = [random_config(rng) for _ in range(1000)]
    start = time.perf_counter()
    worst = max(
        abs(solve_hdv(cfg).x1s_star - bisect_equal_costs(cfg)) for cfg in configs
    )
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 1.0
    print(f"  max |closed - bisection| = {worst:.3e}, runtime = {elapsed:.3f} s")
    report(1, "HDV equilibrium oracle equivalence (1000 configs, < 1 s)", ok)


def test_criterion_2_derived_fixture_values():
    # Recompute with the stated oracles, then compare implementation, oracle,
    # and frozen goldens at 1e-5.
    phi_corner_oracle = bisect_equal_costs(CORNER)
    phi_thirds_oracle = bisect_equal_costs(THIRDS)
    gamma_thirds_oracle, _ = grid_argmin_social(THIRDS, step=1e-6)
    checks = [
        abs(phi(CORNER) - phi_corner_oracle),
        abs(phi(THIRDS) - phi_thirds_oracle),
        abs(gamma(THIRDS) - gamma_thirds_oracle),
        abs(phi(CORNER) - PHI_CORNER),
        abs(phi(THIRDS) - PHI_THIRDS),
        abs(gamma(THIRDS) - GAMMA_THIRDS),
    ]
    print(
        f"  phi(corner) = {phi(CORNER):.9f}, phi(thirds) = {phi(THIRDS):.9f}, "
        f"gamma(thirds) = {gamma(THIRDS):.9f}; max deviation {max(checks):.3e}"
    )
    report(2, "derived fixture values match their oracles at 1e-5", max(checks) < 1e-5)


def test_criterion_3_regime_structure():
    rng = np.random.default_rng(103)
    grid = [i * 1e-3 for i in range(1001)]
    ok = True
    for _ in range(50):
        cfg = random_admissible_config(rng)
        th = penetration_thresholds(cfg)
        ok &= abs(th.p1 - phi(cfg)) <= 1e-12 and abs(th.p2 - gamma(cfg)) <= 1e-12
        quad = social_quadratic(cfg)
        reference = quad.value(phi(cfg))
        optimum = solve_social_optimum(cfg).j_opt
        records = sweep_penetration(cfg, grid)
        js = [r.j_soc for r in records]
        for r in records:
            if r.p <= th.p1:
                ok &= abs(r.j_soc - reference) <= 1e-9
            elif r.p >= th.p2:
                ok &= abs(r.j_soc - optimum) <= 1e-9
        for (p_a, j_a), (p_b, j_b) in zip(
            zip(grid, js), list(zip(grid, js))[1:]
        ):
            if th.p1 < p_a and p_b < th.p2:
                ok &= (j_b - j_a) < -1e-12
        if not ok:
            break
    report(3, "three-regime sweep structure on 50 admissible configs", ok)


def test_criterion_4_bilevel_agreement():
    rng = np.random.default_rng(107)
    cases = [
        (random_admissible_config(rng), float(rng.uniform(0.0, 1.0)))
        for _ in range(200)
    ]
    start = time.perf_counter()
    worst_j = 0.0
    worst_res = 0.0
    for cfg, p in cases:
        closed = solve_closed(cfg, p)
        numeric = solve_numeric(cfg, p)
        worst_j = max(worst_j, abs(numeric.j_soc - closed.j_soc))
        costs = affine_reduce(cfg)
        from weavelane.model import eval_costs

        c = eval_costs(costs, numeric.x1s_total)
        diff = c.j1s - c.j1b
        h1 = numeric.x1s_hdv * max(0.0, diff)
        h2 = ((1.0 - p) - numeric.x1s_hdv) * max(0.0, -diff)
        worst_res = max(worst_res, h1, h2)
    elapsed = time.perf_counter() - start
    ok = worst_j < 1e-7 and worst_res < 1e-8 and elapsed < 5.0
    print(
        f"  max |j_numeric - j_closed| = {worst_j:.3e}, max residual = "
        f"{worst_res:.3e}, runtime = {elapsed:.3f} s"
    )
    report(4, "numeric and closed bilevel solvers agree (200 cases, < 5 s)", ok)


def _structural_suite(cfg: RampConfig, pop: Population) -> bool:
    grid = [i * 1e-3 for i in range(1001)]
    intervals = plateau_intervals(cfg, pop)
    ranked = type_thresholds(cfg, pop)
    by_index = {iv.k: iv for iv in intervals}
    ok = True
    for p in grid:
        eq = solve_heterogeneous(cfg, pop, p)
        interior = [a for a in eq.allocations if 1e-12 < a.x1s < a.share - 1e-12]
        ok &= len(interior) <= 1
        for iv in intervals:
            if iv.contains(p):
                ok &= abs(eq.x1s_star - iv.chi_k) <= 1e-10
        shares = [w for _, w in population_shares(pop, p)]
        for k, r in enumerate(ranked):
            upper = math.fsum(shares[s.index] for s in ranked[k + 1 :])
            member = 0.0 < r.chi - upper < shares[r.index]
            iv = by_index.get(r.index)
            inside = iv.contains(p) if iv is not None else False
            if member != inside:
                near_endpoint = iv is not None and (
                    abs(p - iv.p_lo) <= 1e-3 or abs(p - iv.p_hi) <= 1e-3
                )
                ok &= near_endpoint
    ordered = sorted(intervals, key=lambda iv: iv.p_lo)
    for a, b in zip(ordered, ordered[1:]):
        ok &= a.p_hi <= b.p_lo + 1e-12
        if a.p_hi == b.p_lo:
            ok &= not (a.hi_closed and b.lo_closed)
    return ok


def test_criterion_5_heterogeneous_structure():
    pop_two = Population(
        (VehicleType(HDV, 0.0, 1.0),), (VehicleType(CAV, math.pi / 2, 1.0),)
    )
    pop_four = Population(
        (VehicleType(HDV, 0.0, 1.0),),
        (
            VehicleType(CAV, math.pi / 5, 0.1),
            VehicleType(CAV, math.pi / 4, 0.2),
            VehicleType(CAV, math.pi / 3, 0.3),
            VehicleType(CAV, math.pi / 2, 0.4),
        ),
    )
    pop_mixed = Population(
        (VehicleType(HDV, -0.2, 0.4), VehicleType(HDV, 0.15, 0.6)),
        (VehicleType(CAV, 0.6, 0.5), VehicleType(CAV, 1.3, 0.5)),
    )
    ok = all(
        _structural_suite(THIRDS, pop) for pop in (pop_two, pop_four, pop_mixed)
    )
    report(5, "unique-mixed-type, pinned shares, and exact plateau intervals", ok)


def test_criterion_6_degenerate_population_equivalence():
    pop = Population(
        (VehicleType(HDV, 0.0, 1.0),), (VehicleType(CAV, math.pi / 2, 1.0),)
    )
    grid = [i * 1e-3 for i in range(1001)]
    hetero = sweep_heterogeneous(THIRDS, pop, grid)
    dedicated = sweep_penetration(THIRDS, grid)
    worst = max(
        max(abs(a.x1s_total - b.x1s_total), abs(a.j_soc - b.j_soc))
        for a, b in zip(hetero, dedicated)
    )
    print(f"  max pointwise deviation = {worst:.3e}")
    report(6, "degenerate SVO population reproduces the dedicated sweep", worst < 1e-9)


def test_criterion_7_svo_endpoint_identities():
    rng = np.random.default_rng(109)
    worst_ends = 0.0
    worst_marginal = 0.0
    h = 1e-6
    for _ in range(100):
        cfg = random_config(rng)
        aff = affine_reduce(cfg)
        worst_ends = max(worst_ends, abs(chi(aff, cfg, 0.0) - phi(cfg)))
        worst_ends = max(worst_ends, abs(chi(aff, cfg, math.pi / 2) - gamma(cfg)))
        from weavelane.svo import svo_transform

        typed = svo_transform(aff, cfg, math.pi / 2)
        x = float(rng.uniform(h, 1.0 - h))
        fd = (social_cost(cfg, x + h) - social_cost(cfg, x - h)) / (2.0 * h)
        marginal_gap = (typed.k1js * x + typed.b1js) - (
            typed.k1jb * (1.0 - x) + typed.b1jb
        )
        worst_marginal = max(worst_marginal, abs(marginal_gap - fd))
    ok = worst_ends < 1e-12 and worst_marginal < 1e-5
    print(
        f"  max endpoint deviation = {worst_ends:.3e}, "
        f"max marginal-vs-FD deviation = {worst_marginal:.3e}"
    )
    report(7, "chi(0) = Phi, chi(pi/2) = Gamma, marginal terms match", ok)


def test_criterion_8_calibration_self_consistency():
    truth = CostCoefficients()
    rng = np.random.default_rng(113)

    def draw(noise: float) -> list[Observation]:
        out = []
        while len(out) < 200:
            flows = FlowConfig(*rng.dirichlet((1.0, 1.0, 1.0)))
            x = solve_hdv(RampConfig(flows, truth)).x1s_star
            if noise:
                x = min(1.0, max(0.0, x + rng.uniform(-noise, noise)))
            if x > 0.0:
                out.append(Observation(flows, x))
        return out

    start = time.perf_counter()
    clean = calibrate(
        draw(0.0),
        initial=CostCoefficients(alpha=1.0, beta=1.0, omega=1.0, gamma=1.0, rho=1.0, delta=1.0),
        seed=3,
    )
    recovery = max(
        abs(getattr(clean.coeffs, f) - getattr(truth, f))
        for f in ("alpha", "beta", "gamma", "delta")
    )
    noisy = calibrate(draw(0.01), seed=3)
    elapsed = time.perf_counter() - start
    ok = (
        clean.objective < 1e-8
        and recovery < 2e-2
        and noisy.mper <= 3.0
        and elapsed < 30.0
    )
    print(
        f"  noiseless objective = {clean.objective:.3e}, worst recovery error = "
        f"{recovery:.3e}, noisy MPER = {noisy.mper:.3f}%, runtime = {elapsed:.1f} s"
    )
    report(8, "synthetic calibration recovery and noisy MPER", ok)


def test_criterion_9_staircase_structure():
    pop = Population(
        (VehicleType(HDV, 0.0, 1.0),),
        (
            VehicleType(CAV, math.pi / 5, 0.1),
            VehicleType(CAV, math.pi / 4, 0.2),
            VehicleType(CAV, math.pi / 3, 0.3),
            VehicleType(CAV, math.pi / 2, 0.4),
        ),
    )
    grid = [i * 1e-3 for i in range(1001)]
    records = sweep_heterogeneous(THIRDS, pop, grid)
    js = [r.j_soc for r in records]
    runs = []
    run_len = 1
    for a, b in zip(js, js[1:]):
        if abs(b - a) <= 1e-12:
            run_len += 1
        else:
            runs.append(run_len)
            run_len = 1
    runs.append(run_len)
    plateaus = sum(1 for length in runs if length >= 2)
    intervals = plateau_intervals(THIRDS, pop)
    drops_ok = True
    for prev, cur in zip(records, records[1:]):
        if cur.j_soc < prev.j_soc - 1e-12:
            switching = (
                prev.active_type == "none"
                or cur.active_type == "none"
                or prev.active_type != cur.active_type
            )
            drops_ok &= switching
    ok = plateaus >= 2 and plateaus == len(intervals) and drops_ok
    print(
        f"  plateaus found = {plateaus}, analytic intervals = {len(intervals)}, "
        f"drops only at switches = {drops_ok}"
    )
    report(9, "four-type staircase: plateau count and switch-only drops", ok)


def test_criterion_10_cli_determinism(tmp_path: Path):
    scenario = tmp_path / "thirds.yaml"
    scenario.write_text(
        "flows:\n"
        "  n0_enter: 0.3333333333333333\n"
        "  n2_exit: 0.3333333333333333\n"
        "  n2_s: 0.3333333333333333\n"
        "population:\n"
        "  - class: HDV\n    theta_radians: 0.0\n    weight: 1.0\n"
        "  - class: CAV\n    theta_degrees: 90.0\n    weight: 1.0\n"
        "sweep:\n  start: 0.0\n  stop: 1.0\n  step: 0.01\n",
        encoding="utf-8",
    )

    def run(*args: str) -> str:
        cp = subprocess.run(
            [sys.executable, "-m", "weavelane", *args],
            capture_output=True,
            text=True,
        )
        assert cp.returncode == 0, cp.stderr
        return cp.stdout

    ok = True
    ok &= run("solve", str(scenario), "--format", "csv") == run(
        "solve", str(scenario), "--format", "csv"
    )
    ok &= run("plateaus", str(scenario), "--format", "csv") == run(
        "plateaus", str(scenario), "--format", "csv"
    )
    for mode in ("stackelberg", "svo"):
        first = tmp_path / f"{mode}_a.csv"
        second = tmp_path / f"{mode}_b.csv"
        run("sweep", str(scenario), "--mode", mode, "--out-csv", str(first))
        run("sweep", str(scenario), "--mode", mode, "--out-csv", str(second))
        ok &= first.read_bytes() == second.read_bytes()
    report(10, "CLI outputs byte-identical across consecutive runs", ok)
