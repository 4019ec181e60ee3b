"""Lane-choice equilibria and CAV control at highway weaving ramps.

The package computes the selfish lane-choice equilibrium of human-driven
vehicles on a weaving ramp, the socially optimal allocation, bilevel control
of dedicated altruistic CAVs with its penetration thresholds, heterogeneous
equilibria under social-value-orientation weighted costs with plateau
analysis, and coefficient calibration against observed lane-choice data.
"""

from .calibration import (
    CalibrationResult,
    Observation,
    calibrate,
    count_satisfied,
    equilibrium_residual,
    load_dataset,
    mper,
    normalize_flows,
    residual_objective,
    save_dataset,
)
from .errors import (
    AngleOutOfRange,
    BoundsInfeasible,
    DatasetFormatError,
    DegenerateCosts,
    DistinctnessViolated,
    DomainError,
    EmptyDataset,
    MissingSection,
    NegativeFlow,
    NotAdmissible,
    ScenarioError,
    SimplexViolation,
    ToleranceNotMet,
    WeavelaneError,
    ZeroDenominator,
    ZeroObservedShare,
)
from .model import (
    AffineCoefficients,
    BehaviorCosts,
    CostCoefficients,
    FlowConfig,
    FlowDistribution,
    RampConfig,
    SocialQuadratic,
    affine_reduce,
    eval_costs,
    social_cost,
    social_quadratic,
    validate_flow_config,
)
from .scenario import (
    Scenario,
    SweepGrid,
    emit_scenario,
    load_scenario,
    parse_scenario_text,
    write_scenario,
)
from .social import SocialOptimum, admissible, gamma, solve_social_optimum, ue_so_gap
from .stackelberg import (
    Regime,
    StackelbergSolution,
    SweepRecord,
    Thresholds,
    cav_cost,
    hdv_best_response,
    penetration_thresholds,
    solve_closed,
    solve_numeric,
    sweep_penetration,
)
from .svo import (
    CAV,
    HDV,
    HeteroEquilibrium,
    PlateauInterval,
    Population,
    TypeAllocation,
    TypedAffine,
    VehicleType,
    check_heterogeneous,
    chi,
    plateau_free,
    plateau_intervals,
    population_shares,
    solve_heterogeneous,
    svo_transform,
    sweep_heterogeneous,
    type_thresholds,
)
from .wardrop import (
    EquilibriumCase,
    HdvEquilibrium,
    check_wardrop,
    phi,
    solve_hdv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
