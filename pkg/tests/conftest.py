from __future__ import annotations

import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from weavelane.model import CostCoefficients, FlowConfig, RampConfig
from weavelane.svo import CAV, HDV, Population, VehicleType


@pytest.fixture
def cfg_thirds() -> RampConfig:
    """Calibrated coefficients with the symmetric exogenous mix."""
    return RampConfig(FlowConfig(1 / 3, 1 / 3, 1 / 3))


@pytest.fixture
def cfg_corner() -> RampConfig:
    """Calibrated coefficients with all exogenous flow on Lane-2 through."""
    return RampConfig(FlowConfig(0.0, 0.0, 1.0))


@pytest.fixture
def pop_two_type() -> Population:
    """Selfish HDVs plus fully altruistic CAVs (the dedicated-control twin)."""
    return Population(
        (VehicleType(HDV, 0.0, 1.0),),
        (VehicleType(CAV, math.pi / 2, 1.0),),
    )


@pytest.fixture
def pop_four_cav() -> Population:
    """Four partially altruistic CAV types over a selfish HDV base."""
    return Population(
        (VehicleType(HDV, 0.0, 1.0),),
        (
            VehicleType(CAV, math.pi / 5, 0.1),
            VehicleType(CAV, math.pi / 4, 0.2),
            VehicleType(CAV, math.pi / 3, 0.3),
            VehicleType(CAV, math.pi / 2, 0.4),
        ),
    )


def coeffs_zero() -> CostCoefficients:
    return CostCoefficients(0, 0, 0, 0, 0, 0, 0, 0, 0, 0)
