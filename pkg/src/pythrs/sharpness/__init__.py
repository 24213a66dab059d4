"""Search for the sharpest instances of the three-operator chain."""

from pythrs.sharpness.objective import DELTA_FLOOR, LHS_FLOOR, batch_ratio, sharpness_ratio
from pythrs.sharpness.generator import Instance, random_instance
from pythrs.sharpness.search import (
    MultiStartAscent,
    OptimizerConfig,
    SharpnessResult,
    optimize_joint,
    optimize_state,
)

__all__ = [
    "DELTA_FLOOR",
    "LHS_FLOOR",
    "batch_ratio",
    "sharpness_ratio",
    "Instance",
    "random_instance",
    "MultiStartAscent",
    "OptimizerConfig",
    "SharpnessResult",
    "optimize_joint",
    "optimize_state",
]
