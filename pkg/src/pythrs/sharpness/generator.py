"""Seeded random instances of the three-operator chain."""

from dataclasses import dataclass

import numpy as np

from pythrs.errors import PreconditionError
from pythrs.operators.model import LinearOperator, diagonal_operator
from pythrs.spaces.model import (
    NULL_CUBE_EPSILON,
    StateVector,
    TriProductSpace,
    draw_state,
    make_pointwise_space,
)


WEIGHT_MODES = ("unit", "random")


@dataclass(frozen=True, eq=False)
class Instance:
    """A space, three diagonal operators and a cube-normalized state."""

    space: TriProductSpace
    A: LinearOperator
    B: LinearOperator
    C: LinearOperator
    x: StateVector
    seed: int

    @property
    def operators(self) -> tuple[LinearOperator, LinearOperator, LinearOperator]:
        return (self.A, self.B, self.C)


def random_instance(
    dimension: int,
    weight_mode: str = "unit",
    bounds: tuple[float, float] = (-2.0, 2.0),
    seed: int = 0,
    weight_range: tuple[float, float] = (0.5, 2.0),
    null_cube: float = NULL_CUBE_EPSILON,
) -> Instance:
    """Draw a reproducible instance.

    Weights are 1 or uniform on ``weight_range``; diagonal entries are
    uniform on ``bounds``; the state has uniform(-1, 1) coordinates,
    redrawn while |<x,x,x>| < ``null_cube``, then cube-normalized.

    Args:
        dimension: n >= 2.
        weight_mode: ``unit`` or ``random``.
        bounds: (low, high) for the diagonal entries, low <= high.
        seed: Seed; identical seeds give bit-identical instances.
        weight_range: (low, high) for random weights.
        null_cube: Resampling threshold.
    """
    if dimension < 2:
        raise PreconditionError("random instances need dimension >= 2")
    if weight_mode not in WEIGHT_MODES:
        raise PreconditionError(f"unknown weight mode {weight_mode!r}")
    low, high = bounds
    if low > high:
        raise PreconditionError(f"invalid bounds ({low}, {high})")

    rng = np.random.default_rng(seed)
    if weight_mode == "unit":
        weights = np.ones(dimension)
        label = f"unit-{dimension}"
    else:
        weights = rng.uniform(*weight_range, size=dimension)
        label = f"random-weights-{dimension}"
    space = make_pointwise_space(weights, label=label)
    a, b, c = (diagonal_operator(row) for row in rng.uniform(low, high, size=(3, dimension)))
    x = draw_state(space, rng, null_cube)
    return Instance(space=space, A=a, B=b, C=c, x=x, seed=seed)
