"""The sharpness ratio rhs_expanded / lhs_product.

The ratio is undefined (``None`` here, ``-inf`` in the batched kernel)
when some 3-uncertainty is below ``delta_floor`` or the product of
uncertainties is below ``lhs_floor`` times the magnitude of the expanded
form, i.e. where the expanded form is not resolved in double precision.
"""

from typing import Optional

import numpy as np
from numpy.typing import NDArray

from pythrs.operators.model import LinearOperator
from pythrs.spaces.model import NULL_CUBE_EPSILON, TriProductSpace, VectorLike
from pythrs.uncertainty.chain import (
    NORMALIZATION_TOLERANCE,
    expanded_form,
    normalized_coords,
    delta3,
)


DELTA_FLOOR = 1e-9
LHS_FLOOR = 1e-9


def sharpness_ratio(
    space: TriProductSpace,
    A: LinearOperator,
    B: LinearOperator,
    C: LinearOperator,
    x: VectorLike,
    delta_floor: float = DELTA_FLOOR,
    lhs_floor: float = LHS_FLOOR,
) -> Optional[float]:
    """Ratio of the expanded lower bound to the uncertainty product.

    Returns:
        The ratio, or None when undefined.
    """
    coords = normalized_coords(space, x, NORMALIZATION_TOLERANCE)
    deltas = [delta3(space, op, coords) for op in (A, B, C)]
    lhs = deltas[0] * deltas[1] * deltas[2]
    rhs, scale = expanded_form(space, A, B, C, coords)
    if min(deltas) < delta_floor or not lhs > 0 or lhs < lhs_floor * scale:
        return None
    return rhs / lhs


def batch_ratio(
    weights: NDArray[np.float64],
    alpha: NDArray[np.float64],
    beta: NDArray[np.float64],
    gamma: NDArray[np.float64],
    states: NDArray[np.float64],
    delta_floor: float = DELTA_FLOOR,
    lhs_floor: float = LHS_FLOOR,
    null_cube: float = NULL_CUBE_EPSILON,
) -> NDArray[np.float64]:
    """Sharpness ratio of many diagonal instances at once.

    States are ambient (not normalized); each row is cube-normalized first.
    Diagonal operators compose entrywise, so ABC is alpha*beta*gamma and so on.

    Args:
        weights: Space weights, shape (n,).
        alpha, beta, gamma: Diagonals, shape (n,) or (k, n).
        states: Ambient states, shape (k, n).
        delta_floor: Smallest admissible 3-uncertainty.
        lhs_floor: Smallest admissible lhs relative to the expanded-form scale.
        null_cube: Rows with |<x,x,x>| below this are undefined.

    Returns:
        Ratios of shape (k,), ``-inf`` where undefined.
    """
    states = np.atleast_2d(states)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        cube_sums = (states**3) @ weights
        defined = np.abs(cube_sums) >= null_cube
        x = states / np.cbrt(np.where(defined, cube_sums, 1.0))[:, None]
        signed = weights * x**3
        absolute = weights * np.abs(x) ** 3

        a = np.sum(signed * alpha, axis=-1)
        b = np.sum(signed * beta, axis=-1)
        c = np.sum(signed * gamma, axis=-1)
        delta_a = np.cbrt(np.sum(absolute * np.abs(alpha - a[:, None]) ** 3, axis=-1))
        delta_b = np.cbrt(np.sum(absolute * np.abs(beta - b[:, None]) ** 3, axis=-1))
        delta_c = np.cbrt(np.sum(absolute * np.abs(gamma - c[:, None]) ** 3, axis=-1))
        lhs = delta_a * delta_b * delta_c

        abc = alpha * beta * gamma
        bc, ac, ab = beta * gamma, alpha * gamma, alpha * beta
        combined = abc - a[:, None] * bc - b[:, None] * ac - c[:, None] * ab
        rhs = np.abs(np.sum(signed * combined, axis=-1) + 2 * a * b * c)
        magnitude = (
            np.abs(abc)
            + np.abs(a)[:, None] * np.abs(bc)
            + np.abs(b)[:, None] * np.abs(ac)
            + np.abs(c)[:, None] * np.abs(ab)
        )
        scale = np.sum(absolute * magnitude, axis=-1) + 2 * np.abs(a * b * c)

        valid = (
            defined
            & (np.minimum(np.minimum(delta_a, delta_b), delta_c) >= delta_floor)
            & (lhs > 0)
            & (lhs >= lhs_floor * scale)
            & np.isfinite(rhs)
        )
        return np.where(valid, rhs / lhs, -np.inf)
