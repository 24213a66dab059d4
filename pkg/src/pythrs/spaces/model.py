"""Weighted pointwise 3-product spaces and state vectors.

A space is a set of positive weights w_1..w_n. It carries the 3-product
<x,y,z> = sum_i w_i x_i y_i z_i and the norm ||x|| = (sum_i w_i |x_i|^3)^(1/3).
Unit weights give R^n and truncated l^3; quadrature weights give a
discretized L^3 (see ``pythrs.spaces.quadrature``).
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pythrs.errors import DimensionError, InvalidSpaceError, NearNullCubeError


# |<x,x,x>| below this is treated as the null-cube cone
NULL_CUBE_EPSILON = 1e-6


def _frozen(values: ArrayLike) -> NDArray[np.float64]:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TriProductSpace:
    """Finite-dimensional real space with a weighted pointwise 3-product.

    The constructor does not validate the sign of the weights; use
    :func:`make_pointwise_space` for checked construction.

    Attributes:
        weights: One weight per coordinate.
        label: Free-form name for reports.
    """

    weights: NDArray[np.float64]
    label: str = "pointwise"

    def __post_init__(self) -> None:
        weights = _frozen(self.weights)
        if weights.ndim != 1 or weights.size == 0:
            raise InvalidSpaceError("weights must be a non-empty 1-D sequence")
        object.__setattr__(self, "weights", weights)

    @property
    def dimension(self) -> int:
        return int(self.weights.size)

    def coords(self, vector: "VectorLike") -> NDArray[np.float64]:
        """Return the coordinates of ``vector`` as a float array.

        Raises:
            DimensionError: If the length differs from the dimension.
        """
        if isinstance(vector, StateVector):
            array = vector.coords
        else:
            array = np.asarray(vector, dtype=np.float64)
        if array.shape != (self.dimension,):
            raise DimensionError(
                f"expected a vector of length {self.dimension}, got shape {array.shape}"
            )
        return array

    def basis(self, index: int) -> NDArray[np.float64]:
        """Return the standard basis vector e_index (0-based)."""
        vector = np.zeros(self.dimension)
        vector[index] = 1.0
        return vector


@dataclass(frozen=True, eq=False)
class StateVector:
    """Coordinate vector with its cached self-pairing <x,x,x> and ||x||^3."""

    coords: NDArray[np.float64]
    cube_sum: float
    magnitude: float = 1.0

    def __len__(self) -> int:
        return int(self.coords.size)

    def is_normalized(self, tol: float = 1e-10) -> bool:
        return abs(self.cube_sum - 1.0) <= tol * max(1.0, self.magnitude)


VectorLike = Union[StateVector, Sequence[float], NDArray[np.float64]]


def make_pointwise_space(weights: ArrayLike, label: Optional[str] = None) -> TriProductSpace:
    """Build a checked pointwise space.

    Args:
        weights: Strictly positive, finite weights.
        label: Optional report name.

    Returns:
        The space with <x,y,z> = sum w_i x_i y_i z_i.

    Raises:
        InvalidSpaceError: On empty, non-positive or non-finite weights.
    """
    array = np.asarray(weights, dtype=np.float64)
    if array.ndim != 1 or array.size == 0:
        raise InvalidSpaceError("weights must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(array)):
        raise InvalidSpaceError("weights must be finite")
    if not np.all(array > 0):
        bad = int(np.flatnonzero(~(array > 0))[0])
        raise InvalidSpaceError(f"weight {bad} is {array[bad]!r}; weights must be > 0")
    return TriProductSpace(weights=array, label=label or f"pointwise-{array.size}")


def make_unit_space(dimension: int, label: Optional[str] = None) -> TriProductSpace:
    """R^n (equivalently l^3 truncated to n terms) with unit weights."""
    if dimension < 1:
        raise InvalidSpaceError("dimension must be positive")
    return make_pointwise_space(np.ones(dimension), label=label or f"unit-{dimension}")


def eval3(space: TriProductSpace, x: VectorLike, y: VectorLike, z: VectorLike) -> float:
    """Evaluate the 3-product <x,y,z>.

    The three factors of every coordinate are sorted before multiplying, so
    all argument permutations round identically and the result is
    bit-exactly symmetric.
    """
    factors = np.sort(np.stack([space.coords(x), space.coords(y), space.coords(z)]), axis=0)
    terms = space.weights * factors[0] * factors[1] * factors[2]
    return float(np.sum(terms))


def norm(space: TriProductSpace, x: VectorLike) -> float:
    """Weighted l^3 norm (sum w_i |x_i|^3)^(1/3)."""
    coords = space.coords(x)
    return float(np.cbrt(np.sum(space.weights * np.abs(coords) ** 3)))


def make_state(space: TriProductSpace, coords: VectorLike) -> StateVector:
    """Wrap coordinates as a StateVector, caching <x,x,x>."""
    array = _frozen(space.coords(coords))
    return StateVector(coords=array, cube_sum=eval3(space, array, array, array),
                       magnitude=float(np.sum(space.weights * np.abs(array) ** 3)))


def cube_normalize(
    space: TriProductSpace, x: VectorLike, epsilon: float = NULL_CUBE_EPSILON
) -> StateVector:
    """Rescale x so that <x,x,x> = 1.

    Divides by the signed real cube root of s = <x,x,x>, which also works
    for s < 0.

    Raises:
        NearNullCubeError: If |s| < epsilon.
    """
    coords = space.coords(x)
    cube_sum = eval3(space, coords, coords, coords)
    if not abs(cube_sum) >= epsilon:
        raise NearNullCubeError(cube_sum, epsilon)
    return make_state(space, coords / np.cbrt(cube_sum))


def draw_state(
    space: TriProductSpace,
    rng: np.random.Generator,
    epsilon: float = NULL_CUBE_EPSILON,
) -> StateVector:
    """Draw uniform(-1, 1) coordinates, resampling near-null draws, and normalize."""
    while True:
        coords = rng.uniform(-1.0, 1.0, size=space.dimension)
        try:
            return cube_normalize(space, coords, epsilon)
        except NearNullCubeError:
            continue
