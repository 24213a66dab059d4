"""Linear operators on a pointwise 3-product space.

An operator is stored either as its diagonal (a multiplier) or as a dense
n x n matrix. Diagonal arithmetic stays diagonal.
"""

from dataclasses import dataclass
from numbers import Real
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pythrs.errors import DimensionError, PreconditionError
from pythrs.spaces.model import StateVector, VectorLike
from pythrs.spaces.quadrature import QuadratureSpace


def _frozen(values: ArrayLike) -> NDArray[np.float64]:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A real linear map, diagonal or dense.

    Exactly one of ``diagonal`` and ``dense`` is set.

    Attributes:
        diagonal: Multiplier entries a_1..a_n.
        dense: Row-major n x n matrix.
    """

    diagonal: Optional[NDArray[np.float64]] = None
    dense: Optional[NDArray[np.float64]] = None

    def __post_init__(self) -> None:
        if (self.diagonal is None) == (self.dense is None):
            raise PreconditionError("an operator is either diagonal or dense")
        if self.diagonal is not None:
            entries = _frozen(self.diagonal)
            if entries.ndim != 1 or entries.size == 0:
                raise DimensionError("diagonal entries must be a non-empty 1-D sequence")
            if not np.all(np.isfinite(entries)):
                raise PreconditionError("operator entries must be finite")
            object.__setattr__(self, "diagonal", entries)
        else:
            matrix = _frozen(self.dense)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.size == 0:
                raise DimensionError(f"dense operators must be square, got shape {matrix.shape}")
            if not np.all(np.isfinite(matrix)):
                raise PreconditionError("operator entries must be finite")
            object.__setattr__(self, "dense", matrix)

    @property
    def is_diagonal(self) -> bool:
        return self.diagonal is not None

    @property
    def dimension(self) -> int:
        if self.diagonal is not None:
            return int(self.diagonal.size)
        return int(self.dense.shape[0])

    def matrix(self) -> NDArray[np.float64]:
        """Dense matrix of the operator."""
        if self.diagonal is not None:
            return np.diag(self.diagonal)
        return np.array(self.dense)

    def max_abs_entry(self) -> float:
        values = self.diagonal if self.diagonal is not None else self.dense
        return float(np.max(np.abs(values)))

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return linear_combination(1.0, self, 1.0, other)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return linear_combination(1.0, self, -1.0, other)

    def __mul__(self, factor: Real) -> "LinearOperator":
        return scaled(self, float(factor))

    __rmul__ = __mul__

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return compose(self, other)


def diagonal_operator(entries: ArrayLike) -> LinearOperator:
    """Multiplier x -> (a_i x_i)."""
    return LinearOperator(diagonal=entries)


def dense_operator(matrix: ArrayLike) -> LinearOperator:
    return LinearOperator(dense=matrix)


def identity_operator(dimension: int) -> LinearOperator:
    return LinearOperator(diagonal=np.ones(dimension))


def zero_operator(dimension: int) -> LinearOperator:
    return LinearOperator(diagonal=np.zeros(dimension))


def sequence_multiplier(sequence: ArrayLike, dimension: int) -> LinearOperator:
    """Truncation of the l^3 multiplier by a bounded real sequence.

    Args:
        sequence: At least ``dimension`` leading terms a_1, a_2, ...
        dimension: Truncation length n.
    """
    terms = np.asarray(sequence, dtype=np.float64)
    if terms.ndim != 1 or terms.size < dimension:
        raise DimensionError(f"need at least {dimension} sequence terms, got {terms.size}")
    return diagonal_operator(terms[:dimension])


def multiplication_operator(
    phi: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    quadrature: QuadratureSpace,
) -> LinearOperator:
    """Multiplication by a bounded function, sampled at the quadrature nodes."""
    return diagonal_operator(quadrature.sample(phi))


def _check_same_dimension(first: LinearOperator, second: LinearOperator) -> None:
    if first.dimension != second.dimension:
        raise DimensionError(
            f"operator dimensions differ: {first.dimension} != {second.dimension}"
        )


def apply(op: LinearOperator, x: VectorLike) -> NDArray[np.float64]:
    """Apply ``op`` to a vector; componentwise for diagonal operators."""
    coords = x.coords if isinstance(x, StateVector) else np.asarray(x, dtype=np.float64)
    if coords.shape != (op.dimension,):
        raise DimensionError(
            f"operator of dimension {op.dimension} applied to shape {coords.shape}"
        )
    if op.diagonal is not None:
        return op.diagonal * coords
    return op.dense @ coords


def compose(op1: LinearOperator, op2: LinearOperator) -> LinearOperator:
    """Return x -> op1(op2(x))."""
    _check_same_dimension(op1, op2)
    if op1.diagonal is not None and op2.diagonal is not None:
        return LinearOperator(diagonal=op1.diagonal * op2.diagonal)
    return LinearOperator(dense=op1.matrix() @ op2.matrix())


def linear_combination(
    alpha: float, first: LinearOperator, beta: float, second: LinearOperator
) -> LinearOperator:
    """Return alpha * first + beta * second."""
    _check_same_dimension(first, second)
    if first.diagonal is not None and second.diagonal is not None:
        return LinearOperator(diagonal=alpha * first.diagonal + beta * second.diagonal)
    return LinearOperator(dense=alpha * first.matrix() + beta * second.matrix())


def scaled(op: LinearOperator, factor: float) -> LinearOperator:
    if op.diagonal is not None:
        return LinearOperator(diagonal=factor * op.diagonal)
    return LinearOperator(dense=factor * op.dense)


def shifted(op: LinearOperator, mu: float) -> LinearOperator:
    """Return op + mu * I."""
    return linear_combination(1.0, op, mu, identity_operator(op.dimension))
