"""Exception types raised by PyTHRS.

Input problems raise; failed mathematical checks are reported as data.
"""

from typing import Any, Optional


class ThrsError(Exception):
    """Base class for all PyTHRS errors."""


class InvalidSpaceError(ThrsError, ValueError):
    """Weights do not define a 3-product space."""


class DimensionError(ThrsError, ValueError):
    """Vector or operator lengths do not match the space."""


class NearNullCubeError(ThrsError, ValueError):
    """The self-pairing <x,x,x> is too close to zero to normalize."""

    def __init__(self, cube_sum: float, epsilon: float) -> None:
        super().__init__(
            f"|<x,x,x>| = {abs(cube_sum):.3e} is below {epsilon:.1e}; resample the state"
        )
        self.cube_sum = cube_sum
        self.epsilon = epsilon


class PreconditionError(ThrsError, ValueError):
    """An argument violates an operation's precondition."""


class RejectedInstanceError(ThrsError):
    """An operator of the instance is not 3-self-adjoint."""

    def __init__(self, name: str, witness: Any) -> None:
        super().__init__(f"operator {name} is not 3-self-adjoint: {witness}")
        self.name = name
        self.witness = witness


class UndefinedResultError(ThrsError):
    """Every optimizer restart stayed on degenerate states."""


class InstanceFileError(ThrsError, ValueError):
    """An instance file could not be parsed.

    Attributes:
        location: JSON ``line N, column M`` or a dotted field path.
    """

    def __init__(self, message: str, location: Optional[str] = None) -> None:
        text = f"{location}: {message}" if location else message
        super().__init__(text)
        self.location = location
