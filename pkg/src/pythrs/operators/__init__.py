"""Linear operators, composition and 3-self-adjointness."""

from pythrs.operators.model import (
    LinearOperator,
    apply,
    compose,
    dense_operator,
    diagonal_operator,
    identity_operator,
    linear_combination,
    multiplication_operator,
    scaled,
    sequence_multiplier,
    shifted,
    zero_operator,
)
from pythrs.operators.self_adjoint import (
    SelfAdjointnessResult,
    SelfAdjointnessWitness,
    check_3_self_adjoint,
    default_tolerance,
)

__all__ = [
    "LinearOperator",
    "apply",
    "compose",
    "dense_operator",
    "diagonal_operator",
    "identity_operator",
    "linear_combination",
    "multiplication_operator",
    "scaled",
    "sequence_multiplier",
    "shifted",
    "zero_operator",
    "SelfAdjointnessResult",
    "SelfAdjointnessWitness",
    "check_3_self_adjoint",
    "default_tolerance",
]
