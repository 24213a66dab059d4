"""3-product spaces.

Weighted pointwise realizations of R^n, truncated l^3 and quadrature
discretized L^3, together with sampled checks of the 3-product axioms.
"""

from pythrs.spaces.model import (
    NULL_CUBE_EPSILON,
    StateVector,
    TriProductSpace,
    cube_normalize,
    draw_state,
    eval3,
    make_pointwise_space,
    make_state,
    make_unit_space,
    norm,
)
from pythrs.spaces.quadrature import QuadratureSpace, make_quadrature_space
from pythrs.spaces.axioms import AxiomReport, check_axioms

__all__ = [
    "NULL_CUBE_EPSILON",
    "StateVector",
    "TriProductSpace",
    "cube_normalize",
    "draw_state",
    "eval3",
    "make_pointwise_space",
    "make_state",
    "make_unit_space",
    "norm",
    "QuadratureSpace",
    "make_quadrature_space",
    "AxiomReport",
    "check_axioms",
]
