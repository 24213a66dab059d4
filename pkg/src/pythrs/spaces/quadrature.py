"""Quadrature discretizations of L^3 on an interval.

An N-node rule with positive weights turns L^3([a, b]) into a pointwise
3-product space: <f,g,h> = sum_k w_k f(t_k) g(t_k) h(t_k) approximates
the integral of f g h.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy import special

from pythrs.errors import InvalidSpaceError
from pythrs.spaces.model import TriProductSpace, make_pointwise_space


SUPPORTED_RULES = ("midpoint", "trapezoid", "gauss-legendre")


@dataclass(frozen=True, eq=False)
class QuadratureSpace:
    """A discretized L^3 space together with its nodes.

    Attributes:
        space: The pointwise space carrying the quadrature weights.
        nodes: Abscissae t_k, one per coordinate.
        rule: Name of the quadrature rule.
        interval: Integration interval (a, b).
    """

    space: TriProductSpace
    nodes: NDArray[np.float64]
    rule: str
    interval: tuple[float, float]

    def sample(self, function: Callable[[NDArray[np.float64]], NDArray[np.float64]]) -> NDArray[np.float64]:
        """Evaluate ``function`` at the nodes (vectorized)."""
        values = np.asarray(function(self.nodes), dtype=np.float64)
        return np.broadcast_to(values, self.nodes.shape).copy()


def _nodes_and_weights(rule: str, count: int, a: float, b: float) -> tuple[NDArray, NDArray]:
    length = b - a
    if rule == "midpoint":
        h = length / count
        return a + h * (np.arange(count) + 0.5), np.full(count, h)
    if rule == "trapezoid":
        if count < 2:
            raise InvalidSpaceError("the trapezoid rule needs at least 2 nodes")
        nodes = np.linspace(a, b, count)
        h = length / (count - 1)
        weights = np.full(count, h)
        weights[[0, -1]] = h / 2
        return nodes, weights
    if rule == "gauss-legendre":
        roots, weights = special.roots_legendre(count)
        return (length * roots + (a + b)) / 2, weights * length / 2
    raise InvalidSpaceError(f"unknown rule {rule!r}; supported: {', '.join(SUPPORTED_RULES)}")


def make_quadrature_space(
    rule: str = "midpoint",
    nodes: int = 64,
    interval: tuple[float, float] = (0.0, 1.0),
) -> QuadratureSpace:
    """Discretize L^3(interval) with an N-node quadrature rule.

    Args:
        rule: ``midpoint``, ``trapezoid`` or ``gauss-legendre``.
        nodes: Number of nodes N.
        interval: Finite interval (a, b) with a < b.

    Returns:
        The QuadratureSpace; its weights are all positive.
    """
    a, b = (float(v) for v in interval)
    if nodes < 1:
        raise InvalidSpaceError("a quadrature rule needs at least one node")
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise InvalidSpaceError(f"invalid interval ({a}, {b})")
    abscissae, weights = _nodes_and_weights(rule, nodes, a, b)
    space = make_pointwise_space(weights, label=f"L3[{a:g},{b:g}]-{rule}-{nodes}")
    abscissae = np.array(abscissae, dtype=np.float64)
    abscissae.setflags(write=False)
    return QuadratureSpace(space=space, nodes=abscissae, rule=rule, interval=(a, b))
