"""Tests for quadrature discretizations of L^3."""

import numpy as np
import pytest

from pythrs.errors import InvalidSpaceError
from pythrs.spaces.model import eval3
from pythrs.spaces.quadrature import make_quadrature_space


class TestMakeQuadratureSpace:
    """Tests for make_quadrature_space."""

    @pytest.mark.parametrize("rule", ["midpoint", "trapezoid", "gauss-legendre"])
    def test_weights_sum_to_length(self, rule: str) -> None:
        """The weights integrate 1 exactly."""
        quadrature = make_quadrature_space(rule, 12, (0.0, 2.0))
        assert float(np.sum(quadrature.space.weights)) == pytest.approx(2.0, rel=1e-13)
        assert np.all(quadrature.space.weights > 0)

    def test_nodes_inside_interval(self) -> None:
        """Midpoint nodes lie strictly inside the interval."""
        quadrature = make_quadrature_space("midpoint", 4)
        np.testing.assert_allclose(quadrature.nodes, [0.125, 0.375, 0.625, 0.875])

    def test_trilinear_integral(self) -> None:
        """<f,g,h> approximates the integral of f g h."""
        quadrature = make_quadrature_space("gauss-legendre", 4)
        t = quadrature.sample(lambda nodes: nodes)
        # integral of t^3 on [0, 1]; exact for 4 Gauss nodes
        assert eval3(quadrature.space, t, t, t) == pytest.approx(0.25, rel=1e-13)

    def test_midpoint_convergence(self) -> None:
        """The midpoint rule converges to the integral."""
        quadrature = make_quadrature_space("midpoint", 400)
        f = quadrature.sample(np.sin)
        g = quadrature.sample(lambda nodes: 1.0)
        exact = 1.0 - np.cos(1.0)
        assert eval3(quadrature.space, f, g, g) == pytest.approx(exact, abs=1e-5)

    def test_sample_broadcasts_constants(self) -> None:
        """Constant functions are sampled at every node."""
        quadrature = make_quadrature_space("trapezoid", 5)
        np.testing.assert_array_equal(quadrature.sample(lambda nodes: 2.0), np.full(5, 2.0))

    def test_label(self) -> None:
        """The label names interval, rule and node count."""
        quadrature = make_quadrature_space("gauss-legendre", 16)
        assert quadrature.space.label == "L3[0,1]-gauss-legendre-16"

    def test_unknown_rule(self) -> None:
        """Unknown rules raise."""
        with pytest.raises(InvalidSpaceError):
            make_quadrature_space("simpson", 8)

    def test_invalid_interval(self) -> None:
        """The interval must be finite with a < b."""
        with pytest.raises(InvalidSpaceError):
            make_quadrature_space("midpoint", 8, (1.0, 1.0))

    def test_trapezoid_needs_two_nodes(self) -> None:
        """A one-node trapezoid rule is rejected."""
        with pytest.raises(InvalidSpaceError):
            make_quadrature_space("trapezoid", 1)
