"""Tests for the sampled 3-product axiom checks."""

import pytest

from pythrs.spaces.axioms import check_axioms
from pythrs.spaces.model import TriProductSpace, make_pointwise_space, make_unit_space
from pythrs.spaces.quadrature import make_quadrature_space


class TestCheckAxioms:
    """Tests for check_axioms."""

    @pytest.mark.parametrize("dimension", range(1, 17))
    def test_unit_spaces(self, dimension: int) -> None:
        """Unit-weight spaces satisfy all four axioms."""
        report = check_axioms(make_unit_space(dimension), sample_budget=1000, seed=0)
        assert report.all_ok
        assert report.symmetry_deviation == 0.0
        assert report.holder_margin >= -1e-12

    @pytest.mark.parametrize("rule,nodes", [
        ("midpoint", 8),
        ("midpoint", 64),
        ("trapezoid", 17),
        ("gauss-legendre", 5),
        ("gauss-legendre", 32),
    ])
    def test_quadrature_spaces(self, rule: str, nodes: int) -> None:
        """Quadrature spaces satisfy all four axioms."""
        report = check_axioms(make_quadrature_space(rule, nodes).space, sample_budget=1000)
        assert report.all_ok
        assert report.symmetry_deviation == 0.0

    def test_random_weights(self) -> None:
        """Weighted spaces pass too."""
        space = make_pointwise_space([0.5, 1.7, 2.0, 0.9])
        assert check_axioms(space, sample_budget=500, seed=4).all_ok

    def test_holder_equality_on_basis(self) -> None:
        """Basis triples meet the Hoelder bound with equality."""
        report = check_axioms(make_unit_space(3), sample_budget=3)
        assert report.holder_margin == pytest.approx(0.0, abs=1e-15)

    def test_zero_budget_is_vacuous(self) -> None:
        """A budget of 0 passes vacuously."""
        report = check_axioms(make_unit_space(3), sample_budget=0)
        assert report.vacuous
        assert report.all_ok
        assert report.holder_margin == 0.0

    def test_negative_weight_fails_holder(self) -> None:
        """A negative weight breaks the Hoelder axiom only."""
        space = TriProductSpace(weights=[1.0, -1.0], label="signed")
        report = check_axioms(space, sample_budget=200, seed=1)
        assert not report.holder_ok
        assert report.holder_witness is not None
        assert report.symmetry_ok
        assert report.homogeneity_ok
        assert report.additivity_ok
        assert not report.all_ok

    def test_deterministic(self) -> None:
        """The same seed gives the same report."""
        space = make_unit_space(6)
        assert check_axioms(space, 300, seed=5).to_dict() == check_axioms(space, 300, seed=5).to_dict()

    def test_report_fields(self) -> None:
        """The report names the space and the sample count."""
        report = check_axioms(make_unit_space(2), sample_budget=10, seed=3)
        data = report.to_dict()
        assert data["label"] == "unit-2"
        assert data["samples"] == 10
        assert data["all_ok"] is True
