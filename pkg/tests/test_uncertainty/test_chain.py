"""Tests for 3-means, 3-uncertainties and the inequality chain."""

from fractions import Fraction

import numpy as np
import pytest

from pythrs.errors import PreconditionError, RejectedInstanceError
from pythrs.operators.model import (
    dense_operator,
    diagonal_operator,
    identity_operator,
    scaled,
    shifted,
    zero_operator,
)
from pythrs.sharpness.generator import random_instance
from pythrs.spaces.model import cube_normalize, make_unit_space
from pythrs.uncertainty.chain import (
    ChainReport,
    Outcome,
    amgm_bound,
    centered_rhs,
    delta3,
    expanded_rhs,
    mean3,
    operator_order_invariance,
    verify_chain,
)


def exact_projection_oracle() -> dict[str, Fraction]:
    """Exact values for the n=3 projection instance by direct evaluation.

    With x = 3^(-1/3) (1,1,1) every x_i^3 is 1/3, and each quantity below
    only needs the cubes: Delta^3 = sum |x_i|^3 |alpha_i - a|^3.
    """
    cubes = [Fraction(1, 3)] * 3
    diagonals = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    means = [sum(u * d for u, d in zip(cubes, diag)) for diag in diagonals]
    delta_cubes = [
        sum(u * abs(d - m) ** 3 for u, d in zip(cubes, diag))
        for diag, m in zip(diagonals, means)
    ]
    a, b, c = means
    alpha, beta, gamma = diagonals
    expanded = sum(
        u * (alpha[i] * beta[i] * gamma[i] - a * beta[i] * gamma[i]
             - b * alpha[i] * gamma[i] - c * alpha[i] * beta[i])
        for i, u in enumerate(cubes)
    ) + 2 * a * b * c
    centered = sum(
        u * (alpha[i] - a) * (beta[i] - b) * (gamma[i] - c) for i, u in enumerate(cubes)
    )
    # all three deltas share the same cube, so lhs = that cube exactly
    assert delta_cubes[0] == delta_cubes[1] == delta_cubes[2]
    lhs = delta_cubes[0]
    return {
        "mean": means[0],
        "delta_cube": delta_cubes[0],
        "lhs": lhs,
        "amgm": lhs,
        "expanded": abs(expanded),
        "centered": abs(centered),
    }


@pytest.fixture
def projection_instance():
    space = make_unit_space(3)
    operators = [diagonal_operator(np.eye(3)[k]) for k in range(3)]
    x = cube_normalize(space, [1.0, 1.0, 1.0])
    return space, operators, x


class TestExactOracle:
    """The brute-force oracle itself."""

    def test_oracle_values(self) -> None:
        """lhs = 10/81 and both lower-bound forms are 2/27."""
        oracle = exact_projection_oracle()
        assert oracle["mean"] == Fraction(1, 3)
        assert oracle["lhs"] == Fraction(10, 81)
        assert oracle["expanded"] == Fraction(2, 27)
        assert oracle["centered"] == Fraction(2, 27)
        assert oracle["expanded"] / oracle["lhs"] == Fraction(3, 5)


class TestMeanAndDelta:
    """Tests for mean3 and delta3."""

    def test_identity(self, projection_instance) -> None:
        """The identity has mean 1 and uncertainty 0."""
        space, _, x = projection_instance
        assert mean3(space, identity_operator(3), x) == pytest.approx(1.0, abs=1e-15)
        assert delta3(space, identity_operator(3), x) == pytest.approx(0.0, abs=1e-15)

    def test_zero(self, projection_instance) -> None:
        """The zero operator has mean 0."""
        space, _, x = projection_instance
        assert mean3(space, zero_operator(3), x) == 0.0

    def test_projection(self, projection_instance) -> None:
        """diag(1,0,0) has mean 1/3 and uncertainty (10/81)^(1/3)."""
        space, operators, x = projection_instance
        assert mean3(space, operators[0], x) == pytest.approx(1 / 3, rel=1e-14)
        assert delta3(space, operators[0], x) == pytest.approx((10 / 81) ** (1 / 3), rel=1e-14)
        assert delta3(space, operators[0], x) == pytest.approx(0.49793, abs=1e-5)

    def test_eigenstate(self) -> None:
        """Basis vectors are eigenstates of multipliers."""
        space = make_unit_space(3)
        op = diagonal_operator([2.0, -1.0, 5.0])
        assert delta3(space, op, space.basis(1)) == 0.0
        assert mean3(space, op, space.basis(1)) == -1.0

    def test_not_normalized(self) -> None:
        """States must satisfy <x,x,x> = 1."""
        space = make_unit_space(2)
        with pytest.raises(PreconditionError):
            mean3(space, identity_operator(2), [1.0, 1.0])
        with pytest.raises(PreconditionError):
            delta3(space, identity_operator(2), [2.0, 0.0])


class TestLowerBounds:
    """Tests for the centered and expanded forms."""

    def test_projection_forms(self, projection_instance) -> None:
        """Both forms give 2/27 on the projection instance."""
        space, (A, B, C), x = projection_instance
        assert centered_rhs(space, A, B, C, x) == pytest.approx(2 / 27, rel=1e-12)
        assert expanded_rhs(space, A, B, C, x) == pytest.approx(2 / 27, rel=1e-12)

    def test_identity_third_factor(self, projection_instance) -> None:
        """C = identity makes the centered form vanish."""
        space, (A, B, _), x = projection_instance
        assert centered_rhs(space, A, B, identity_operator(3), x) == pytest.approx(0.0, abs=1e-15)

    def test_cancelling_terms(self) -> None:
        """The two-coordinate example cancels to 0."""
        space = make_unit_space(2)
        x = cube_normalize(space, [1.0, 1.0])
        A, B, C = diagonal_operator([1, 0]), diagonal_operator([0, 1]), diagonal_operator([1, -1])
        assert centered_rhs(space, A, B, C, x) == pytest.approx(0.0, abs=1e-15)
        assert expanded_rhs(space, A, B, C, x) == pytest.approx(0.0, abs=1e-15)

    def test_all_zero(self, projection_instance) -> None:
        """Zero operators give 0."""
        space, _, x = projection_instance
        zero = zero_operator(3)
        assert expanded_rhs(space, zero, zero, zero, x) == 0.0

    def test_all_identity(self, projection_instance) -> None:
        """|1 - 3 + 2| = 0 for A = B = C = I."""
        space, _, x = projection_instance
        one = identity_operator(3)
        assert expanded_rhs(space, one, one, one, x) == pytest.approx(0.0, abs=1e-14)


class TestAmgmBound:
    """Tests for amgm_bound."""

    def test_zero(self) -> None:
        """Zero uncertainties give 0."""
        assert amgm_bound(0.0, 0.0, 0.0) == 0.0

    def test_equal_arguments(self) -> None:
        """Equal uncertainties give equality with the product."""
        d = (10 / 81) ** (1 / 3)
        assert amgm_bound(d, d, d) == pytest.approx(10 / 81, rel=1e-14)

    def test_negative(self) -> None:
        """Negative uncertainties are rejected."""
        with pytest.raises(PreconditionError):
            amgm_bound(1.0, -0.1, 0.0)


class TestVerifyChain:
    """Tests for verify_chain."""

    def test_projection_instance_matches_oracle(self, projection_instance) -> None:
        """Every field matches the exact oracle."""
        space, (A, B, C), x = projection_instance
        oracle = exact_projection_oracle()
        report = verify_chain(space, A, B, C, x)
        assert report.lhs_product == pytest.approx(float(oracle["lhs"]), rel=1e-12)
        assert report.amgm_bound == pytest.approx(float(oracle["amgm"]), rel=1e-12)
        assert report.rhs_expanded == pytest.approx(float(oracle["expanded"]), rel=1e-12)
        assert report.rhs_centered == pytest.approx(float(oracle["centered"]), rel=1e-12)
        assert report.rhs_expanded / report.lhs_product == pytest.approx(0.6, rel=1e-12)
        assert report.chain_ok
        assert report.identity_ok
        assert report.outcome is Outcome.PASS
        assert report.margin == pytest.approx(10 / 81 - 2 / 27, rel=1e-12)

    def test_eigenstate_is_degenerate_tight(self) -> None:
        """x = e_1 makes both sides 0."""
        space = make_unit_space(3)
        ops = [diagonal_operator(d) for d in ([1, 2, 3], [-1, 0, 4], [2, 2, -2])]
        report = verify_chain(space, *ops, space.basis(0))
        assert report.delta_a == report.delta_b == report.delta_c == 0.0
        assert report.rhs_expanded == pytest.approx(0.0, abs=1e-15)
        assert report.chain_ok
        assert report.degenerate_tight
        assert report.outcome is Outcome.DEGENERATE_TIGHT

    def test_rejects_swap(self) -> None:
        """A non-self-adjoint operator is rejected with its witness."""
        space = make_unit_space(2)
        x = cube_normalize(space, [1.0, 2.0])
        swap = dense_operator([[0, 1], [1, 0]])
        with pytest.raises(RejectedInstanceError) as excinfo:
            verify_chain(space, swap, identity_operator(2), identity_operator(2), x)
        assert excinfo.value.name == "A"
        assert excinfo.value.witness.indices == (2, 1, 1)

    def test_report_serializes(self, projection_instance) -> None:
        """to_dict carries every field plus the outcome."""
        space, (A, B, C), x = projection_instance
        data = verify_chain(space, A, B, C, x).to_dict()
        for key in ("a", "b", "c", "delta_a", "lhs_product", "amgm_bound", "rhs_expanded",
                    "rhs_centered", "identity_deviation", "chain_ok", "margin"):
            assert key in data
        assert data["outcome"] == "pass"

    def test_failed_report_outcome(self) -> None:
        """A report with a broken inequality classifies as a failure."""
        report = ChainReport(
            a=0, b=0, c=0, delta_a=1, delta_b=1, delta_c=1, lhs_product=1, amgm_bound=1,
            rhs_expanded=2, rhs_centered=2, identity_deviation=0, chain_ok=False, margin=-1,
            scale=2, identity_ok=True, degenerate_tight=False,
        )
        assert not report.passed
        assert report.outcome is Outcome.FAIL

    def test_random_instances(self) -> None:
        """The chain and the identity hold on random instances."""
        for seed in range(300):
            instance = random_instance(2 + seed % 15, seed=seed)
            report = verify_chain(instance.space, *instance.operators, instance.x)
            assert report.passed
            assert report.identity_deviation <= 1e-10 * report.scale + 1e-12

    def test_random_weights(self) -> None:
        """Weighted spaces satisfy the chain too."""
        for seed in range(100):
            instance = random_instance(5, weight_mode="random", seed=seed)
            assert verify_chain(instance.space, *instance.operators, instance.x).passed


class TestInvariants:
    """Shift invariance and scale covariance."""

    def test_shift_and_scale(self) -> None:
        """A + mu I shifts the mean by mu; lambda A scales the uncertainty by |lambda|."""
        rng = np.random.default_rng(500)
        for seed in range(500):
            instance = random_instance(2 + seed % 7, seed=seed)
            space, x = instance.space, instance.x
            A, B, C = instance.operators
            mu, lam = rng.uniform(-3.0, 3.0, size=2)
            moved = shifted(A, mu)

            assert mean3(space, moved, x) == pytest.approx(mean3(space, A, x) + mu, rel=1e-9, abs=1e-9)
            assert delta3(space, moved, x) == pytest.approx(delta3(space, A, x), rel=1e-9, abs=1e-9)
            base = verify_chain(space, A, B, C, x)
            shifted_report = verify_chain(space, moved, B, C, x)
            assert shifted_report.rhs_centered == pytest.approx(base.rhs_centered, rel=1e-9, abs=1e-9 * base.scale)
            assert shifted_report.rhs_expanded == pytest.approx(base.rhs_expanded, rel=1e-9, abs=1e-9 * shifted_report.scale)

            assert delta3(space, scaled(A, lam), x) == pytest.approx(abs(lam) * delta3(space, A, x), rel=1e-9, abs=1e-12)
            assert centered_rhs(space, scaled(A, lam), B, C, x) == pytest.approx(
                abs(lam) * base.rhs_centered, rel=1e-9, abs=1e-9 * base.scale
            )


class TestOrderInvariance:
    """Tests for operator_order_invariance."""

    def test_projection_instance(self, projection_instance) -> None:
        """All seven values vanish for disjoint projections."""
        space, (A, B, C), x = projection_instance
        result = operator_order_invariance(space, A, B, C, x)
        assert len(result.values) == 7
        assert all(value == pytest.approx(0.0, abs=1e-15) for value in result.values.values())
        assert result.ok

    def test_equal_operators(self, projection_instance) -> None:
        """A = B = C = diag(1,2,3) gives 12 everywhere."""
        space, _, x = projection_instance
        op = diagonal_operator([1.0, 2.0, 3.0])
        result = operator_order_invariance(space, op, op, op, x)
        assert all(value == pytest.approx(12.0, rel=1e-14) for value in result.values.values())
        assert result.deviation <= 1e-12 * 12.0

    def test_random_instances(self) -> None:
        """The seven-way deviation stays within tolerance."""
        for seed in range(1000):
            instance = random_instance(2 + seed % 15, seed=seed)
            result = operator_order_invariance(instance.space, *instance.operators, instance.x)
            assert result.ok
            assert result.deviation <= 1e-10 * result.scale + 1e-12
