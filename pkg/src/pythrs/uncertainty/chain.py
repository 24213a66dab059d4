"""3-uncertainties and the three-operator uncertainty chain.

For 3-self-adjoint A, B, C and <x,x,x> = 1, with a = <Ax,x,x> (likewise
b, c) and Delta(A) = ||Ax - a x||:

    (1/27)(Delta(A) + Delta(B) + Delta(C))^3
        >= Delta(A) Delta(B) Delta(C)
        >= |<(ABC - a BC - b AC - c AB)x, x, x> + 2abc|

The right-hand side equals |<Ax - ax, Bx - bx, Cx - cx>|; both forms are
computed by separate code paths and compared.
"""

import itertools
import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from pythrs.configuration import Tolerances
from pythrs.errors import PreconditionError, RejectedInstanceError
from pythrs.operators.model import LinearOperator, apply, compose
from pythrs.operators.self_adjoint import check_3_self_adjoint
from pythrs.spaces.model import TriProductSpace, VectorLike, eval3, norm

logger = logging.getLogger(__name__)


NORMALIZATION_TOLERANCE = 1e-10
IDENTITY_TOLERANCES = Tolerances(absolute=1e-12, relative=1e-10)


class Outcome(Enum):
    """Classification of one verified instance."""
    PASS = "pass"
    DEGENERATE_TIGHT = "degenerate-tight"
    FAIL = "fail"


@dataclass
class ChainReport:
    """Every quantity of the inequality chain for one instance.

    Attributes:
        a, b, c: 3-means.
        delta_a, delta_b, delta_c: 3-uncertainties.
        lhs_product: delta_a * delta_b * delta_c.
        amgm_bound: (1/27)(delta_a + delta_b + delta_c)^3.
        rhs_expanded: Lower bound of the chain, through operator compositions.
        rhs_centered: |<Ax-ax, Bx-bx, Cx-cx>|.
        identity_deviation: |rhs_expanded - rhs_centered|.
        chain_ok: Both inequalities hold within tolerance.
        margin: lhs_product - rhs_expanded.
        scale: Magnitude sum of the expanded-form terms.
        identity_ok: identity_deviation within the identity tolerance.
        degenerate_tight: Both sides below the absolute floor.
    """

    a: float
    b: float
    c: float
    delta_a: float
    delta_b: float
    delta_c: float
    lhs_product: float
    amgm_bound: float
    rhs_expanded: float
    rhs_centered: float
    identity_deviation: float
    chain_ok: bool
    margin: float
    scale: float
    identity_ok: bool
    degenerate_tight: bool

    @property
    def passed(self) -> bool:
        return self.chain_ok and self.identity_ok

    @property
    def outcome(self) -> Outcome:
        if not self.passed:
            return Outcome.FAIL
        if self.degenerate_tight:
            return Outcome.DEGENERATE_TIGHT
        return Outcome.PASS

    def to_dict(self) -> dict:
        result = asdict(self)
        result["outcome"] = self.outcome.value
        return result


@dataclass
class OrderInvariance:
    """Values of <PQRx,x,x> over the six orderings plus <Ax,Bx,Cx>."""

    values: dict[str, float]
    deviation: float
    scale: float
    ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def normalized_coords(space: TriProductSpace, x: VectorLike, tol: float) -> NDArray[np.float64]:
    """Coordinates of x after checking |<x,x,x> - 1| <= tol * max(1, ||x||^3)."""
    coords = space.coords(x)
    cube_sum = eval3(space, coords, coords, coords)
    if not abs(cube_sum - 1.0) <= tol * max(1.0, norm(space, coords) ** 3):
        raise PreconditionError(f"state is not cube-normalized: <x,x,x> = {cube_sum!r}")
    return coords


def _mean(space: TriProductSpace, op: LinearOperator, coords: NDArray) -> tuple[NDArray, float]:
    image = apply(op, coords)
    return image, eval3(space, image, coords, coords)


def mean3(
    space: TriProductSpace, op: LinearOperator, x: VectorLike, tol: float = NORMALIZATION_TOLERANCE
) -> float:
    """3-mean <Ax,x,x> of a cube-normalized state."""
    coords = normalized_coords(space, x, tol)
    return _mean(space, op, coords)[1]


def delta3(
    space: TriProductSpace, op: LinearOperator, x: VectorLike, tol: float = NORMALIZATION_TOLERANCE
) -> float:
    """3-uncertainty ||Ax - <Ax,x,x> x||."""
    coords = normalized_coords(space, x, tol)
    image, mean = _mean(space, op, coords)
    return norm(space, image - mean * coords)


def centered_rhs(
    space: TriProductSpace,
    A: LinearOperator,
    B: LinearOperator,
    C: LinearOperator,
    x: VectorLike,
    tol: float = NORMALIZATION_TOLERANCE,
) -> float:
    """|<Ax - ax, Bx - bx, Cx - cx>|."""
    coords = normalized_coords(space, x, tol)
    centered = []
    for op in (A, B, C):
        image, mean = _mean(space, op, coords)
        centered.append(image - mean * coords)
    return abs(eval3(space, *centered))


def expanded_form(
    space: TriProductSpace,
    A: LinearOperator,
    B: LinearOperator,
    C: LinearOperator,
    coords: NDArray,
) -> tuple[float, float]:
    """Return the expanded lower bound and the magnitude sum of its terms."""
    a = _mean(space, A, coords)[1]
    b = _mean(space, B, coords)[1]
    c = _mean(space, C, coords)[1]
    abc_x = apply(compose(A, compose(B, C)), coords)
    bc_x = apply(compose(B, C), coords)
    ac_x = apply(compose(A, C), coords)
    ab_x = apply(compose(A, B), coords)
    combined = abc_x - a * bc_x - b * ac_x - c * ab_x
    value = eval3(space, combined, coords, coords) + 2.0 * a * b * c
    magnitude = np.abs(abc_x) + abs(a) * np.abs(bc_x) + abs(b) * np.abs(ac_x) + abs(c) * np.abs(ab_x)
    scale = float(np.sum(np.abs(space.weights) * coords**2 * magnitude)) + 2.0 * abs(a * b * c)
    return abs(value), scale


def expanded_rhs(
    space: TriProductSpace,
    A: LinearOperator,
    B: LinearOperator,
    C: LinearOperator,
    x: VectorLike,
    tol: float = NORMALIZATION_TOLERANCE,
) -> float:
    """|<(ABC - aBC - bAC - cAB)x, x, x> + 2abc| via explicit compositions."""
    coords = normalized_coords(space, x, tol)
    return expanded_form(space, A, B, C, coords)[0]


def amgm_bound(delta_a: float, delta_b: float, delta_c: float) -> float:
    """(1/27)(delta_a + delta_b + delta_c)^3."""
    if min(delta_a, delta_b, delta_c) < 0:
        raise PreconditionError("uncertainties must be non-negative")
    return (delta_a + delta_b + delta_c) ** 3 / 27.0


def require_self_adjoint(space: TriProductSpace, **operators: LinearOperator) -> None:
    """Raise RejectedInstanceError for the first operator failing the check."""
    for name, op in operators.items():
        ok, witness = check_3_self_adjoint(space, op)
        if not ok:
            raise RejectedInstanceError(name, witness)


def verify_chain(
    space: TriProductSpace,
    A: LinearOperator,
    B: LinearOperator,
    C: LinearOperator,
    x: VectorLike,
    tol: Optional[Tolerances] = None,
    identity_tol: Tolerances = IDENTITY_TOLERANCES,
    normalization_tol: float = NORMALIZATION_TOLERANCE,
) -> ChainReport:
    """Compute and check the full inequality chain for one instance.

    Args:
        space: The 3-product space.
        A, B, C: 3-self-adjoint operators.
        x: Cube-normalized state.
        tol: Tolerances for the two inequalities.
        identity_tol: Tolerances for the expanded/centered identity.
        normalization_tol: Allowed |<x,x,x> - 1|.

    Returns:
        The ChainReport.

    Raises:
        RejectedInstanceError: If an operator is not 3-self-adjoint.
    """
    tol = tol or Tolerances()
    require_self_adjoint(space, A=A, B=B, C=C)
    coords = normalized_coords(space, x, normalization_tol)

    means = []
    deltas = []
    centered = []
    for op in (A, B, C):
        image, mean = _mean(space, op, coords)
        means.append(mean)
        centered.append(image - mean * coords)
        deltas.append(norm(space, centered[-1]))

    lhs = deltas[0] * deltas[1] * deltas[2]
    upper = amgm_bound(*deltas)
    rhs_centered = abs(eval3(space, *centered))
    rhs_expanded, scale = expanded_form(space, A, B, C, coords)

    identity_deviation = abs(rhs_expanded - rhs_centered)
    identity_ok = identity_deviation <= identity_tol.bound(scale)
    upper_ok = upper >= lhs - tol.bound(upper)
    lower_ok = lhs >= rhs_expanded - tol.bound(max(lhs, scale))
    report = ChainReport(
        a=means[0],
        b=means[1],
        c=means[2],
        delta_a=deltas[0],
        delta_b=deltas[1],
        delta_c=deltas[2],
        lhs_product=lhs,
        amgm_bound=upper,
        rhs_expanded=rhs_expanded,
        rhs_centered=rhs_centered,
        identity_deviation=identity_deviation,
        chain_ok=upper_ok and lower_ok,
        margin=lhs - rhs_expanded,
        scale=scale,
        identity_ok=identity_ok,
        degenerate_tight=lhs < tol.absolute and rhs_expanded < tol.absolute,
    )
    if not report.passed:
        logger.warning("inequality chain failed: %s", report.to_dict())
    return report


def operator_order_invariance(
    space: TriProductSpace,
    A: LinearOperator,
    B: LinearOperator,
    C: LinearOperator,
    x: VectorLike,
    tol: Tolerances = IDENTITY_TOLERANCES,
    normalization_tol: float = NORMALIZATION_TOLERANCE,
) -> OrderInvariance:
    """Compare <PQRx,x,x> over all orderings of {A,B,C} with <Ax,Bx,Cx>.

    Returns:
        The seven values, their maximum pairwise deviation and whether it
        is within ``tol`` scaled by the largest sum of absolute terms.
    """
    coords = normalized_coords(space, x, normalization_tol)
    named = {"A": A, "B": B, "C": C}
    values: dict[str, float] = {}
    magnitudes: list[float] = []
    for order in itertools.permutations("ABC"):
        first, second, third = (named[key] for key in order)
        image = apply(compose(first, compose(second, third)), coords)
        values["".join(order)] = eval3(space, image, coords, coords)
        magnitudes.append(eval3(space, np.abs(image), np.abs(coords), np.abs(coords)))
    images = [apply(op, coords) for op in (A, B, C)]
    values["<Ax,Bx,Cx>"] = eval3(space, *images)
    magnitudes.append(eval3(space, *(np.abs(image) for image in images)))
    deviation = max(values.values()) - min(values.values())
    scale = max(magnitudes)
    ok = deviation <= tol.bound(scale)
    if not ok:
        logger.warning("operator order changes the 3-product by %.3e", deviation)
    return OrderInvariance(values=values, deviation=deviation, scale=scale, ok=ok)
