"""Classical two-operator uncertainty relations on Euclidean R^n.

Reference suite for real symmetric A, B and a unit vector h:

    Robertson:   (D_A^2 + D_B^2)/2 >= (D_A + D_B)^2/4 >= D_A D_B >= |<[A,B]h,h>|/2
    Schroedinger: D_A D_B >= |<Ah,Bh> - <Ah,h><Bh,h>|
                  = sqrt(|<[A,B]h,h>|^2 + |<{A,B}h,h> - 2<Ah,h><Bh,h>|^2) / 2

For real symmetric matrices <[A,B]h,h> vanishes identically, so the
Schroedinger bound only sees the anticommutator term.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from pythrs.errors import DimensionError, PreconditionError
from pythrs.operators.model import LinearOperator

logger = logging.getLogger(__name__)


COMMUTATOR_NOTE = (
    "<[A,B]h,h> = 0 for every real symmetric pair; the commutator term "
    "cannot contribute to either bound"
)

MatrixLike = Union[LinearOperator, ArrayLike]


class ClassicalDelta(NamedTuple):
    """Both forms of the classical uncertainty."""
    norm_form: float
    root_form: float


@dataclass
class ClassicalReport:
    """Every quantity of the Robertson and Schroedinger relations.

    ``hr_terms`` holds the four members of the Robertson chain from the
    largest to the commutator bound.
    """

    delta_a: float
    delta_b: float
    mean_a: float
    mean_b: float
    hr_terms: list[float]
    hr_links_ok: list[bool]
    hrs_rhs: float
    hrs_identity_rhs: float
    hrs_ok: bool
    identity_deviation: float
    identity_ok: bool
    hrs_dominates_hr: bool
    delta_forms_agree: bool
    commutator_expectation: float
    commutator_vanishes: bool
    margins: dict[str, float] = field(default_factory=dict)
    note: str = COMMUTATOR_NOTE

    @property
    def passed(self) -> bool:
        return (
            all(self.hr_links_ok)
            and self.hrs_ok
            and self.identity_ok
            and self.hrs_dominates_hr
            and self.delta_forms_agree
        )

    def to_dict(self) -> dict:
        result = asdict(self)
        result["passed"] = self.passed
        return result


def _symmetric_matrix(op: MatrixLike, tol: float) -> NDArray[np.float64]:
    matrix = op.matrix() if isinstance(op, LinearOperator) else np.asarray(op, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {matrix.shape}")
    scale = 1.0 + float(np.max(np.abs(matrix), initial=0.0))
    if not linalg.issymmetric(matrix, atol=tol * scale):
        raise PreconditionError("classical operators must be symmetric")
    return matrix


def _unit_vector(h: ArrayLike, dimension: int, tol: float) -> NDArray[np.float64]:
    vector = np.asarray(h, dtype=np.float64)
    if vector.shape != (dimension,):
        raise DimensionError(f"expected a vector of length {dimension}, got shape {vector.shape}")
    if abs(float(np.linalg.norm(vector)) - 1.0) > tol:
        raise PreconditionError("h must be a Euclidean unit vector")
    return vector


def _delta(matrix: NDArray, h: NDArray, tol: float) -> tuple[ClassicalDelta, NDArray, float]:
    image = matrix @ h
    mean = float(image @ h)
    norm_form = float(np.linalg.norm(image - mean * h))
    radicand = float(image @ image) - mean**2
    if radicand < 0 and radicand >= -tol:
        radicand = 0.0
    return ClassicalDelta(norm_form, float(np.sqrt(radicand))), image, mean


def classical_delta(A: MatrixLike, h: ArrayLike, tol: float = 1e-10) -> ClassicalDelta:
    """Uncertainty ||Ah - <Ah,h>h|| and its root form sqrt(||Ah||^2 - <Ah,h>^2).

    Raises:
        PreconditionError: If A is not symmetric or h is not a unit vector.
    """
    matrix = _symmetric_matrix(A, tol)
    vector = _unit_vector(h, matrix.shape[0], tol)
    return _delta(matrix, vector, tol)[0]


def classical_verify(A: MatrixLike, B: MatrixLike, h: ArrayLike, tol: float = 1e-10) -> ClassicalReport:
    """Check the Robertson chain and the Schroedinger bound for one pair.

    Args:
        A, B: Real symmetric matrices (or dense operators) of equal size.
        h: Euclidean unit vector.
        tol: Absolute tolerance, scaled by 1 + the magnitudes compared.

    Returns:
        The ClassicalReport; failures are data.
    """
    matrix_a = _symmetric_matrix(A, tol)
    matrix_b = _symmetric_matrix(B, tol)
    if matrix_a.shape != matrix_b.shape:
        raise DimensionError(f"operator shapes differ: {matrix_a.shape} != {matrix_b.shape}")
    vector = _unit_vector(h, matrix_a.shape[0], tol)

    delta_a, image_a, mean_a = _delta(matrix_a, vector, tol)
    delta_b, image_b, mean_b = _delta(matrix_b, vector, tol)
    da, db = delta_a.norm_form, delta_b.norm_form

    commutator = matrix_a @ matrix_b - matrix_b @ matrix_a
    anticommutator = matrix_a @ matrix_b + matrix_b @ matrix_a
    commutator_expectation = float(vector @ commutator @ vector)
    anticommutator_expectation = float(vector @ anticommutator @ vector)

    hr_terms = [
        (da**2 + db**2) / 2,
        (da + db) ** 2 / 4,
        da * db,
        abs(commutator_expectation) / 2,
    ]

    def within(larger: float, smaller: float) -> bool:
        return larger >= smaller - tol * (1.0 + abs(larger) + abs(smaller))

    hr_links_ok = [within(hr_terms[k], hr_terms[k + 1]) for k in range(3)]
    hrs_rhs = abs(float(image_a @ image_b) - mean_a * mean_b)
    hrs_identity_rhs = 0.5 * float(np.hypot(
        commutator_expectation, anticommutator_expectation - 2 * mean_a * mean_b
    ))
    identity_deviation = abs(hrs_rhs - hrs_identity_rhs)
    scale = 1.0 + float(np.linalg.norm(matrix_a, 2) * np.linalg.norm(matrix_b, 2))

    report = ClassicalReport(
        delta_a=da,
        delta_b=db,
        mean_a=mean_a,
        mean_b=mean_b,
        hr_terms=hr_terms,
        hr_links_ok=hr_links_ok,
        hrs_rhs=hrs_rhs,
        hrs_identity_rhs=hrs_identity_rhs,
        hrs_ok=within(hr_terms[2], hrs_rhs),
        identity_deviation=identity_deviation,
        identity_ok=identity_deviation <= tol * scale,
        hrs_dominates_hr=within(hrs_rhs, hr_terms[3]),
        delta_forms_agree=(
            abs(delta_a.norm_form - delta_a.root_form) <= math.sqrt(tol) * (1.0 + da)
            and abs(delta_b.norm_form - delta_b.root_form) <= math.sqrt(tol) * (1.0 + db)
        ),
        commutator_expectation=commutator_expectation,
        commutator_vanishes=abs(commutator_expectation) <= tol * scale,
        margins={
            "robertson": hr_terms[2] - hr_terms[3],
            "schroedinger": hr_terms[2] - hrs_rhs,
        },
    )
    if not report.passed:
        logger.warning("classical relations failed: %s", report.to_dict())
    return report


def random_symmetric_pair(
    dimension: int, rng: np.random.Generator
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Draw symmetric A, B (GOE-like) and a uniform unit vector h."""
    a, b = rng.standard_normal((2, dimension, dimension))
    h = rng.standard_normal(dimension)
    return (a + a.T) / 2, (b + b.T) / 2, h / np.linalg.norm(h)
