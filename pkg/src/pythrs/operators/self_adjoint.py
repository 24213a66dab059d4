"""3-self-adjointness of operators on pointwise spaces.

A is 3-self-adjoint when <Ax,y,z> = <x,Ay,z> = <x,y,Az>. On basis
triples of a weighted pointwise space the three values are

    <A e_i, e_j, e_k> = w_j A_ji d_jk
    <e_i, A e_j, e_k> = w_i A_ij d_ik
    <e_i, e_j, A e_k> = w_i A_ik d_ij

so an off-diagonal entry A_pq forces a discrepancy w_p |A_pq| at the
triple (q, p, p). Only diagonal operators pass.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from pythrs.errors import DimensionError, PreconditionError
from pythrs.operators.model import LinearOperator, apply
from pythrs.spaces.model import TriProductSpace, eval3

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelfAdjointnessWitness:
    """A basis triple where the three slot values disagree.

    Attributes:
        indices: 1-based (i, j, k).
        values: (<Ae_i,e_j,e_k>, <e_i,Ae_j,e_k>, <e_i,e_j,Ae_k>).
        discrepancy: Largest pairwise difference of ``values``.
    """

    indices: tuple[int, int, int]
    values: tuple[float, float, float]
    discrepancy: float

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "values": list(self.values),
            "discrepancy": self.discrepancy,
        }


class SelfAdjointnessResult(NamedTuple):
    ok: bool
    witness: Optional[SelfAdjointnessWitness]


def default_tolerance(space: TriProductSpace, op: LinearOperator) -> float:
    """1e-10 * (1 + max|A_ij| * max w_i)."""
    return 1e-10 * (1.0 + op.max_abs_entry() * float(np.max(np.abs(space.weights))))


def _slot_values(space: TriProductSpace, op: LinearOperator, i: int, j: int, k: int) -> tuple[float, float, float]:
    ei, ej, ek = space.basis(i), space.basis(j), space.basis(k)
    return (
        eval3(space, apply(op, ei), ej, ek),
        eval3(space, ei, apply(op, ej), ek),
        eval3(space, ei, ej, apply(op, ek)),
    )


def _spread(values: tuple[float, float, float]) -> float:
    return max(values) - min(values)


def _closed_form(space: TriProductSpace, op: LinearOperator, tol: float) -> SelfAdjointnessResult:
    if op.is_diagonal:
        return SelfAdjointnessResult(True, None)
    matrix = op.matrix()
    discrepancy = np.abs(matrix) * np.abs(space.weights)[:, None]
    np.fill_diagonal(discrepancy, 0.0)
    p, q = np.unravel_index(int(np.argmax(discrepancy)), discrepancy.shape)
    worst = float(discrepancy[p, q])
    if worst <= tol:
        return SelfAdjointnessResult(True, None)
    value = float(space.weights[p] * matrix[p, q])
    witness = SelfAdjointnessWitness(
        indices=(int(q) + 1, int(p) + 1, int(p) + 1),
        values=(value, 0.0, 0.0),
        discrepancy=abs(value),
    )
    return SelfAdjointnessResult(False, witness)


def _tie_key(i: int, j: int, k: int) -> tuple[int, int, int]:
    # (p, q, form): ties go to the closed-form witness (q, p, p), smallest (p, q) first
    if j == k:
        return j, i, 0
    if i == k:
        return i, j, 1
    if i == j:
        return i, k, 2
    return i, j, 3


def _exhaustive(space: TriProductSpace, op: LinearOperator, tol: float) -> SelfAdjointnessResult:
    worst: Optional[SelfAdjointnessWitness] = None
    worst_key = None
    n = space.dimension
    for i, j, k in itertools.product(range(n), repeat=3):
        values = _slot_values(space, op, i, j, k)
        spread = _spread(values)
        if spread <= tol:
            continue
        key = _tie_key(i, j, k)
        if worst is None or spread > worst.discrepancy or (spread == worst.discrepancy and key < worst_key):
            worst = SelfAdjointnessWitness((i + 1, j + 1, k + 1), values, spread)
            worst_key = key
    return SelfAdjointnessResult(worst is None, worst)


def check_3_self_adjoint(
    space: TriProductSpace,
    op: LinearOperator,
    tol: Optional[float] = None,
    method: str = "closed-form",
) -> SelfAdjointnessResult:
    """Decide whether ``op`` is 3-self-adjoint on ``space``.

    Every basis triple is covered. The ``closed-form`` method costs O(n^2);
    ``exhaustive`` evaluates all n^3 triples through the 3-product.

    Args:
        space: The 3-product space.
        op: Operator to check.
        tol: Witness threshold; defaults to :func:`default_tolerance`.
        method: ``closed-form`` or ``exhaustive``.

    Returns:
        (ok, witness); the witness is the worst triple when ok is False.
    """
    if op.dimension != space.dimension:
        raise DimensionError(
            f"operator of dimension {op.dimension} on a space of dimension {space.dimension}"
        )
    tol = default_tolerance(space, op) if tol is None else tol
    if method == "closed-form":
        result = _closed_form(space, op, tol)
    elif method == "exhaustive":
        result = _exhaustive(space, op, tol)
    else:
        raise PreconditionError(f"unknown method {method!r}")
    if not result.ok:
        logger.debug("not 3-self-adjoint: %s", result.witness)
    return result
