"""Sampled verification of the four 3-product axioms.

(i)   symmetry under all six argument permutations (bit-exact)
(ii)  homogeneity  <a x, y, z> = a <x, y, z>
(iii) additivity   <x + w, y, z> = <x, y, z> + <w, y, z>
(iv)  Hoelder      |<x, y, z>| <= ||x|| ||y|| ||z||
"""

import itertools
import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from pythrs.configuration import Tolerances
from pythrs.spaces.model import TriProductSpace, eval3, norm

logger = logging.getLogger(__name__)


@dataclass
class AxiomReport:
    """Outcome of :func:`check_axioms`.

    Deviations are the worst absolute discrepancies seen; ``holder_margin``
    is the smallest ||x|| ||y|| ||z|| - |<x,y,z>| (negative means violation).
    """

    label: str
    dimension: int
    samples: int
    seed: int
    symmetry_ok: bool = True
    homogeneity_ok: bool = True
    additivity_ok: bool = True
    holder_ok: bool = True
    symmetry_deviation: float = 0.0
    homogeneity_deviation: float = 0.0
    additivity_deviation: float = 0.0
    holder_margin: float = float("inf")
    holder_witness: Optional[list[list[float]]] = None

    @property
    def vacuous(self) -> bool:
        return self.samples == 0

    @property
    def all_ok(self) -> bool:
        return self.symmetry_ok and self.homogeneity_ok and self.additivity_ok and self.holder_ok

    def to_dict(self) -> dict:
        result = asdict(self)
        result["vacuous"] = self.vacuous
        result["all_ok"] = self.all_ok
        return result


def _weighted_abs(space: TriProductSpace, *vectors: np.ndarray) -> float:
    product = np.ones(space.dimension)
    for vector in vectors:
        product = product * np.abs(vector)
    return float(np.sum(np.abs(space.weights) * product))


def check_axioms(
    space: TriProductSpace,
    sample_budget: int = 1000,
    seed: int = 0,
    tol: Optional[Tolerances] = None,
) -> AxiomReport:
    """Check the 3-product axioms on seeded random triples.

    The first min(n, budget) samples are the basis triples (e_k, e_k, e_k);
    the rest are standard normal. A budget of 0 passes vacuously.

    Args:
        space: Space to check.
        sample_budget: Number of sampled triples.
        seed: Seed of the sampler.
        tol: Tolerances for axioms (ii)-(iv).

    Returns:
        An AxiomReport; failures are recorded, never raised.
    """
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    n = space.dimension
    report = AxiomReport(label=space.label, dimension=n, samples=sample_budget, seed=seed)
    worst_holder_excess = 0.0

    for k in range(sample_budget):
        if k < n:
            x = y = z = space.basis(k)
            w = rng.standard_normal(n)
        else:
            x, y, z, w = rng.standard_normal((4, n))
        alpha = rng.uniform(-3.0, 3.0)
        value = eval3(space, x, y, z)

        permuted = [eval3(space, *p) for p in itertools.permutations((x, y, z))]
        spread = max(permuted) - min(permuted)
        report.symmetry_deviation = max(report.symmetry_deviation, spread)
        if spread != 0.0:
            report.symmetry_ok = False

        deviation = abs(eval3(space, alpha * x, y, z) - alpha * value)
        report.homogeneity_deviation = max(report.homogeneity_deviation, deviation)
        if deviation > tol.bound(abs(alpha) * _weighted_abs(space, x, y, z)):
            report.homogeneity_ok = False

        deviation = abs(eval3(space, x + w, y, z) - (value + eval3(space, w, y, z)))
        report.additivity_deviation = max(report.additivity_deviation, deviation)
        if deviation > tol.bound(_weighted_abs(space, np.abs(x) + np.abs(w), y, z)):
            report.additivity_ok = False

        bound = norm(space, x) * norm(space, y) * norm(space, z)
        margin = bound - abs(value)
        report.holder_margin = min(report.holder_margin, margin)
        excess = -margin - tol.bound(abs(bound))
        if excess > 0:
            report.holder_ok = False
            if excess > worst_holder_excess:
                worst_holder_excess = excess
                report.holder_witness = [x.tolist(), y.tolist(), z.tolist()]

    if sample_budget == 0:
        report.holder_margin = 0.0
    if not report.all_ok:
        logger.warning("axiom check failed on %s: %s", space.label, report.to_dict())
    else:
        logger.debug("axioms hold on %s (%d samples)", space.label, sample_budget)
    return report
