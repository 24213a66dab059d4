"""3-uncertainties and the inequality chain.

Provides the 3-mean and 3-uncertainty of an operator, both forms of the
lower bound, the chain verifier and its seeded batch sweep, and the
classical two-operator reference suite on Euclidean R^n.
"""

from pythrs.uncertainty.chain import (
    ChainReport,
    OrderInvariance,
    Outcome,
    amgm_bound,
    centered_rhs,
    delta3,
    expanded_rhs,
    mean3,
    operator_order_invariance,
    verify_chain,
)
from pythrs.uncertainty.classical import (
    ClassicalDelta,
    ClassicalReport,
    classical_delta,
    classical_verify,
    random_symmetric_pair,
)
from pythrs.uncertainty.sweep import SweepRecord, SweepTracker, instance_seeds, run_sweep

__all__ = [
    "ChainReport",
    "OrderInvariance",
    "Outcome",
    "amgm_bound",
    "centered_rhs",
    "delta3",
    "expanded_rhs",
    "mean3",
    "operator_order_invariance",
    "verify_chain",
    "ClassicalDelta",
    "ClassicalReport",
    "classical_delta",
    "classical_verify",
    "random_symmetric_pair",
    "SweepRecord",
    "SweepTracker",
    "instance_seeds",
    "run_sweep",
]
