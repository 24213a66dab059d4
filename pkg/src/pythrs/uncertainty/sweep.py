"""Seeded batch verification of the inequality chain.

Instances get deterministic child seeds of one root seed, so a sweep run
with worker threads produces the same records as a sequential one.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from pythrs.configuration import Tolerances
from pythrs.errors import PreconditionError
from pythrs.sharpness.generator import random_instance
from pythrs.spaces.model import NULL_CUBE_EPSILON
from pythrs.uncertainty.chain import (
    IDENTITY_TOLERANCES,
    ChainReport,
    Outcome,
    operator_order_invariance,
    verify_chain,
)

logger = logging.getLogger(__name__)


@dataclass
class SweepRecord:
    """Result of one swept instance."""

    index: int
    seed: int
    dimension: int
    report: ChainReport
    order_deviation: float
    order_ok: bool

    @property
    def outcome(self) -> Outcome:
        if not self.order_ok:
            return Outcome.FAIL
        return self.report.outcome

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "seed": self.seed,
            "dimension": self.dimension,
            "outcome": self.outcome.value,
            "order_deviation": self.order_deviation,
            "order_ok": self.order_ok,
            "chain": self.report.to_dict(),
        }


class SweepTracker:
    """Collects sweep records keyed by instance index.

    Adding the same index twice replaces the earlier record, so the
    aggregate depends only on the set of indices, not on arrival order.

    Example:
        tracker = SweepTracker()
        tracker.add(record)
        tracker.counts()  # {"pass": 1, "degenerate-tight": 0, "fail": 0}
    """

    def __init__(self) -> None:
        self._records: dict[int, SweepRecord] = {}

    def __len__(self) -> int:
        return len(self._records)

    def add(self, record: SweepRecord) -> None:
        self._records[record.index] = record

    def records(self) -> list[SweepRecord]:
        """Records sorted by instance index."""
        return [self._records[key] for key in sorted(self._records)]

    def counts(self) -> dict[str, int]:
        counts = {outcome.value: 0 for outcome in Outcome}
        for record in self._records.values():
            counts[record.outcome.value] += 1
        return counts

    def worst_margin(self) -> Optional[float]:
        """Smallest lhs_product - rhs_expanded, or None when empty."""
        if not self._records:
            return None
        return min(record.report.margin for record in self.records())

    def worst_identity_deviation(self) -> Optional[float]:
        if not self._records:
            return None
        return max(record.report.identity_deviation for record in self.records())

    def worst_relative_identity_deviation(self) -> Optional[float]:
        """Largest identity deviation divided by the expanded-form scale."""
        if not self._records:
            return None
        return max(
            record.report.identity_deviation / record.report.scale if record.report.scale > 0
            else record.report.identity_deviation
            for record in self.records()
        )

    def failures(self) -> list[SweepRecord]:
        return [record for record in self.records() if record.outcome is Outcome.FAIL]

    def to_frame(self) -> pd.DataFrame:
        """Summary table with one row per instance."""
        rows = [
            {
                "instance": record.index,
                "dimension": record.dimension,
                "margin": record.report.margin,
                "degenerate_tight": record.report.degenerate_tight,
                "outcome": record.outcome.value,
            }
            for record in self.records()
        ]
        return pd.DataFrame(rows, columns=["instance", "dimension", "margin",
                                           "degenerate_tight", "outcome"])

    def write_csv(self, path: Union[str, Path]) -> None:
        self.to_frame().to_csv(path, index=False)

    def write_jsonl(self, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for record in self.records():
                handle.write(json.dumps(record.to_dict(), sort_keys=True, allow_nan=False,
                                        default=float) + "\n")

    def clear(self) -> None:
        self._records.clear()


def instance_seeds(seed: int, count: int) -> list[int]:
    """Deterministic per-instance seeds derived from one root seed."""
    if count < 0:
        raise PreconditionError(f"count must be non-negative, got {count}")
    if seed < 0:
        raise PreconditionError(f"seed must be non-negative, got {seed}")
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def run_sweep(
    dimensions: Sequence[int],
    count: int,
    seed: int = 0,
    tol: Optional[Tolerances] = None,
    weight_mode: str = "unit",
    bounds: tuple[float, float] = (-2.0, 2.0),
    weight_range: tuple[float, float] = (0.5, 2.0),
    null_cube: float = NULL_CUBE_EPSILON,
    identity_tol: Tolerances = IDENTITY_TOLERANCES,
    workers: int = 1,
    progress: bool = False,
) -> SweepTracker:
    """Verify ``count`` random diagonal instances.

    Instance ``i`` has dimension ``dimensions[i % len(dimensions)]`` and
    seed ``instance_seeds(seed, count)[i]``.

    Args:
        dimensions: Dimensions to cycle through, each >= 2.
        count: Number of instances.
        seed: Root seed.
        tol: Tolerances of the two inequalities.
        weight_mode: ``unit`` or ``random`` weights.
        bounds: Range of the diagonal entries.
        weight_range: Range of random weights.
        null_cube: Resampling threshold for states.
        identity_tol: Tolerances of the identity and order checks.
        workers: Worker threads.
        progress: Show a progress bar on stderr.

    Returns:
        The filled SweepTracker.
    """
    if count < 0:
        raise PreconditionError("count must be non-negative")
    if not dimensions or min(dimensions) < 2:
        raise PreconditionError("sweep dimensions must be >= 2")
    tol = tol or Tolerances()
    dims = list(dimensions)
    seeds = instance_seeds(seed, count)

    def verify(index: int) -> SweepRecord:
        instance = random_instance(dims[index % len(dims)], weight_mode=weight_mode, bounds=bounds,
                                   seed=seeds[index], weight_range=weight_range, null_cube=null_cube)
        report = verify_chain(instance.space, *instance.operators, instance.x, tol=tol,
                              identity_tol=identity_tol)
        order = operator_order_invariance(instance.space, *instance.operators, instance.x,
                                          tol=identity_tol)
        record = SweepRecord(index, seeds[index], instance.space.dimension, report,
                             order.deviation, order.ok)
        logger.debug("instance %d (n=%d): %s", index, record.dimension, record.outcome.value)
        return record

    logger.info("sweeping %d instances over dimensions %s", count, dims)
    tracker = SweepTracker()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for record in tqdm(pool.map(verify, range(count)), total=count,
                               disable=not progress, desc="sweep"):
                tracker.add(record)
    else:
        for index in tqdm(range(count), disable=not progress, desc="sweep"):
            tracker.add(verify(index))
    logger.info("sweep finished: %s", tracker.counts())
    return tracker
