"""Machine-readable run reports."""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np

from pythrs.uncertainty.chain import Outcome


def to_plain(value: Any) -> Any:
    """Convert numpy values and tuples to JSON types; non-finite floats become None."""
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


@dataclass
class RunReport:
    """Result of one CLI command.

    Attributes:
        command: Subcommand name.
        instance_digest: SHA-256 of the instance file, if one was read.
        checks: One entry per check with at least ``name`` and ``outcome``.
        counts: Number of checks per outcome.
        worst_margins: Smallest margin (or largest deviation) per quantity.
        wall_time: Seconds, only when timing was requested.
    """

    command: str
    instance_digest: Optional[str] = None
    checks: list[dict[str, Any]] = field(default_factory=list)
    counts: dict[str, int] = field(
        default_factory=lambda: {outcome.value: 0 for outcome in Outcome}
    )
    worst_margins: dict[str, Optional[float]] = field(default_factory=dict)
    wall_time: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.counts.get(Outcome.FAIL.value, 0) == 0

    def count(self, outcome: Outcome, number: int = 1) -> None:
        self.counts[outcome.value] = self.counts.get(outcome.value, 0) + number

    def add_check(self, name: str, outcome: Outcome, **details: Any) -> None:
        """Record a check and count its outcome."""
        self.checks.append(to_plain({"name": name, "outcome": outcome.value, **details}))
        self.count(outcome)

    def track_min(self, key: str, value: Optional[float]) -> None:
        self._track(key, value, min)

    def track_max(self, key: str, value: Optional[float]) -> None:
        self._track(key, value, max)

    def _track(self, key: str, value: Optional[float], pick) -> None:
        value = to_plain(value)
        if value is None:
            self.worst_margins.setdefault(key, None)
            return
        current = self.worst_margins.get(key)
        self.worst_margins[key] = value if current is None else pick(current, value)

    def to_dict(self) -> dict[str, Any]:
        result = to_plain(asdict(self))
        if self.wall_time is None:
            del result["wall_time"]
        result["passed"] = self.passed
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        data.pop("passed", None)
        return cls(**data)


def outcome_of(passed: bool, tight: bool = False) -> Outcome:
    if not passed:
        return Outcome.FAIL
    return Outcome.DEGENERATE_TIGHT if tight else Outcome.PASS
