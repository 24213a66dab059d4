"""Instance files: UTF-8 JSON descriptions of a space, operators and a state.

Example::

    {
      "space": {"dimension": 3, "weights": "unit", "label": "projections"},
      "operators": [
        {"diagonal": [1, 0, 0]},
        {"dense": [[0, 0, 0], [0, 1, 0], [0, 0, 0]]},
        {"random_diagonal": {"low": -2, "high": 2}}
      ],
      "state": {"coords": [1, 1, 1]},
      "tolerances": {"absolute": 1e-12, "relative": 1e-9},
      "seed": 7,
      "optimize": {"mode": "state", "restarts": 16}
    }

State coordinates are cube-normalized on load. Random entries are drawn
from ``seed`` in file order (operators first, then the state).
"""

import hashlib
import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from pythrs.configuration import Tolerances
from pythrs.errors import InstanceFileError, ThrsError
from pythrs.operators.model import LinearOperator, dense_operator, diagonal_operator
from pythrs.sharpness.search import OptimizerConfig
from pythrs.spaces.model import (
    StateVector,
    TriProductSpace,
    cube_normalize,
    draw_state,
    make_pointwise_space,
)


TOP_LEVEL_KEYS = {"space", "operators", "state", "tolerances", "seed", "optimize"}
SPACE_KEYS = {"dimension", "weights", "label"}
OPERATOR_KINDS = {"diagonal", "dense", "random_diagonal"}
OPTIMIZE_KEYS = {"mode", "bounds"} | {item.name for item in fields(OptimizerConfig)} - {"seed"}
OPTIMIZE_MODES = ("state", "joint")


@dataclass(eq=False)
class InstanceFile:
    """A parsed instance file.

    Attributes:
        space: The 3-product space.
        operators: Zero to three operators, in file order.
        state: Cube-normalized state, if the file has one.
        tolerances: Chain tolerances, if given.
        seed: Seed of the random entries and the optimizer.
        optimize: Optimizer fields (``mode``, ``bounds`` and OptimizerConfig names).
        digest: SHA-256 of the canonical JSON of the file contents.
    """

    space: TriProductSpace
    operators: tuple[LinearOperator, ...]
    state: Optional[StateVector]
    tolerances: Optional[Tolerances]
    seed: Optional[int]
    optimize: Optional[dict[str, Any]]
    digest: str

    def require_triple(self) -> tuple[LinearOperator, LinearOperator, LinearOperator]:
        if len(self.operators) != 3:
            raise InstanceFileError(f"expected 3 operators, found {len(self.operators)}", "operators")
        return self.operators[0], self.operators[1], self.operators[2]

    def require_state(self) -> StateVector:
        if self.state is None:
            raise InstanceFileError("this command needs a state", "state")
        return self.state


def canonical_digest(document: Any) -> str:
    """SHA-256 hex digest of the canonical (sorted, compact) JSON text."""
    text = json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _reject_unknown(mapping: dict, allowed: set[str], location: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        where = f"{location}.{unknown[0]}" if location else unknown[0]
        raise InstanceFileError(f"unknown key {unknown[0]!r}", where)


def _expect(value: Any, kind: Union[type, tuple[type, ...]], location: str, what: str) -> Any:
    if isinstance(value, bool) or not isinstance(value, kind):
        raise InstanceFileError(f"expected {what}", location)
    return value


def _number_list(value: Any, location: str, length: Optional[int] = None) -> list[float]:
    _expect(value, list, location, "an array of numbers")
    for index, item in enumerate(value):
        _expect(item, (int, float), f"{location}[{index}]", "a number")
    if length is not None and len(value) != length:
        raise InstanceFileError(f"expected {length} entries, found {len(value)}", location)
    return [float(item) for item in value]


def _bounds(value: Any, location: str) -> tuple[float, float]:
    low, high = _number_list(value, location, 2)
    if low > high:
        raise InstanceFileError(f"bounds must satisfy low <= high, got [{low}, {high}]", location)
    return low, high


def _parse_space(value: Any) -> TriProductSpace:
    _expect(value, dict, "space", "an object")
    _reject_unknown(value, SPACE_KEYS, "space")
    if "dimension" not in value:
        raise InstanceFileError("missing key 'dimension'", "space")
    dimension = _expect(value["dimension"], int, "space.dimension", "an integer")
    if dimension < 1:
        raise InstanceFileError("dimension must be positive", "space.dimension")
    label = value.get("label")
    if label is not None:
        _expect(label, str, "space.label", "a string")

    weights = value.get("weights", "unit")
    if weights == "unit":
        weights = np.ones(dimension)
        label = label or f"unit-{dimension}"
    else:
        weights = _number_list(weights, "space.weights", dimension)
    try:
        return make_pointwise_space(weights, label=label)
    except ThrsError as error:
        raise InstanceFileError(str(error), "space.weights") from error


def _parse_operator(value: Any, index: int, dimension: int, rng: Optional[np.random.Generator]) -> LinearOperator:
    location = f"operators[{index}]"
    _expect(value, dict, location, "an object")
    _reject_unknown(value, OPERATOR_KINDS, location)
    if len(value) != 1:
        raise InstanceFileError(f"expected exactly one of {sorted(OPERATOR_KINDS)}", location)
    kind, body = next(iter(value.items()))
    location = f"{location}.{kind}"

    if kind == "diagonal":
        return diagonal_operator(_number_list(body, location, dimension))
    if kind == "dense":
        _expect(body, list, location, "an array of rows")
        if len(body) != dimension:
            raise InstanceFileError(f"expected {dimension} rows, found {len(body)}", location)
        rows = [_number_list(row, f"{location}[{r}]", dimension) for r, row in enumerate(body)]
        return dense_operator(rows)

    _expect(body, dict, location, "an object")
    _reject_unknown(body, {"low", "high", "bounds"}, location)
    if "bounds" in body:
        low, high = _bounds(body["bounds"], f"{location}.bounds")
    else:
        low, high = _bounds([body.get("low", -2.0), body.get("high", 2.0)], location)
    if rng is None:
        raise InstanceFileError("random entries need a top-level 'seed'", location)
    return diagonal_operator(rng.uniform(low, high, size=dimension))


def _parse_state(value: Any, space: TriProductSpace, rng: Optional[np.random.Generator]) -> StateVector:
    _expect(value, dict, "state", "an object")
    _reject_unknown(value, {"coords"}, "state")
    if "coords" not in value:
        raise InstanceFileError("missing key 'coords'", "state")
    coords = value["coords"]
    if coords == "random":
        if rng is None:
            raise InstanceFileError("random entries need a top-level 'seed'", "state.coords")
        return draw_state(space, rng)
    try:
        return cube_normalize(space, _number_list(coords, "state.coords", space.dimension))
    except ThrsError as error:
        raise InstanceFileError(str(error), "state.coords") from error


def _parse_tolerances(value: Any) -> Tolerances:
    _expect(value, dict, "tolerances", "an object")
    _reject_unknown(value, {"absolute", "relative"}, "tolerances")
    defaults = Tolerances()
    result = {}
    for key in ("absolute", "relative"):
        number = _expect(value.get(key, getattr(defaults, key)), (int, float), f"tolerances.{key}", "a number")
        if number < 0:
            raise InstanceFileError("must be non-negative", f"tolerances.{key}")
        result[key] = float(number)
    return Tolerances(**result)


def _parse_optimize(value: Any) -> dict[str, Any]:
    _expect(value, dict, "optimize", "an object")
    _reject_unknown(value, OPTIMIZE_KEYS, "optimize")
    result: dict[str, Any] = {}
    for key, item in value.items():
        location = f"optimize.{key}"
        if key == "mode":
            if item not in OPTIMIZE_MODES:
                raise InstanceFileError(f"expected one of {list(OPTIMIZE_MODES)}", location)
            result[key] = item
        elif key == "bounds":
            result[key] = _bounds(item, location)
        elif key in ("restarts", "max_iterations", "workers"):
            result[key] = _expect(item, int, location, "an integer")
        else:
            result[key] = float(_expect(item, (int, float), location, "a number"))
    return result


def parse_instance(document: Any) -> InstanceFile:
    """Build an InstanceFile from decoded JSON.

    Raises:
        InstanceFileError: Anchored at the offending field.
    """
    _expect(document, dict, "", "a JSON object at the top level")
    _reject_unknown(document, TOP_LEVEL_KEYS, "")
    if "space" not in document:
        raise InstanceFileError("missing key 'space'")
    space = _parse_space(document["space"])

    seed = document.get("seed")
    if seed is not None:
        _expect(seed, int, "seed", "an integer")
        if seed < 0:
            raise InstanceFileError("must be non-negative", "seed")
    rng = np.random.default_rng(seed) if seed is not None else None

    raw_operators = document.get("operators", [])
    _expect(raw_operators, list, "operators", "an array")
    if len(raw_operators) > 3:
        raise InstanceFileError(f"at most 3 operators, found {len(raw_operators)}", "operators")
    operators = tuple(
        _parse_operator(item, index, space.dimension, rng) for index, item in enumerate(raw_operators)
    )

    state = _parse_state(document["state"], space, rng) if "state" in document else None
    tolerances = _parse_tolerances(document["tolerances"]) if "tolerances" in document else None
    optimize = _parse_optimize(document["optimize"]) if "optimize" in document else None
    if optimize is not None and seed is None:
        raise InstanceFileError("optimizer runs need a top-level 'seed'", "optimize")

    return InstanceFile(
        space=space,
        operators=operators,
        state=state,
        tolerances=tolerances,
        seed=seed,
        optimize=optimize,
        digest=canonical_digest(document),
    )


def load_instance(path: Union[str, Path]) -> InstanceFile:
    """Read and parse an instance file.

    Raises:
        InstanceFileError: If the file is unreadable, not JSON, or invalid.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as error:
        raise InstanceFileError(f"cannot read {path}: {error}") from error
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise InstanceFileError(error.msg, f"line {error.lineno}, column {error.colno}") from error
    return parse_instance(document)
