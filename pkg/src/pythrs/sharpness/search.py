"""Multi-start search for the sharpest instances of the chain.

Each restart runs a derivative-free ascent on the sharpness ratio: central
finite differences in ambient coordinates, a step along the normalized
gradient with backtracking, and cube renormalization of the state after
every accepted step. Restarts use independent child seeds of one
``SeedSequence``; the best result is the largest ratio, ties going to the
lowest restart index.
"""

import configparser
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Callable, Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from tqdm import tqdm

from pythrs.errors import PreconditionError, UndefinedResultError
from pythrs.operators.model import LinearOperator, diagonal_operator
from pythrs.sharpness.objective import batch_ratio
from pythrs.spaces.model import StateVector, TriProductSpace, cube_normalize
from pythrs.uncertainty.chain import verify_chain

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the multi-start ascent.

    Attributes:
        restarts: Number of restarts (>= 1).
        max_iterations: Ascent iterations per restart.
        initial_step: First and largest trial step.
        shrink: Backtracking factor in (0, 1).
        convergence: Stop when an accepted step improves less than this;
            also the smallest trial step.
        fd_step: Finite-difference step is fd_step * (1 + |z_i|).
        delta_floor: Smallest admissible 3-uncertainty.
        lhs_floor: Smallest admissible lhs relative to the expanded-form scale.
        falsify_tol: A ratio above 1 + falsify_tol is a falsification candidate.
        null_cube: Resampling threshold for |<x,x,x>|.
        seed: Root seed.
        workers: Threads running restarts.
    """

    restarts: int = 64
    max_iterations: int = 500
    initial_step: float = 0.1
    shrink: float = 0.5
    convergence: float = 1e-12
    fd_step: float = 1e-6
    delta_floor: float = 1e-9
    lhs_floor: float = 1e-9
    falsify_tol: float = 1e-6
    null_cube: float = 1e-6
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.max_iterations < 1 or self.workers < 1:
            raise PreconditionError("restarts, max_iterations and workers must be >= 1")
        if self.seed < 0:
            raise PreconditionError("seed must be non-negative")
        positive = ("initial_step", "convergence", "fd_step", "delta_floor",
                    "lhs_floor", "falsify_tol", "null_cube")
        for name in positive:
            if not getattr(self, name) > 0:
                raise PreconditionError(f"{name} must be positive")
        if not 0 < self.shrink < 1:
            raise PreconditionError("shrink must lie in (0, 1)")

    @classmethod
    def from_config(cls, config: configparser.ConfigParser, **overrides) -> "OptimizerConfig":
        """Read the ``[optimizer]`` section, then apply keyword overrides."""
        section = config['optimizer']
        values = {}
        for item in fields(cls):
            if item.name in section:
                cast = int if item.type in (int, "int") else float
                values[item.name] = cast(section[item.name])
        values['null_cube'] = config['tolerances'].getfloat('null_cube', cls.null_cube)
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass
class RestartOutcome:
    index: int
    ratio: float
    point: NDArray[np.float64]
    iterations: int
    converged: bool


@dataclass
class SharpnessResult:
    """Best configuration found by a search.

    ``best_ratio`` is an empirical estimate of the supremum, not a bound.
    ``reevaluated_ratio`` recomputes it through :func:`verify_chain`.
    """

    best_ratio: float
    best_state: StateVector
    best_operators: tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]
    restarts_used: int
    iterations_total: int
    ratio_trace: Optional[list[Optional[float]]]
    falsification_flag: bool
    reevaluated_ratio: float
    witness_chain_ok: bool
    mode: str
    seed: int
    restart_log: list[dict] = field(default_factory=list)
    estimate: str = "empirical"

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "estimate": self.estimate,
            "best_ratio": self.best_ratio,
            "reevaluated_ratio": self.reevaluated_ratio,
            "witness_chain_ok": self.witness_chain_ok,
            "falsification_flag": self.falsification_flag,
            "best_state": self.best_state.coords.tolist(),
            "best_operators": [entries.tolist() for entries in self.best_operators],
            "restarts_used": self.restarts_used,
            "iterations_total": self.iterations_total,
            "ratio_trace": self.ratio_trace,
        }

    def trace_frame(self) -> pd.DataFrame:
        """Per-restart table: restart, best_ratio, iterations, converged."""
        return pd.DataFrame(self.restart_log, columns=["restart", "best_ratio", "iterations", "converged"])


Batch = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class MultiStartAscent:
    """Projected finite-difference ascent restarted from seeded draws.

    Args:
        objective: Maps points of shape (k, m) to values of shape (k,);
            ``-inf`` marks undefined points.
        initial: Draws the start of restart ``index`` from its generator.
        clip: Projects points onto box constraints (applied to every trial).
        retract: Maps an accepted point back onto the constraint manifold.
        config: Optimizer settings.
    """

    def __init__(
        self,
        objective: Batch,
        initial: Callable[[int, np.random.Generator], NDArray[np.float64]],
        clip: Batch,
        retract: Callable[[NDArray[np.float64]], NDArray[np.float64]],
        config: OptimizerConfig,
    ) -> None:
        self._objective = objective
        self._initial = initial
        self._clip = clip
        self._retract = retract
        self._config = config

    def _value(self, point: NDArray[np.float64]) -> float:
        return float(self._objective(point[None, :])[0])

    def _gradient(self, point: NDArray[np.float64], value: float) -> NDArray[np.float64]:
        m = point.size
        h = self._config.fd_step * (1.0 + np.abs(point))
        plus = self._clip(point + np.diag(h))
        minus = self._clip(point - np.diag(h))
        values = self._objective(np.vstack([plus, minus]))
        up, down = values[:m], values[m:]
        up_step = np.diag(plus) - point
        down_step = point - np.diag(minus)

        gradient = np.zeros(m)
        with np.errstate(divide="ignore", invalid="ignore"):
            central = np.isfinite(up) & np.isfinite(down) & (up_step + down_step > 0)
            forward = np.isfinite(up) & ~np.isfinite(down) & (up_step > 0)
            backward = ~np.isfinite(up) & np.isfinite(down) & (down_step > 0)
            gradient = np.where(central, (up - down) / (up_step + down_step), gradient)
            gradient = np.where(forward, (up - value) / up_step, gradient)
            gradient = np.where(backward, (value - down) / down_step, gradient)
        return gradient

    def restart(self, index: int, seed: np.random.SeedSequence) -> RestartOutcome:
        """Run one restart to convergence or the iteration limit."""
        config = self._config
        rng = np.random.default_rng(seed)
        point = self._retract(self._clip(self._initial(index, rng)[None, :])[0])
        value = self._value(point)
        if not np.isfinite(value):
            return RestartOutcome(index, -np.inf, point, 0, False)

        step = config.initial_step
        iterations = 0
        converged = False
        while iterations < config.max_iterations:
            iterations += 1
            gradient = self._gradient(point, value)
            length = float(np.linalg.norm(gradient))
            if length == 0.0 or not np.isfinite(length):
                converged = True
                break
            direction = gradient / length

            trial_step = step
            trial_value = -np.inf
            while trial_step >= config.convergence:
                trial = self._clip((point + trial_step * direction)[None, :])[0]
                trial_value = self._value(trial)
                if trial_value > value:
                    break
                trial_step *= config.shrink
            else:
                converged = True
                break

            improvement = trial_value - value
            point = self._retract(trial)
            value = max(self._value(point), value)
            step = min(config.initial_step, trial_step / config.shrink)
            if improvement < config.convergence:
                converged = True
                break

        return RestartOutcome(index, value, point, iterations, converged)

    def run(self, progress: bool = False) -> list[RestartOutcome]:
        """Run every restart; results are ordered by restart index."""
        config = self._config
        seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
        indices = range(config.restarts)
        if config.workers > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                jobs = pool.map(self.restart, indices, seeds)
                outcomes = list(tqdm(jobs, total=config.restarts, disable=not progress,
                                     desc="restarts"))
        else:
            outcomes = [self.restart(i, s) for i, s in
                        tqdm(zip(indices, seeds), total=config.restarts,
                             disable=not progress, desc="restarts")]
        for outcome in outcomes:
            logger.debug("restart %d: ratio %r after %d iterations",
                         outcome.index, outcome.ratio, outcome.iterations)
        return sorted(outcomes, key=lambda outcome: outcome.index)


def _best(outcomes: list[RestartOutcome]) -> RestartOutcome:
    best: Optional[RestartOutcome] = None
    for outcome in outcomes:
        if np.isfinite(outcome.ratio) and (best is None or outcome.ratio > best.ratio):
            best = outcome
    if best is None:
        raise UndefinedResultError(
            "every restart stayed on degenerate states (some 3-uncertainty vanishes); "
            "try operators with distinct diagonal entries"
        )
    return best


def _draw_state(dimension: int, weights: NDArray, index: int, rng: np.random.Generator,
                null_cube: float) -> NDArray[np.float64]:
    if index == 0:
        return np.ones(dimension)
    while True:
        coords = rng.uniform(-1.0, 1.0, size=dimension)
        if abs(float((coords**3) @ weights)) >= null_cube:
            return coords


def _renormalize(weights: NDArray, coords: NDArray, null_cube: float) -> NDArray[np.float64]:
    cube_sum = float((coords**3) @ weights)
    if abs(cube_sum) < null_cube:
        return coords
    return coords / np.cbrt(cube_sum)


def _finish(
    space: TriProductSpace,
    outcomes: list[RestartOutcome],
    split: Callable[[NDArray], tuple[NDArray, NDArray, NDArray, NDArray]],
    config: OptimizerConfig,
    mode: str,
) -> SharpnessResult:
    best = _best(outcomes)
    coords, alpha, beta, gamma = split(best.point)
    state = cube_normalize(space, coords, config.null_cube)
    operators = [diagonal_operator(entries) for entries in (alpha, beta, gamma)]
    report = verify_chain(space, *operators, state)
    reevaluated = report.rhs_expanded / report.lhs_product if report.lhs_product > 0 else float("nan")

    falsified = False
    if best.ratio > 1.0 + config.falsify_tol:
        falsified = bool(reevaluated > 1.0 + config.falsify_tol)
        logger.warning("ratio %r exceeds 1 (re-evaluated %r, reproduced=%s)",
                       best.ratio, reevaluated, falsified)

    trace = [float(o.ratio) if np.isfinite(o.ratio) else None for o in outcomes]
    log = [{"restart": o.index, "best_ratio": trace[o.index], "iterations": o.iterations,
            "converged": o.converged} for o in outcomes]
    logger.info("%s search: best ratio %r over %d restarts", mode, best.ratio, len(outcomes))
    return SharpnessResult(
        best_ratio=float(best.ratio),
        best_state=state,
        best_operators=(np.array(alpha), np.array(beta), np.array(gamma)),
        restarts_used=len(outcomes),
        iterations_total=sum(o.iterations for o in outcomes),
        ratio_trace=trace,
        falsification_flag=falsified,
        reevaluated_ratio=float(reevaluated),
        witness_chain_ok=report.passed,
        mode=mode,
        seed=config.seed,
        restart_log=log,
    )


def optimize_state(
    space: TriProductSpace,
    A: LinearOperator,
    B: LinearOperator,
    C: LinearOperator,
    config: OptimizerConfig = OptimizerConfig(),
    progress: bool = False,
) -> SharpnessResult:
    """Maximize the sharpness ratio over cube-normalized states.

    Restart 0 starts from the balanced state (1, ..., 1) / cbrt(sum w);
    the others start from uniform(-1, 1) draws.

    Raises:
        PreconditionError: If an operator is not diagonal.
        UndefinedResultError: If every restart is degenerate.
    """
    for op in (A, B, C):
        if not op.is_diagonal:
            raise PreconditionError("the sharpness search runs over diagonal operators only")
        if op.dimension != space.dimension:
            raise PreconditionError("operator and space dimensions differ")
    weights = space.weights
    n = space.dimension
    alpha, beta, gamma = A.diagonal, B.diagonal, C.diagonal

    def objective(points: NDArray) -> NDArray:
        return batch_ratio(weights, alpha, beta, gamma, points, config.delta_floor,
                           config.lhs_floor, config.null_cube)

    search = MultiStartAscent(
        objective=objective,
        initial=lambda index, rng: _draw_state(n, weights, index, rng, config.null_cube),
        clip=lambda points: points,
        retract=lambda point: _renormalize(weights, point, config.null_cube),
        config=config,
    )
    outcomes = search.run(progress)
    return _finish(space, outcomes, lambda point: (point, alpha, beta, gamma), config, "state")


def optimize_joint(
    space: TriProductSpace,
    bounds: tuple[float, float] = (-2.0, 2.0),
    config: OptimizerConfig = OptimizerConfig(),
    progress: bool = False,
) -> SharpnessResult:
    """Maximize the ratio over states and three diagonal operators jointly.

    The search variables are x plus the three diagonals (4n coordinates);
    diagonal entries are clipped to ``bounds``. Restart 0 starts from the
    balanced state and the coordinate projections rescaled into ``bounds``
    (the ratio is invariant under A -> lam A + mu I).

    Raises:
        PreconditionError: If bounds are not low < high.
        UndefinedResultError: If every restart is degenerate.
    """
    low, high = (float(v) for v in bounds)
    if not low < high:
        raise PreconditionError(f"bounds must satisfy low < high, got ({low}, {high})")
    weights = space.weights
    n = space.dimension

    def split(points: NDArray) -> tuple[NDArray, NDArray, NDArray, NDArray]:
        return points[..., :n], points[..., n:2 * n], points[..., 2 * n:3 * n], points[..., 3 * n:]

    def objective(points: NDArray) -> NDArray:
        coords, alpha, beta, gamma = split(points)
        return batch_ratio(weights, alpha, beta, gamma, coords, config.delta_floor,
                           config.lhs_floor, config.null_cube)

    def clip(points: NDArray) -> NDArray:
        clipped = np.array(points, dtype=np.float64)
        clipped[..., n:] = np.clip(clipped[..., n:], low, high)
        return clipped

    def initial(index: int, rng: np.random.Generator) -> NDArray:
        coords = _draw_state(n, weights, index, rng, config.null_cube)
        if index == 0:
            projections = np.full((3, n), low)
            projections[np.arange(3), np.arange(3) % n] = high
            return np.concatenate([coords, projections.ravel()])
        return np.concatenate([coords, rng.uniform(low, high, size=3 * n)])

    def retract(point: NDArray) -> NDArray:
        result = np.array(point)
        result[:n] = _renormalize(weights, point[:n], config.null_cube)
        return result

    search = MultiStartAscent(objective, initial, clip, retract, config)
    outcomes = search.run(progress)
    return _finish(space, outcomes, split, config, "joint")
