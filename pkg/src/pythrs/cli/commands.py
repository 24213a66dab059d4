"""Command-line entry point.

Usage:
    pythrs axioms --dims 1..16 --quadrature gauss-legendre:16
    pythrs selfadjoint --file dense_swap.json
    pythrs verify --file projection3.json
    pythrs sweep --dims 2..8 --count 10000 --seed 42 --csv sweep.csv
    pythrs optimize --mode joint --dimension 3 --seed 11 --restarts 64
    pythrs classical --dims 2..8 --count 1000 --seed 7

Standard output carries one JSON RunReport; diagnostics go to standard
error. Exit codes: 0 all checks passed, 1 a mathematical check failed,
2 invalid input.
"""

import argparse
import configparser
import logging
import os
import sys
import time
from typing import Callable, Optional, Sequence

import numpy as np

from pythrs.configuration import Configuration, Tolerances
from pythrs.errors import InstanceFileError, PreconditionError, ThrsError
from pythrs.operators.self_adjoint import check_3_self_adjoint
from pythrs.sharpness.objective import sharpness_ratio
from pythrs.sharpness.search import OptimizerConfig, optimize_joint, optimize_state
from pythrs.spaces.axioms import check_axioms
from pythrs.spaces.model import make_pointwise_space, make_unit_space
from pythrs.spaces.quadrature import make_quadrature_space
from pythrs.uncertainty.chain import Outcome, operator_order_invariance, verify_chain
from pythrs.uncertainty.classical import classical_verify, random_symmetric_pair
from pythrs.uncertainty.sweep import instance_seeds, run_sweep
from pythrs.cli.instance import InstanceFile, load_instance
from pythrs.cli.report import RunReport, outcome_of, to_plain

logger = logging.getLogger(__name__)

# best_ratio must be reproduced through verify_chain within this relative tolerance
WITNESS_TOLERANCE = 1e-9


def dimension_range(text: str) -> list[int]:
    """Parse ``LO..HI`` (inclusive) or a single dimension."""
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
        else:
            low = high = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if low < 1 or high < low:
        raise argparse.ArgumentTypeError(f"expected 1 <= LO <= HI, got {text!r}")
    return list(range(low, high + 1))


def non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def number_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def quadrature_rule(text: str) -> tuple[str, int]:
    rule, _, nodes = text.partition(":")
    try:
        return rule, int(nodes or 64)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RULE:NODES, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--file", type=str, help="Instance file (JSON)")
    common.add_argument("--seed", type=non_negative, help="Root seed")
    common.add_argument("--csv", type=str, help="Write tabular results to this CSV file")
    common.add_argument("--tol-abs", type=float, help="Absolute tolerance")
    common.add_argument("--tol-rel", type=float, help="Relative tolerance")
    common.add_argument("--config", type=str, help="INI file overriding the packaged defaults")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Diagnostics on stderr")
    common.add_argument("--timing", action="store_true", help="Include wall time in the report")

    parser = argparse.ArgumentParser(
        prog="pythrs",
        description="Three-operator uncertainty relations in 3-product spaces",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("\n\n")[1],
    )
    subparsers = parser.add_subparsers(dest="command", required=True, help="Command to run")

    axioms = subparsers.add_parser("axioms", parents=[common], help="Check the 3-product axioms")
    axioms.add_argument("--dims", type=dimension_range, help="Unit-weight spaces LO..HI")
    axioms.add_argument("--weights", type=number_list, help="Weights of one pointwise space")
    axioms.add_argument("--quadrature", type=quadrature_rule, action="append",
                        help="Quadrature space RULE:NODES on [0, 1] (repeatable)")
    axioms.add_argument("--budget", type=int, help="Sampled triples per space")

    selfadjoint = subparsers.add_parser("selfadjoint", parents=[common],
                                        help="Check the file's operators for 3-self-adjointness")
    selfadjoint.add_argument("--method", default="closed-form", choices=["closed-form", "exhaustive"])

    subparsers.add_parser("verify", parents=[common], help="Verify the inequality chain on one instance")

    sweep = subparsers.add_parser("sweep", parents=[common], help="Verify seeded random instances")
    sweep.add_argument("--dims", type=dimension_range, default=dimension_range("2..16"))
    sweep.add_argument("--count", type=non_negative, default=1000)
    sweep.add_argument("--weight-mode", default="unit", choices=["unit", "random"])
    sweep.add_argument("--low", type=float, help="Lower bound of diagonal entries")
    sweep.add_argument("--high", type=float, help="Upper bound of diagonal entries")
    sweep.add_argument("--jsonl", type=str, help="Write one JSON record per instance")
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--progress", action="store_true", help="Progress bar on stderr")

    optimize = subparsers.add_parser("optimize", parents=[common], help="Search for the sharpest instance")
    optimize.add_argument("--mode", choices=["state", "joint"])
    optimize.add_argument("--dimension", type=int, help="Unit-weight dimension when no file is given")
    optimize.add_argument("--restarts", type=int)
    optimize.add_argument("--low", type=float, help="Lower bound of diagonal entries (joint)")
    optimize.add_argument("--high", type=float, help="Upper bound of diagonal entries (joint)")
    optimize.add_argument("--workers", type=int)
    optimize.add_argument("--progress", action="store_true", help="Progress bar on stderr")

    classical = subparsers.add_parser("classical", parents=[common],
                                      help="Robertson and Schroedinger relations on symmetric pairs")
    classical.add_argument("--dims", type=dimension_range, default=dimension_range("2..8"))
    classical.add_argument("--count", type=non_negative, default=100)
    return parser


def _settings(args: argparse.Namespace) -> configparser.ConfigParser:
    if args.config and not os.path.exists(args.config):
        raise PreconditionError(f"configuration file {args.config} does not exist")
    return Configuration(args.config).load()


def _instance(args: argparse.Namespace, required: bool = True) -> Optional[InstanceFile]:
    if args.file:
        return load_instance(args.file)
    if required:
        raise PreconditionError(f"{args.command} needs --file")
    return None


def _tolerances(args: argparse.Namespace, config: configparser.ConfigParser,
                instance: Optional[InstanceFile] = None) -> Tolerances:
    tol = Tolerances.from_config(config)
    if instance is not None and instance.tolerances is not None:
        tol = instance.tolerances
    return Tolerances(
        absolute=tol.absolute if args.tol_abs is None else args.tol_abs,
        relative=tol.relative if args.tol_rel is None else args.tol_rel,
    )


def _identity_tolerances(config: configparser.ConfigParser) -> Tolerances:
    section = config['tolerances']
    return Tolerances(absolute=section.getfloat('absolute'), relative=section.getfloat('identity'))


def _bounds(args: argparse.Namespace, config: configparser.ConfigParser,
            default: Optional[tuple[float, float]] = None) -> tuple[float, float]:
    section = config['generator']
    low, high = default or (section.getfloat('diagonal_low'), section.getfloat('diagonal_high'))
    return (low if args.low is None else args.low, high if args.high is None else args.high)


def cmd_axioms(args: argparse.Namespace, config: configparser.ConfigParser) -> RunReport:
    instance = _instance(args, required=False)
    spaces = []
    if instance is not None:
        spaces.append(instance.space)
    if args.weights:
        spaces.append(make_pointwise_space(args.weights))
    for dimension in args.dims or []:
        spaces.append(make_unit_space(dimension))
    for rule, nodes in args.quadrature or []:
        spaces.append(make_quadrature_space(rule, nodes).space)
    if not spaces:
        raise PreconditionError("no space given; use --file, --weights, --dims or --quadrature")

    section = config['axioms']
    budget = section.getint('sample_budget') if args.budget is None else args.budget
    seed = section.getint('seed') if args.seed is None else args.seed
    if budget < 0:
        raise PreconditionError("--budget must be non-negative")
    tol = _tolerances(args, config, instance)

    report = RunReport(command="axioms", instance_digest=instance.digest if instance else None)
    for space in spaces:
        result = check_axioms(space, budget, seed, tol)
        report.add_check(f"axioms:{space.label}", outcome_of(result.all_ok), **result.to_dict())
        report.track_min("holder_margin", result.holder_margin)
        report.track_max("symmetry_deviation", result.symmetry_deviation)
        report.track_max("homogeneity_deviation", result.homogeneity_deviation)
        report.track_max("additivity_deviation", result.additivity_deviation)
    return report


def cmd_selfadjoint(args: argparse.Namespace, config: configparser.ConfigParser) -> RunReport:
    instance = _instance(args)
    if not instance.operators:
        raise InstanceFileError("no operators to check", "operators")
    report = RunReport(command="selfadjoint", instance_digest=instance.digest)
    for name, op in zip("ABC", instance.operators):
        ok, witness = check_3_self_adjoint(instance.space, op, method=args.method)
        report.add_check(f"selfadjoint:{name}", outcome_of(ok),
                         witness=witness.to_dict() if witness else None)
        if witness is not None:
            print(f"operator {name}: witness {witness.indices} values {witness.values}",
                  file=sys.stderr)
            report.track_max("discrepancy", witness.discrepancy)
    return report


def cmd_verify(args: argparse.Namespace, config: configparser.ConfigParser) -> RunReport:
    instance = _instance(args)
    A, B, C = instance.require_triple()
    x = instance.require_state()
    space = instance.space
    tol = _tolerances(args, config, instance)
    identity_tol = _identity_tolerances(config)

    chain = verify_chain(space, A, B, C, x, tol=tol, identity_tol=identity_tol,
                         normalization_tol=config['tolerances'].getfloat('normalization'))
    order = operator_order_invariance(space, A, B, C, x, tol=identity_tol)
    ratio = sharpness_ratio(space, A, B, C, x,
                            delta_floor=config['optimizer'].getfloat('delta_floor'),
                            lhs_floor=config['optimizer'].getfloat('lhs_floor'))

    details = chain.to_dict()
    del details["outcome"]
    report = RunReport(command="verify", instance_digest=instance.digest)
    report.add_check("chain", outcome_of(chain.chain_ok, chain.degenerate_tight),
                     sharpness_ratio=ratio, **details)
    report.add_check("identity", outcome_of(chain.identity_ok),
                     deviation=chain.identity_deviation, scale=chain.scale)
    report.add_check("order-invariance", outcome_of(order.ok), **order.to_dict())
    report.track_min("chain_margin", chain.margin)
    report.track_max("identity_deviation", chain.identity_deviation)
    report.track_max("order_deviation", order.deviation)
    return report


def cmd_sweep(args: argparse.Namespace, config: configparser.ConfigParser) -> RunReport:
    generator = config['generator']
    tracker = run_sweep(
        args.dims,
        args.count,
        seed=0 if args.seed is None else args.seed,
        tol=_tolerances(args, config),
        weight_mode=args.weight_mode,
        bounds=_bounds(args, config),
        weight_range=(generator.getfloat('weight_low'), generator.getfloat('weight_high')),
        null_cube=config['tolerances'].getfloat('null_cube'),
        identity_tol=_identity_tolerances(config),
        workers=args.workers,
        progress=args.progress,
    )
    report = RunReport(command="sweep")
    for record in tracker.failures():
        report.checks.append(to_plain({"name": f"instance:{record.index}", **record.to_dict()}))
    report.counts = tracker.counts()
    report.track_min("chain_margin", tracker.worst_margin())
    report.track_max("identity_deviation", tracker.worst_identity_deviation())
    report.track_max("identity_deviation_relative", tracker.worst_relative_identity_deviation())
    for record in tracker.records():
        report.track_max("order_deviation", record.order_deviation)
    if args.csv:
        tracker.write_csv(args.csv)
    if args.jsonl:
        tracker.write_jsonl(args.jsonl)
    return report


def cmd_optimize(args: argparse.Namespace, config: configparser.ConfigParser) -> RunReport:
    instance = _instance(args, required=False)
    options = dict(instance.optimize or {}) if instance is not None else {}
    has_triple = instance is not None and len(instance.operators) == 3
    mode = args.mode or options.pop("mode", None) or ("state" if has_triple else "joint")
    options.pop("mode", None)
    bounds = _bounds(args, config, options.pop("bounds", None))

    seed = args.seed if args.seed is not None else (instance.seed if instance else None)
    if seed is None:
        raise PreconditionError("optimize needs a seed: pass --seed or set 'seed' in the instance file")
    flags = {"seed": seed, "restarts": args.restarts, "workers": args.workers}
    options.update({key: value for key, value in flags.items() if value is not None})
    optimizer = OptimizerConfig.from_config(config, **options)

    if instance is not None:
        space = instance.space
    else:
        space = make_unit_space(args.dimension or 3)
    if mode == "state":
        if instance is None:
            raise PreconditionError("state mode needs --file with three operators")
        A, B, C = instance.require_triple()
        result = optimize_state(space, A, B, C, optimizer, progress=args.progress)
    else:
        result = optimize_joint(space, bounds, optimizer, progress=args.progress)

    reproduced = abs(result.reevaluated_ratio - result.best_ratio) <= WITNESS_TOLERANCE * max(1.0, abs(result.best_ratio))
    report = RunReport(command="optimize", instance_digest=instance.digest if instance else None)
    report.add_check("ratio-bound", outcome_of(not result.falsification_flag), **result.to_dict())
    report.add_check("witness", outcome_of(result.witness_chain_ok and reproduced),
                     best_ratio=result.best_ratio, reevaluated_ratio=result.reevaluated_ratio)
    report.track_min("ratio_headroom", 1.0 - result.best_ratio)
    if args.csv:
        result.trace_frame().to_csv(args.csv, index=False)
    return report


def cmd_classical(args: argparse.Namespace, config: configparser.ConfigParser) -> RunReport:
    instance = _instance(args, required=False)
    tol = config['tolerances'].getfloat('identity')
    cases = []
    if instance is not None:
        if len(instance.operators) < 2:
            raise InstanceFileError("classical checks need at least 2 operators", "operators")
        h = instance.require_state().coords
        h = h / np.linalg.norm(h)
        names = "ABC"[:len(instance.operators)]
        matrices = dict(zip(names, (op.matrix() for op in instance.operators)))
        for first, second in (("A", "B"), ("A", "C"), ("B", "C")):
            if second in matrices:
                cases.append((first + second, matrices[first], matrices[second], h))
    else:
        seeds = instance_seeds(0 if args.seed is None else args.seed, args.count)
        for index, seed in enumerate(seeds):
            dimension = args.dims[index % len(args.dims)]
            A, B, h = random_symmetric_pair(dimension, np.random.default_rng(seed))
            cases.append((f"pair:{index}", A, B, h))

    report = RunReport(command="classical", instance_digest=instance.digest if instance else None)
    for name, A, B, h in cases:
        result = classical_verify(A, B, h, tol=tol)
        report.add_check(name, outcome_of(result.passed), **result.to_dict())
        report.track_min("robertson_margin", result.margins["robertson"])
        report.track_min("schroedinger_margin", result.margins["schroedinger"])
        report.track_max("commutator_expectation", abs(result.commutator_expectation))
    return report


COMMANDS: dict[str, Callable[[argparse.Namespace, configparser.ConfigParser], RunReport]] = {
    "axioms": cmd_axioms,
    "selfadjoint": cmd_selfadjoint,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "classical": cmd_classical,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Execute one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return 0 if exit_request.code is None else int(exit_request.code)

    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        report = COMMANDS[args.command](args, _settings(args))
    except ThrsError as error:
        print(f"pythrs {args.command}: error: {error}", file=sys.stderr)
        return 2
    except OSError as error:
        print(f"pythrs {args.command}: error: {error}", file=sys.stderr)
        return 2
    if args.timing:
        report.wall_time = time.perf_counter() - start

    sys.stdout.write(report.to_json() + "\n")
    if not report.passed:
        logger.warning("%s: %d check(s) failed", args.command, report.counts[Outcome.FAIL.value])
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())
