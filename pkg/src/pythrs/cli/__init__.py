"""Command-line harness: instance files, run reports and subcommands."""

from pythrs.cli.instance import InstanceFile, canonical_digest, load_instance, parse_instance
from pythrs.cli.report import RunReport, outcome_of
from pythrs.cli.commands import build_parser, main, run

__all__ = [
    "InstanceFile",
    "canonical_digest",
    "load_instance",
    "parse_instance",
    "RunReport",
    "outcome_of",
    "build_parser",
    "main",
    "run",
]
