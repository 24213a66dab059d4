"""Tests for the command-line entry point."""

import argparse
import json

import pandas as pd
import pytest

from pythrs.cli.commands import dimension_range, non_negative, quadrature_rule, run


def write_json(path, document: dict) -> str:
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


@pytest.fixture
def projection_file(tmp_path) -> str:
    return write_json(tmp_path / "projection3.json", {
        "space": {"dimension": 3},
        "operators": [{"diagonal": [1, 0, 0]}, {"diagonal": [0, 1, 0]}, {"diagonal": [0, 0, 1]}],
        "state": {"coords": [1, 1, 1]},
        "seed": 5,
        "optimize": {"restarts": 2, "max_iterations": 30},
    })


@pytest.fixture
def swap_file(tmp_path) -> str:
    return write_json(tmp_path / "dense_swap.json", {
        "space": {"dimension": 2},
        "operators": [{"dense": [[0, 1], [1, 0]]}, {"diagonal": [1, -1]}],
        "state": {"coords": [1, 0]},
    })


def invoke(capsys, *argv: str) -> tuple[int, dict]:
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else {}


class TestArgumentTypes:
    """Tests for the custom argument parsers."""

    def test_dimension_range(self) -> None:
        """LO..HI is inclusive; a single number is one dimension."""
        assert dimension_range("2..5") == [2, 3, 4, 5]
        assert dimension_range("7") == [7]

    def test_quadrature_rule(self) -> None:
        """RULE:NODES with 64 nodes by default."""
        assert quadrature_rule("gauss-legendre:16") == ("gauss-legendre", 16)
        assert quadrature_rule("midpoint") == ("midpoint", 64)

    def test_non_negative(self) -> None:
        """Counts and seeds accept zero and reject negatives."""
        assert non_negative("0") == 0
        with pytest.raises(argparse.ArgumentTypeError):
            non_negative("-1")


class TestVerify:
    """Tests for pythrs verify."""

    def test_projection_instance(self, capsys, projection_file) -> None:
        """Coordinate projections at the balanced state: lhs 10/81, rhs 2/27."""
        code, data = invoke(capsys, "verify", "--file", projection_file)
        assert code == 0
        assert data["passed"] is True
        chain = data["checks"][0]
        assert chain["name"] == "chain"
        assert chain["lhs_product"] == pytest.approx(10 / 81, rel=1e-12)
        assert chain["rhs_expanded"] == pytest.approx(2 / 27, rel=1e-12)
        assert chain["sharpness_ratio"] == pytest.approx(0.6, rel=1e-12)
        assert [check["name"] for check in data["checks"]] == ["chain", "identity", "order-invariance"]
        assert len(data["instance_digest"]) == 64

    def test_rejected_operator(self, capsys, tmp_path) -> None:
        """A non-3-self-adjoint operator is an input error."""
        path = write_json(tmp_path / "bad.json", {
            "space": {"dimension": 2},
            "operators": [{"dense": [[0, 1], [1, 0]]}, {"diagonal": [1, 2]}, {"diagonal": [2, 1]}],
            "state": {"coords": [1, 1]},
        })
        code, data = invoke(capsys, "verify", "--file", path)
        assert code == 2
        assert data == {}

    def test_needs_three_operators(self, capsys, swap_file) -> None:
        """verify needs a full triple."""
        assert invoke(capsys, "verify", "--file", swap_file)[0] == 2

    def test_timing(self, capsys, projection_file) -> None:
        """--timing adds wall_time."""
        code, data = invoke(capsys, "verify", "--file", projection_file, "--timing")
        assert code == 0
        assert data["wall_time"] >= 0.0


class TestSelfAdjoint:
    """Tests for pythrs selfadjoint."""

    def test_swap_fails_with_witness(self, capsys, swap_file) -> None:
        """The swap matrix fails at (2, 1, 1); the multiplier passes."""
        code = run(["selfadjoint", "--file", swap_file])
        captured = capsys.readouterr()
        data = json.loads(captured.out)
        assert code == 1
        assert data["checks"][0]["outcome"] == "fail"
        assert data["checks"][0]["witness"]["indices"] == [2, 1, 1]
        assert data["checks"][1]["outcome"] == "pass"
        assert "witness" in captured.err

    def test_exhaustive(self, capsys, projection_file) -> None:
        """Diagonal operators pass the exhaustive check."""
        code, data = invoke(capsys, "selfadjoint", "--file", projection_file, "--method", "exhaustive")
        assert code == 0
        assert data["counts"]["pass"] == 3


class TestSweep:
    """Tests for pythrs sweep."""

    def test_counts_and_determinism(self, capsys) -> None:
        """Counts sum to N and identical runs print identical reports."""
        argv = ["sweep", "--dims", "2..4", "--count", "40", "--seed", "42"]
        assert run(argv) == 0
        first = capsys.readouterr().out
        assert run(argv) == 0
        second = capsys.readouterr().out
        assert first == second
        data = json.loads(first)
        assert sum(data["counts"].values()) == 40
        assert data["counts"]["fail"] == 0
        assert data["checks"] == []
        assert data["worst_margins"]["identity_deviation_relative"] <= 1e-9

    def test_outputs(self, capsys, tmp_path) -> None:
        """--csv and --jsonl write one row per instance."""
        csv_path = tmp_path / "sweep.csv"
        jsonl_path = tmp_path / "sweep.jsonl"
        code, _ = invoke(capsys, "sweep", "--dims", "2..3", "--count", "10", "--seed", "1",
                         "--csv", str(csv_path), "--jsonl", str(jsonl_path))
        assert code == 0
        assert len(pd.read_csv(csv_path)) == 10
        assert len(jsonl_path.read_text(encoding="utf-8").splitlines()) == 10

    def test_negative_count(self, capsys) -> None:
        """A negative count is invalid input."""
        assert invoke(capsys, "sweep", "--count", "-1")[0] == 2


class TestOptimize:
    """Tests for pythrs optimize."""

    def test_joint(self, capsys, tmp_path) -> None:
        """A short joint search passes the ratio bound and reproduces its witness."""
        csv_path = tmp_path / "trace.csv"
        code, data = invoke(capsys, "optimize", "--mode", "joint", "--dimension", "3",
                            "--seed", "11", "--restarts", "3", "--csv", str(csv_path))
        assert code == 0
        bound, witness = data["checks"]
        assert bound["name"] == "ratio-bound"
        assert bound["best_ratio"] >= 0.6 - 1e-9
        assert bound["falsification_flag"] is False
        assert witness["outcome"] == "pass"
        assert list(pd.read_csv(csv_path)["restart"]) == [0, 1, 2]

    def test_deterministic_report(self, capsys) -> None:
        """Identical seeds print byte-identical reports."""
        argv = ["optimize", "--mode", "joint", "--dimension", "3", "--seed", "4", "--restarts", "2"]
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first

    def test_state_mode_from_file(self, capsys, projection_file) -> None:
        """A file with three operators defaults to the state search with its own settings."""
        code, data = invoke(capsys, "optimize", "--file", projection_file)
        assert code == 0
        bound = data["checks"][0]
        assert bound["mode"] == "state"
        assert bound["seed"] == 5
        assert bound["restarts_used"] == 2

    def test_needs_seed(self, capsys) -> None:
        """Without --seed or a file seed the command refuses to run."""
        assert invoke(capsys, "optimize", "--mode", "joint")[0] == 2


@pytest.mark.slow
class TestAcceptanceReports:
    """Byte-identical reports at acceptance scale."""

    @pytest.mark.parametrize("argv", [
        ["sweep", "--dims", "2..16", "--count", "10000", "--seed", "42"],
        ["optimize", "--mode", "joint", "--dimension", "3", "--seed", "11", "--restarts", "64"],
    ])
    def test_repeated_runs_identical(self, capsys, argv) -> None:
        """Two runs with the same seed print the same bytes and pass."""
        assert run(argv) == 0
        first = capsys.readouterr().out
        assert run(argv) == 0
        assert capsys.readouterr().out == first


class TestClassical:
    """Tests for pythrs classical."""

    def test_random_pairs(self, capsys) -> None:
        """Seeded random pairs all pass."""
        code, data = invoke(capsys, "classical", "--dims", "2..4", "--count", "20", "--seed", "7")
        assert code == 0
        assert len(data["checks"]) == 20
        assert data["checks"][0]["name"] == "pair:0"
        assert data["worst_margins"]["commutator_expectation"] <= 1e-10

    def test_pair_from_file(self, capsys, swap_file) -> None:
        """Operators from a file are checked pairwise."""
        code, data = invoke(capsys, "classical", "--file", swap_file)
        assert code == 0
        assert [check["name"] for check in data["checks"]] == ["AB"]
        assert data["checks"][0]["delta_a"] == 1.0

    def test_negative_count(self, capsys) -> None:
        """A negative count is invalid input, not a crash."""
        assert invoke(capsys, "classical", "--count", "-1")[0] == 2


class TestAxioms:
    """Tests for pythrs axioms."""

    def test_spaces(self, capsys) -> None:
        """Unit, weighted and quadrature spaces pass."""
        code, data = invoke(capsys, "axioms", "--dims", "1..3", "--weights", "0.5,2",
                            "--quadrature", "gauss-legendre:8", "--budget", "50")
        assert code == 0
        assert len(data["checks"]) == 5

    def test_no_space(self, capsys) -> None:
        """At least one space is required."""
        assert invoke(capsys, "axioms")[0] == 2


class TestExitCodes:
    """Tests for argument errors and help."""

    def test_missing_subcommand(self, capsys) -> None:
        """No subcommand is a usage error."""
        assert run([]) == 2

    def test_unknown_subcommand(self, capsys) -> None:
        """Unknown subcommands are usage errors."""
        assert run(["prove"]) == 2

    def test_bad_range(self, capsys) -> None:
        """Malformed dimension ranges are usage errors."""
        assert run(["sweep", "--dims", "0..3"]) == 2
        assert run(["sweep", "--dims", "a..b"]) == 2

    def test_help(self, capsys) -> None:
        """--help exits cleanly."""
        assert run(["--help"]) == 0
        assert "verify" in capsys.readouterr().out

    def test_negative_seed(self, capsys) -> None:
        """Negative seeds are usage errors for every seeded command."""
        assert run(["sweep", "--seed", "-3"]) == 2
        assert run(["optimize", "--mode", "joint", "--seed", "-3"]) == 2
        assert run(["axioms", "--dims", "2", "--seed", "-3"]) == 2

    def test_missing_file(self, capsys, tmp_path) -> None:
        """Unreadable instance files are input errors."""
        assert invoke(capsys, "verify", "--file", str(tmp_path / "absent.json"))[0] == 2

    def test_missing_config(self, capsys, projection_file, tmp_path) -> None:
        """A --config path that does not exist is an input error."""
        code, _ = invoke(capsys, "verify", "--file", projection_file, "--config",
                         str(tmp_path / "absent.ini"))
        assert code == 2

    def test_config_override(self, capsys, tmp_path) -> None:
        """Settings in --config replace the packaged defaults."""
        config = tmp_path / "settings.ini"
        config.write_text("[axioms]\nsample_budget = 7\n", encoding="utf-8")
        code, data = invoke(capsys, "axioms", "--dims", "2", "--config", str(config))
        assert code == 0
        assert data["checks"][0]["samples"] == 7
