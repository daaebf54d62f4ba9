"""Portfolio runner against scripted mock solvers and the self-hosted lane."""

import os
import stat
import sys
import textwrap
import time
from fractions import Fraction
from pathlib import Path

import pytest

from econqe.dsl import parse_problem
from econqe.encoders import build_query_trio
from econqe.engine import VerdictStatus
from econqe.portfolio import (
    SolverSpec, load_solver_config, run_portfolio, solvers_from_environment,
)

MARSHALL = """
problem "marshall"
vars v1 v2 v3 v4
assume v1 < 0 and v2 > 0 and v3*v2 - 1 = v4 and v4 = v3*v1
hypothesis v3 > 0 and v4 < 0
"""


def example_query():
    return build_query_trio(parse_problem(MARSHALL)).example_query


def counterexample_query():
    return build_query_trio(parse_problem(MARSHALL)).counterexample_query


def mock_solver(tmp_path, name, body) -> SolverSpec:
    """A solver lane implemented by a small python script."""
    script = tmp_path / f"{name}.py"
    script.write_text(textwrap.dedent(body))
    return SolverSpec(
        name=name,
        command=f"{sys.executable} {script} {{file}}",
        timeout=10.0,
        expects_model=True,
    )


GOOD_MODEL = """\
import sys
print("sat")
print('''(
  (define-fun v1 () Real (- 1))
  (define-fun v2 () Real 1)
  (define-fun v3 () Real (/ 1 2))
  (define-fun v4 () Real (- (/ 1 2)))
)''')
"""

CORRUPT_MODEL = """\
import sys
print("sat")
print('''(
  (define-fun v1 () Real 5)
  (define-fun v2 () Real 1)
  (define-fun v3 () Real 1)
  (define-fun v4 () Real 0)
)''')
"""


class TestLanes:
    def test_unsat_answer(self, tmp_path):
        spec = mock_solver(tmp_path, "mock-unsat", "print('unsat')\n")
        out = run_portfolio(counterexample_query(), [spec])
        assert out.verdict.is_unsat
        assert out.winner == "mock-unsat"

    def test_sat_with_validated_model(self, tmp_path):
        spec = mock_solver(tmp_path, "mock-sat", GOOD_MODEL)
        out = run_portfolio(example_query(), [spec])
        assert out.verdict.is_sat
        assert out.verdict.witness == {
            0: Fraction(-1), 1: Fraction(1), 2: Fraction(1, 2), 3: Fraction(-1, 2),
        }

    def test_corrupt_model_demoted(self, tmp_path):
        spec = mock_solver(tmp_path, "mock-corrupt", CORRUPT_MODEL)
        out = run_portfolio(example_query(), [spec])
        assert out.verdict.is_unknown
        assert out.lanes["mock-corrupt"].note == "model-validation-failed"

    def test_timeout_lane(self, tmp_path):
        spec = mock_solver(tmp_path, "mock-slow", "import time\ntime.sleep(30)\n")
        spec = SolverSpec(spec.name, spec.command, timeout=0.5, expects_model=False)
        start = time.monotonic()
        out = run_portfolio(example_query(), [spec])
        assert time.monotonic() - start < 5
        assert out.verdict.is_unknown
        assert out.verdict.reason == "timeout"

    def test_spawn_failure_not_fatal(self, tmp_path):
        bad = SolverSpec("missing", "/nonexistent/solver-binary {file}", timeout=5.0)
        good = mock_solver(tmp_path, "mock-unsat2", "print('unsat')\n")
        out = run_portfolio(counterexample_query(), [bad, good])
        assert out.verdict.is_unsat
        assert "spawn-failure" in out.lanes["missing"].note

    def test_race_prefers_fast_definitive(self, tmp_path):
        slow = mock_solver(tmp_path, "slow-sat", "import time\ntime.sleep(8)\nprint('sat')\n")
        fast = mock_solver(tmp_path, "fast-unsat", "print('unsat')\n")
        start = time.monotonic()
        out = run_portfolio(counterexample_query(), [slow, fast], race=True)
        assert out.verdict.is_unsat
        assert out.winner == "fast-unsat"
        assert time.monotonic() - start < 6  # loser cancelled, not awaited


class TestSelfHostedLane:
    def test_builtin_engine_as_external_solver(self, tmp_path):
        spec = SolverSpec(
            name="econqe-solve",
            command=f"{sys.executable} -m econqe.solver_cli {{file}} --model",
            timeout=30.0,
            expects_model=True,
        )
        out = run_portfolio(example_query(), [spec])
        assert out.verdict.is_sat
        assert out.verdict.witness is not None
        out = run_portfolio(counterexample_query(), [spec])
        assert out.verdict.is_unsat


class TestConfig:
    def test_ini_loading(self, tmp_path):
        cfg = tmp_path / "solvers.ini"
        cfg.write_text(textwrap.dedent("""\
            [z3]
            cmd = z3 -smt2 {file}
            timeout_ms = 45000
            parses_model = true

            [yices]
            cmd = yices-smt2 {file}
            timeout_ms = 30000
        """))
        specs = load_solver_config(cfg)
        assert [s.name for s in specs] == ["z3", "yices"]
        assert specs[0].timeout == 45.0
        assert specs[0].expects_model is True
        assert specs[1].expects_model is False

    def test_env_var_lookup(self, tmp_path, monkeypatch):
        cfg = tmp_path / "solvers.ini"
        cfg.write_text("[s]\ncmd = solver {file}\n")
        monkeypatch.setenv("ECONQE_SOLVERS", str(cfg))
        specs = solvers_from_environment()
        assert len(specs) == 1 and specs[0].name == "s"
        monkeypatch.delenv("ECONQE_SOLVERS")
        assert solvers_from_environment() == []

    def test_bad_template_rejected(self):
        with pytest.raises(ValueError, match="file"):
            SolverSpec("x", "solver run")
        with pytest.raises(ValueError, match="file"):
            SolverSpec("x", "solver {file} {file}")
