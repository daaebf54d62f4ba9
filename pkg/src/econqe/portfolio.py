"""External solver portfolio: process lanes with timeouts and validation.

Each solver lane owns its process and temp file.  In race mode the first
definitive answer wins and the losers are terminated (then killed after a
grace period).  SAT answers carrying a parsable model are validated by
exact evaluation and demoted to UNKNOWN on mismatch; spawn failures and
timeouts never take the portfolio down.
"""

from __future__ import annotations

import configparser
import os
import shlex
import subprocess
import tempfile
import threading
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .engine import Verdict, VerdictStatus
from .formula import evaluate_at
from .problem import ExistentialQuery
from .smtlib import emit_smt2, parse_model

SOLVER_ENV_VAR = "ECONQE_SOLVERS"
_KILL_GRACE = 0.5  # seconds between terminate and kill


@dataclass(frozen=True)
class SolverSpec:
    """One external solver: a command template with a {file} placeholder."""

    name: str
    command: str
    timeout: float = 60.0
    expects_model: bool = False

    def __post_init__(self):
        if self.command.count("{file}") != 1:
            raise ValueError(f"solver {self.name!r}: command needs exactly one {{file}}")
        if self.timeout <= 0:
            raise ValueError(f"solver {self.name!r}: timeout must be positive")

    def argv(self, file: str) -> list[str]:
        return [a.replace("{file}", file) for a in shlex.split(self.command)]


@dataclass
class ExternalResult:
    status: str
    raw_model: Optional[str] = None
    witness: Optional[dict[int, Fraction]] = None
    stderr_excerpt: str = ""
    duration: float = 0.0
    note: str = ""


def load_solver_config(path: str | os.PathLike) -> list[SolverSpec]:
    """INI config, one section per solver: cmd, timeout_ms, parses_model."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(path)
    specs = []
    for section in parser.sections():
        sec = parser[section]
        if "cmd" not in sec:
            raise ValueError(f"solver section [{section}] is missing 'cmd'")
        specs.append(SolverSpec(
            name=section,
            command=sec["cmd"],
            timeout=int(sec.get("timeout_ms", "60000")) / 1000.0,
            expects_model=sec.getboolean("parses_model", fallback=False),
        ))
    return specs


def solvers_from_environment() -> list[SolverSpec]:
    path = os.environ.get(SOLVER_ENV_VAR)
    if not path:
        return []
    return load_solver_config(path)


class _LaneRegistry:
    """Live process handles, so a race can cancel the losing lanes."""

    def __init__(self):
        self._procs: dict[str, subprocess.Popen] = {}
        self._lock = threading.Lock()

    def register(self, name: str, proc: subprocess.Popen) -> None:
        with self._lock:
            self._procs[name] = proc

    def cancel_all_except(self, winner: Optional[str]) -> None:
        with self._lock:
            procs = dict(self._procs)
        for name, proc in procs.items():
            if name == winner or proc.poll() is not None:
                continue
            proc.terminate()
            try:
                proc.wait(timeout=_KILL_GRACE)
            except subprocess.TimeoutExpired:
                proc.kill()


def _run_lane(
    spec: SolverSpec,
    script: str,
    query: ExistentialQuery,
    registry: Optional[_LaneRegistry] = None,
) -> ExternalResult:
    start = time.monotonic()
    with tempfile.NamedTemporaryFile(
        "w", suffix=".smt2", prefix=f"econqe-{spec.name}-", delete=False
    ) as tmp:
        tmp.write(script)
        path = tmp.name
    proc = None
    try:
        try:
            proc = subprocess.Popen(
                spec.argv(path),
                stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
            )
        except OSError as e:
            return ExternalResult(status=VerdictStatus.UNKNOWN, note=f"spawn-failure: {e}",
                                  duration=time.monotonic() - start)
        if registry is not None:
            registry.register(spec.name, proc)
        try:
            out, err = proc.communicate(timeout=spec.timeout)
        except subprocess.TimeoutExpired:
            proc.terminate()
            try:
                proc.wait(timeout=_KILL_GRACE)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
            return ExternalResult(status=VerdictStatus.UNKNOWN, note="timeout",
                                  duration=time.monotonic() - start)
        duration = time.monotonic() - start
        answer = ""
        for line in out.splitlines():
            line = line.strip()
            if line in ("sat", "unsat", "unknown"):
                answer = line
                break
        excerpt = err.strip()[:500]
        if answer == "unsat":
            return ExternalResult(status=VerdictStatus.UNSAT, stderr_excerpt=excerpt,
                                  duration=duration)
        if answer == "sat":
            result = ExternalResult(status=VerdictStatus.SAT, stderr_excerpt=excerpt,
                                    duration=duration)
            if spec.expects_model:
                first_nl = out.find("\n")
                model_text = out[first_nl + 1:] if first_nl >= 0 else ""
                result.raw_model = model_text or None
                parsed = parse_model(model_text, query.vars)
                if parsed.unparsed:
                    result.note = "unvalidated-model"
                elif parsed.witness is not None:
                    if evaluate_at(query.matrix, parsed.witness):
                        result.witness = parsed.witness
                    else:
                        result.status = VerdictStatus.UNKNOWN
                        result.note = "model-validation-failed"
            return result
        return ExternalResult(status=VerdictStatus.UNKNOWN, stderr_excerpt=excerpt,
                              note=answer or "no-answer", duration=duration)
    finally:
        if proc is not None and proc.poll() is None:
            proc.kill()
        try:
            os.unlink(path)
        except OSError:
            pass


@dataclass
class PortfolioOutcome:
    verdict: Verdict
    winner: Optional[str]
    lanes: dict[str, ExternalResult] = field(default_factory=dict)


def run_portfolio(
    query: ExistentialQuery,
    solvers: Sequence[SolverSpec],
    race: bool = False,
) -> PortfolioOutcome:
    """Run solver lanes until one is definitive.

    Sequential by default; `race=True` launches all lanes and cancels the
    losers once a definitive SAT/UNSAT lands.
    """
    if not solvers:
        raise ValueError("portfolio needs at least one solver")
    script = emit_smt2(query, get_model=any(s.expects_model for s in solvers))
    lanes: dict[str, ExternalResult] = {}

    def verdict_of(spec: SolverSpec, res: ExternalResult) -> Optional[Verdict]:
        if res.status == VerdictStatus.UNSAT:
            return Verdict(VerdictStatus.UNSAT)
        if res.status == VerdictStatus.SAT:
            return Verdict(VerdictStatus.SAT, witness=res.witness,
                           reason=res.note or None)
        return None

    if not race:
        for spec in solvers:
            res = _run_lane(spec, script, query)
            lanes[spec.name] = res
            v = verdict_of(spec, res)
            if v is not None:
                return PortfolioOutcome(verdict=v, winner=spec.name, lanes=lanes)
    else:
        registry = _LaneRegistry()
        with ThreadPoolExecutor(max_workers=len(solvers)) as pool:
            futures = {pool.submit(_run_lane, s, script, query, registry): s for s in solvers}
            pending = set(futures)
            winner = None
            verdict = None
            while pending and verdict is None:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    spec = futures[fut]
                    res = fut.result()
                    lanes[spec.name] = res
                    v = verdict_of(spec, res)
                    if v is not None and verdict is None:
                        verdict = v
                        winner = spec.name
            if verdict is not None:
                registry.cancel_all_except(winner)
                for fut in pending:
                    spec = futures[fut]
                    res = fut.result()
                    if res.status == VerdictStatus.UNKNOWN and res.note != "timeout":
                        res.note = "cancelled"
                    lanes[spec.name] = res
                return PortfolioOutcome(verdict=verdict, winner=winner, lanes=lanes)

    if any(r.note == "timeout" for r in lanes.values()):
        reason = "timeout"
    else:
        reason = next((r.note for r in lanes.values() if r.note), "no-definitive-answer")
    return PortfolioOutcome(
        verdict=Verdict(VerdictStatus.UNKNOWN, reason=reason), winner=None, lanes=lanes,
    )
