"""Batch classification over a corpus with a worker pool and run manifest."""

from __future__ import annotations

import json
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import __version__
from .classify import (
    Outcome, OutcomeKind, QueryRecord, _decide_with_escalation, interpret_pair,
)
from .corpus import CorpusEntry, CorpusIndex, QUERY_ROLES
from .engine import EngineConfig


@dataclass
class ManifestRow:
    theorem_id: str
    outcome: Outcome
    queries: dict[str, QueryRecord] = field(default_factory=dict)
    error: Optional[str] = None


@dataclass
class RunManifest:
    config: dict
    rows: list[ManifestRow]
    wall_seconds: float
    tool_version: str = __version__
    platform: str = platform.platform()

    def outcome_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for row in self.rows:
            counts[row.outcome.kind.value] = counts.get(row.outcome.kind.value, 0) + 1
        return counts

    def counterexample_status_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for row in self.rows:
            rec = row.queries.get("counterexample")
            if rec is not None:
                counts[rec.verdict.status] = counts.get(rec.verdict.status, 0) + 1
        return counts


def classify_entry(
    entry: CorpusEntry,
    cfg: EngineConfig,
    solvers: Optional[Sequence] = None,
    engine_mode: str = "auto",
) -> ManifestRow:
    """Run the trio for one corpus entry, assumptions first."""
    row = ManifestRow(theorem_id=entry.theorem_id,
                      outcome=Outcome(OutcomeKind.UNKNOWN, "pending: not-run"))
    try:
        queries = entry.load_queries()
    except Exception as e:
        row.outcome = Outcome(OutcomeKind.UNKNOWN, f"load-error: {e}")
        row.error = str(e)
        return row
    missing = [r for r in QUERY_ROLES if r not in queries]
    if missing:
        row.outcome = Outcome(OutcomeKind.UNKNOWN, f"incomplete: missing {','.join(missing)}")
        return row
    row.queries["assumptions"] = _decide_with_escalation(
        queries["assumptions"], cfg, solvers, engine_mode)
    if row.queries["assumptions"].verdict.is_unsat:
        row.outcome = Outcome(OutcomeKind.CONTRADICTORY_ASSUMPTIONS)
        return row
    for role in ("example", "counterexample"):
        row.queries[role] = _decide_with_escalation(queries[role], cfg, solvers, engine_mode)
    row.outcome = interpret_pair(
        row.queries["example"].verdict, row.queries["counterexample"].verdict)
    return row


def batch_classify(
    index: CorpusIndex,
    cfg: Optional[EngineConfig] = None,
    solvers: Optional[Sequence] = None,
    workers: int = 1,
    engine_mode: str = "auto",
) -> RunManifest:
    """Classify every complete entry; manifest rows come out in id order."""
    cfg = cfg or EngineConfig()
    entries = index.complete_entries
    start = time.monotonic()
    if workers <= 1:
        rows = [classify_entry(e, cfg, solvers, engine_mode) for e in entries]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                lambda e: classify_entry(e, cfg, solvers, engine_mode), entries))
    rows.sort(key=lambda r: r.theorem_id)
    config_snapshot = {
        "sample_count": cfg.sample_count,
        "seed": cfg.seed,
        "dnf_clause_cap": cfg.dnf_clause_cap,
        "deadline": cfg.deadline,
        "engine_mode": engine_mode,
        "solvers": [s.name for s in solvers] if solvers else [],
        "workers": workers,
        "corpus_digest": index.digest,
    }
    return RunManifest(
        config=config_snapshot,
        rows=rows,
        wall_seconds=time.monotonic() - start,
    )


def manifest_to_json_dict(manifest: RunManifest) -> dict:
    rows = []
    for row in manifest.rows:
        entry: dict = {"id": row.theorem_id, "outcome": row.outcome.kind.value}
        if row.outcome.detail:
            entry["outcome_detail"] = row.outcome.detail
        if row.error:
            entry["error"] = row.error
        queries = {}
        for role, rec in row.queries.items():
            q: dict = {
                "status": rec.verdict.status,
                "engine": rec.engine,
                "millis": round(rec.millis, 3),
            }
            if rec.verdict.reason:
                q["reason"] = rec.verdict.reason
            if rec.verdict.witness is not None:
                q["witness"] = {str(k): str(v) for k, v in sorted(rec.verdict.witness.items())}
            queries[role] = q
        entry["queries"] = queries
        rows.append(entry)
    return {
        "config": manifest.config,
        "tool_version": manifest.tool_version,
        "platform": manifest.platform,
        "wall_seconds": round(manifest.wall_seconds, 3),
        "outcome_counts": manifest.outcome_counts(),
        "counterexample_status_counts": manifest.counterexample_status_counts(),
        "rows": rows,
    }
