"""Corpus acquisition and indexing.

A corpus directory holds, per theorem, either the three SMT2 query files
(`<id>_assumptions.smt2`, `<id>_example.smt2`, `<id>_counterexample.smt2`)
or a single `.econ` model.  The indexer clusters files by stem, records
its grouping for human review, verifies the expected 45/135 counts, and
fingerprints the content.

A bundled 45-theorem reference corpus ships with the package for offline
use; `fetch_corpus` handles the hosted archive, a local archive, or a
plain directory.
"""

from __future__ import annotations

import hashlib
import io
import json
import re
import tarfile
import urllib.request
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .dsl import parse_problem
from .problem import ExistentialQuery, TheoremProblem
from .smtlib import parse_smt2

ZENODO_RECORD_URL = "https://doi.org/10.5281/zenodo.1226892"

QUERY_ROLES = ("assumptions", "example", "counterexample")

EXPECTED_THEOREMS = 45
EXPECTED_FILES = 135

_SMT2_NAME = re.compile(r"^(?P<id>.+?)[_-](?P<role>assumptions|example|counterexample)\.smt2$")


@dataclass
class CorpusEntry:
    theorem_id: str
    format: str  # "smt2-trio" or "econ"
    files: dict[str, Path] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        if self.format == "econ":
            return "model" in self.files
        return all(role in self.files for role in QUERY_ROLES)

    def load_queries(self) -> dict[str, ExistentialQuery]:
        """The three existential checks of this theorem."""
        if self.format == "econ":
            from .encoders import build_query_trio

            problem = self.load_problem()
            trio = build_query_trio(problem)
            return {
                "assumptions": trio.assumptions_query,
                "example": trio.example_query,
                "counterexample": trio.counterexample_query,
            }
        out = {}
        for role in QUERY_ROLES:
            if role in self.files:
                script = parse_smt2(self.files[role].read_text(encoding="utf-8"))
                query = script.query
                order_text = script.info.get("suggested-order")
                if order_text:
                    names = order_text.split()
                    if sorted(names) == sorted(query.vars.names):
                        from .polynomial import VariableTable

                        table = VariableTable(
                            query.vars.names,
                            suggested_order=[query.vars.names.index(n) for n in names],
                        )
                        query = ExistentialQuery(table, query.quantified, query.matrix)
                out[role] = query
        return out

    def load_problem(self) -> TheoremProblem:
        if self.format != "econ":
            raise ValueError(f"{self.theorem_id}: smt2 trios carry queries, not one model")
        return parse_problem(self.files["model"].read_text(encoding="utf-8"),
                             default_id=self.theorem_id)


@dataclass
class CorpusIndex:
    root: Path
    entries: list[CorpusEntry]
    warnings: list[str] = field(default_factory=list)
    digest: str = ""
    grouping_notes: list[str] = field(default_factory=list)

    def by_id(self, theorem_id: str) -> CorpusEntry:
        for e in self.entries:
            if e.theorem_id == theorem_id:
                return e
        raise KeyError(theorem_id)

    @property
    def complete_entries(self) -> list[CorpusEntry]:
        return [e for e in self.entries if e.complete]

    def summary(self) -> dict:
        return {
            "root": str(self.root),
            "theorems": len(self.entries),
            "complete": len(self.complete_entries),
            "files": sum(len(e.files) for e in self.entries),
            "digest": self.digest,
            "warnings": list(self.warnings),
        }


def index_corpus(root: Path | str) -> CorpusIndex:
    """Scan a directory; cluster SMT2 files by stem, adopt .econ models."""
    root = Path(root)
    entries: dict[str, CorpusEntry] = {}
    notes: list[str] = []
    warnings: list[str] = []
    hasher = hashlib.sha256()
    files = sorted(p for p in root.rglob("*") if p.is_file())
    for path in files:
        if path.suffix == ".smt2":
            m = _SMT2_NAME.match(path.name)
            if not m:
                warnings.append(f"unrecognized smt2 filename {path.name}")
                continue
            tid, role = m.group("id"), m.group("role")
            entry = entries.setdefault(tid, CorpusEntry(tid, "smt2-trio"))
            entry.files[role] = path
            notes.append(f"{path.name} -> theorem {tid} ({role})")
        elif path.suffix == ".econ":
            tid = path.stem
            entry = entries.setdefault(tid, CorpusEntry(tid, "econ"))
            entry.files["model"] = path
            notes.append(f"{path.name} -> theorem {tid} (model)")
        else:
            continue
        hasher.update(path.name.encode())
        hasher.update(path.read_bytes())
    index = CorpusIndex(
        root=root,
        entries=sorted(entries.values(), key=lambda e: e.theorem_id),
        digest=hasher.hexdigest(),
        grouping_notes=notes,
    )
    smt2_count = sum(len(e.files) for e in index.entries if e.format == "smt2-trio")
    if not index.entries:
        index.warnings.append("no corpus files found")
    elif smt2_count and smt2_count != EXPECTED_FILES:
        index.warnings.append(
            f"expected {EXPECTED_FILES} SMT2 files, found {smt2_count}; proceeding"
        )
    for e in index.entries:
        if not e.complete:
            index.warnings.append(f"theorem {e.theorem_id} is incomplete")
    return index


def bundled_corpus_root() -> Path:
    return Path(__file__).parent / "data" / "corpus"


def fetch_corpus(source: Optional[str], dest: Path | str) -> CorpusIndex:
    """Download or unpack a corpus into dest and index it.

    `source` may be an http(s) URL, a local .zip/.tar archive, a directory,
    or None for the bundled reference corpus.
    """
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    if source is None:
        root = bundled_corpus_root()
        for path in sorted(root.glob("*")):
            (dest / path.name).write_bytes(path.read_bytes())
        return index_corpus(dest)
    if source.startswith("http://") or source.startswith("https://"):
        with urllib.request.urlopen(source) as resp:
            payload = resp.read()
        _unpack_bytes(payload, source, dest)
        return index_corpus(dest)
    src = Path(source)
    if src.is_dir():
        return index_corpus(src)
    _unpack_bytes(src.read_bytes(), src.name, dest)
    return index_corpus(dest)


def _unpack_bytes(payload: bytes, name: str, dest: Path) -> None:
    if zipfile.is_zipfile(io.BytesIO(payload)):
        with zipfile.ZipFile(io.BytesIO(payload)) as zf:
            for info in zf.infolist():
                if info.is_dir():
                    continue
                target = dest / Path(info.filename).name
                target.write_bytes(zf.read(info))
        return
    try:
        with tarfile.open(fileobj=io.BytesIO(payload)) as tf:
            for member in tf.getmembers():
                if not member.isfile():
                    continue
                fh = tf.extractfile(member)
                if fh is None:
                    continue
                (dest / Path(member.name).name).write_bytes(fh.read())
        return
    except tarfile.TarError:
        raise ValueError(f"{name}: not a zip or tar archive")
