"""HTTP JSON facade over classification, decision, and QE.

A thin stateless wrapper for a single analyst on localhost: every request
runs the same library calls the CLI uses, and the only state is an
in-memory session history (a forest of what-if steps) guarded by a lock
and exported on demand.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional, Sequence

from .classify import classify_theorem, result_to_json_dict
from .corpus import bundled_corpus_root, index_corpus
from .dsl import ParseError, formula_to_dsl, parse_problem, problem_from_json_dict
from .engine import EngineConfig, decide_existential
from .smtlib import SmtError, parse_smt2
from .whatif import derive_side_condition


class SessionStore:
    """Immutable what-if steps forming a forest via parent references."""

    def __init__(self):
        self._lock = threading.Lock()
        self._steps: list[dict] = []

    def append(self, kind: str, submitted: dict, result: dict,
               parent: Optional[int] = None) -> int:
        with self._lock:
            step_id = len(self._steps) + 1
            self._steps.append({
                "id": step_id,
                "parent": parent,
                "kind": kind,
                "submitted": submitted,
                "result": result,
                "timestamp": time.time(),
            })
            return step_id

    def export(self) -> list[dict]:
        with self._lock:
            return [dict(s) for s in self._steps]

    def clear(self) -> None:
        with self._lock:
            self._steps.clear()


@dataclass
class ServiceState:
    cfg: EngineConfig
    solvers: Optional[Sequence] = None
    engine_mode: str = "auto"
    corpus_root: Optional[Path] = None
    static_dir: Optional[Path] = None
    history: SessionStore = field(default_factory=SessionStore)

    def corpus_index(self):
        root = self.corpus_root or bundled_corpus_root()
        return index_corpus(root)


def _problem_from_body(body: dict):
    if "dsl" in body:
        return parse_problem(body["dsl"])
    return problem_from_json_dict(body)


class _Handler(BaseHTTPRequestHandler):
    state: ServiceState  # assigned by serve()

    # -- plumbing ---------------------------------------------------------

    def _send(self, code: int, doc) -> None:
        payload = json.dumps(doc).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(payload)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if not length:
            return {}
        return json.loads(self.rfile.read(length))

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def do_OPTIONS(self):
        self._send(204, {})

    # -- routes -------------------------------------------------------------

    def do_GET(self):
        try:
            if self.path == "/api/history":
                return self._send(200, {"steps": self.state.history.export()})
            if self.path == "/api/corpus":
                return self._send(200, self.state.corpus_index().summary())
            if self.path.startswith("/api/corpus/"):
                tid = self.path.rsplit("/", 1)[1]
                index = self.state.corpus_index()
                try:
                    entry = index.by_id(tid)
                except KeyError:
                    return self._send(404, {"error": f"no theorem {tid}"})
                if entry.format == "econ":
                    source = entry.files["model"].read_text(encoding="utf-8")
                else:
                    models = bundled_corpus_root().parent / "models" / f"{tid}.econ"
                    if models.exists():
                        source = models.read_text(encoding="utf-8")
                    else:
                        source = entry.files["counterexample"].read_text(encoding="utf-8")
                return self._send(200, {"id": tid, "source": source})
            if self.state.static_dir is not None:
                return self._static()
            return self._send(404, {"error": "unknown endpoint"})
        except Exception as e:
            return self._send(500, {"error": str(e)})

    def do_DELETE(self):
        if self.path == "/api/history":
            self.state.history.clear()
            return self._send(200, {"steps": []})
        return self._send(404, {"error": "unknown endpoint"})

    def do_POST(self):
        try:
            body = self._body()
        except (ValueError, json.JSONDecodeError) as e:
            return self._send(400, {"error": f"bad JSON: {e}"})
        try:
            if self.path == "/api/classify":
                return self._classify(body)
            if self.path == "/api/qe":
                return self._qe(body)
            if self.path == "/api/decide":
                return self._decide(body)
            return self._send(404, {"error": "unknown endpoint"})
        except ParseError as e:
            return self._send(400, {"error": str(e), "line": e.line, "col": e.col})
        except (SmtError, ValueError) as e:
            return self._send(400, {"error": str(e)})
        except Exception as e:
            return self._send(500, {"error": str(e)})

    # -- handlers -------------------------------------------------------------

    def _classify(self, body: dict):
        st = self.state
        problem = _problem_from_body(body)
        result = classify_theorem(problem, st.cfg, st.solvers, st.engine_mode)
        doc = result_to_json_dict(result, problem)
        step = st.history.append("classify", body, doc, body.get("parent"))
        doc["step"] = step
        return self._send(200, doc)

    def _qe(self, body: dict):
        st = self.state
        problem = _problem_from_body(body)
        free = body.get("free") or sorted(
            problem.vars[i].name for i in problem.free_vars)
        if not free:
            return self._send(400, {"error": "no free variables selected"})
        side = derive_side_condition(problem, free, st.cfg, st.solvers)
        doc = {
            "formula_dsl": formula_to_dsl(side.condition, problem.vars.names),
            "projection_dsl": formula_to_dsl(side.projection, problem.vars.names),
            "equivalence_checked": side.equivalence_checked,
            "notes": side.notes,
        }
        step = st.history.append("qe", body, doc, body.get("parent"))
        doc["step"] = step
        return self._send(200, doc)

    def _decide(self, body: dict):
        st = self.state
        if "smt2" not in body:
            return self._send(400, {"error": "body needs an 'smt2' field"})
        script = parse_smt2(body["smt2"])
        verdict = decide_existential(script.query, st.cfg)
        if verdict.is_unknown and st.solvers and st.engine_mode != "builtin":
            from .portfolio import run_portfolio

            verdict = run_portfolio(script.query, list(st.solvers)).verdict
        doc: dict = {"status": verdict.status}
        if verdict.reason:
            doc["reason"] = verdict.reason
        if verdict.witness is not None:
            names = script.query.vars.names
            doc["witness"] = {names[i]: str(v) for i, v in sorted(verdict.witness.items())}
        return self._send(200, doc)

    # -- static files (optional, for the browser console) --------------------

    _MIME = {".html": "text/html", ".js": "text/javascript", ".css": "text/css",
             ".map": "application/json"}

    def _static(self):
        assert self.state.static_dir is not None
        rel = self.path.lstrip("/") or "index.html"
        target = (self.state.static_dir / rel).resolve()
        if not str(target).startswith(str(self.state.static_dir.resolve())) or not target.is_file():
            return self._send(404, {"error": "not found"})
        payload = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", self._MIME.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)


def make_server(host: str, port: int, state: ServiceState) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"state": state})
    return ThreadingHTTPServer((host, port), handler)


def serve(host: str = "127.0.0.1", port: int = 8765,
          cfg: Optional[EngineConfig] = None, solvers=None,
          engine_mode: str = "auto", corpus_root=None, static_dir=None) -> None:
    state = ServiceState(
        cfg=cfg or EngineConfig(),
        solvers=solvers,
        engine_mode=engine_mode,
        corpus_root=Path(corpus_root) if corpus_root else None,
        static_dir=Path(static_dir) if static_dir else None,
    )
    server = make_server(host, port, state)
    print(f"econqe service on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
