"""CLI subcommands and the HTTP service."""

import json
import threading
import urllib.request
from pathlib import Path

import pytest

from econqe.cli import main as cli_main
from econqe.engine import EngineConfig
from econqe.service import ServiceState, make_server

MARSHALL = (
    'problem "marshall"\n'
    "vars v1 v2 v3 v4\n"
    "assume v1 < 0 and v2 > 0 and v3*v2 - 1 = v4 and v4 = v3*v1\n"
    "hypothesis v3 > 0 and v4 < 0\n"
)

KRUGMAN_PATH = Path(__file__).parent.parent / "src" / "econqe" / "data" / "models" / "0013.econ"


@pytest.fixture()
def marshall_file(tmp_path):
    path = tmp_path / "marshall.econ"
    path.write_text(MARSHALL)
    return str(path)


class TestCli:
    def test_classify_json(self, marshall_file, capsys):
        code = cli_main(["classify", marshall_file, "--json", "--engine", "builtin"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["outcome"] == "True"
        assert doc["queries"]["counterexample"]["status"] == "UNSAT"

    def test_decide_smt2(self, tmp_path, capsys):
        smt2 = tmp_path / "q.smt2"
        smt2.write_text(
            "(set-logic QF_NRA)(declare-fun x () Real)"
            "(assert (and (> x 0) (< x 0)))(check-sat)"
        )
        code = cli_main(["decide", str(smt2), "--json", "--engine", "builtin"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["status"] == "UNSAT"

    def test_qe_side_condition(self, capsys):
        code = cli_main(["qe", str(KRUGMAN_PATH), "--free", "Dw,Sw",
                         "--json", "--engine", "builtin"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["equivalence_checked"] is True
        assert "Dw" in doc["formula_dsl"] and "Sw" in doc["formula_dsl"]

    def test_stats_csv(self, capsys):
        from econqe.corpus import bundled_corpus_root

        code = cli_main(["stats", str(bundled_corpus_root()), "--csv"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("id,clause_count")
        assert len(lines) == 46

    def test_convert_redlog(self, marshall_file, capsys):
        code = cli_main(["convert", marshall_file, "--to", "redlog",
                         "--query", "counterexample"])
        assert code == 0
        out = capsys.readouterr().out
        assert "rlqe" in out and "ex({" in out

    def test_convert_smt2_round(self, marshall_file, capsys):
        code = cli_main(["convert", marshall_file, "--to", "smt2",
                         "--query", "example"])
        assert code == 0
        from econqe.smtlib import parse_smt2

        script = parse_smt2(capsys.readouterr().out)
        assert script.query.vars.names == ("v1", "v2", "v3", "v4")

    def test_fetch_bundled(self, tmp_path, capsys):
        code = cli_main(["fetch", "--bundled", str(tmp_path / "corpus")])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["theorems"] == 45
        assert doc["files"] == 135

    def test_batch_strict_flags_unknowns(self, tmp_path, capsys):
        from econqe.corpus import bundled_corpus_root

        sub = tmp_path / "slice"
        sub.mkdir()
        for name in ("0004", "0005"):
            for path in bundled_corpus_root().glob(f"{name}_*.smt2"):
                (sub / path.name).write_bytes(path.read_bytes())
        code = cli_main(["batch", str(sub), "--json", "--engine", "builtin",
                         "--timeout", "20000", "--strict"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["outcome_counts"] == {"True": 2}

    def test_error_exit_code(self, tmp_path):
        assert cli_main(["classify", str(tmp_path / "missing.econ")]) == 2


@pytest.fixture(scope="module")
def service_url():
    state = ServiceState(cfg=EngineConfig(deadline=20.0), engine_mode="builtin")
    server = make_server("127.0.0.1", 0, state)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}"
    server.shutdown()


def _post(url, path, doc):
    req = urllib.request.Request(
        url + path, data=json.dumps(doc).encode(),
        headers={"Content-Type": "application/json"}, method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read())


def _get(url, path, method="GET"):
    req = urllib.request.Request(url + path, method=method)
    with urllib.request.urlopen(req) as resp:
        return resp.status, json.loads(resp.read())


class TestService:
    def test_classify_endpoint(self, service_url):
        status, doc = _post(service_url, "/api/classify", {"dsl": MARSHALL})
        assert status == 200
        assert doc["outcome"] == "True"
        assert doc["queries"]["example"]["witness"]

    def test_parse_error_carries_position(self, service_url):
        status, doc = _post(service_url, "/api/classify",
                            {"dsl": "vars x\nassume x ?? 0\nhypothesis x > 0"})
        assert status == 400
        assert doc["line"] == 2

    def test_decide_endpoint(self, service_url):
        smt2 = ("(set-logic QF_NRA)(declare-fun x () Real)"
                "(assert (> (* x x) 1))(check-sat)")
        status, doc = _post(service_url, "/api/decide", {"smt2": smt2})
        assert status == 200
        assert doc["status"] == "SAT"

    def test_qe_endpoint(self, service_url):
        body = {"dsl": KRUGMAN_PATH.read_text(), "free": ["Dw", "Sw"]}
        status, doc = _post(service_url, "/api/qe", body)
        assert status == 200
        assert doc["equivalence_checked"] is True

    def test_corpus_endpoints(self, service_url):
        status, doc = _get(service_url, "/api/corpus")
        assert status == 200
        assert doc["theorems"] == 45
        status, doc = _get(service_url, "/api/corpus/0013")
        assert status == 200
        assert "hypothesis" in doc["source"]

    def test_history_trail(self, service_url):
        _get(service_url, "/api/history", method="DELETE")
        _post(service_url, "/api/classify", {"dsl": MARSHALL})
        _post(service_url, "/api/classify", {"dsl": MARSHALL, "parent": 1})
        status, doc = _get(service_url, "/api/history")
        assert status == 200
        assert len(doc["steps"]) == 2
        assert doc["steps"][1]["parent"] == 1
        status, doc = _get(service_url, "/api/history", method="DELETE")
        assert doc["steps"] == []
