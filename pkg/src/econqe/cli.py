"""Command-line entry point: one verb per analysis activity."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .batch import batch_classify, manifest_to_json_dict
from .classify import OutcomeKind, classify_theorem, result_to_json_dict
from .corpus import ZENODO_RECORD_URL, bundled_corpus_root, fetch_corpus, index_corpus
from .dsl import formula_to_dsl, parse_problem, problem_from_json_dict
from .encoders import build_query_trio
from .engine import EngineConfig, decide_existential
from .portfolio import load_solver_config, run_portfolio, solvers_from_environment
from .smtlib import emit_maple, emit_redlog, emit_smt2, parse_smt2
from .stats import aggregate, analyze_problem, report_to_csv, report_to_json_dict
from .whatif import derive_side_condition


def _load_problem(path: str):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return problem_from_json_dict(json.loads(text))
    return parse_problem(text, default_id=Path(path).stem)


def _engine_config(args) -> EngineConfig:
    return EngineConfig(
        seed=args.seed,
        deadline=args.timeout / 1000.0,
        sample_count=args.samples,
    )


def _solvers(args):
    if args.solver_config:
        return load_solver_config(args.solver_config)
    return solvers_from_environment() or None


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--solver-config", metavar="PATH", default=None,
                        help="INI file of external solvers (or set ECONQE_SOLVERS)")
    parser.add_argument("--timeout", type=float, default=60_000, metavar="MS",
                        help="per-query deadline in milliseconds")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=40,
                        help="witness sampling attempts per query")
    parser.add_argument("--engine", choices=["auto", "builtin", "external"],
                        default="auto")
    parser.add_argument("--json", action="store_true", help="machine-readable output")


def cmd_classify(args) -> int:
    p = _load_problem(args.model)
    result = classify_theorem(p, _engine_config(args), _solvers(args), args.engine)
    doc = result_to_json_dict(result, p)
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(f"{p.id}: {result.outcome}")
        for label in ("assumptions", "example", "counterexample"):
            q = doc["queries"].get(label)
            if q:
                extra = f" witness={q['witness']}" if "witness" in q else ""
                print(f"  {label}: {q['status']} [{q['engine']}, {q['millis']:.0f} ms]{extra}")
    if args.strict and result.outcome.kind is OutcomeKind.UNKNOWN:
        return 1
    return 0


def cmd_decide(args) -> int:
    script = parse_smt2(Path(args.query).read_text(encoding="utf-8"))
    cfg = _engine_config(args)
    solvers = _solvers(args)
    if args.engine == "external":
        if not solvers:
            print("no external solvers configured", file=sys.stderr)
            return 2
        verdict = run_portfolio(script.query, solvers).verdict
    else:
        verdict = decide_existential(script.query, cfg)
        if verdict.is_unknown and args.engine == "auto" and solvers:
            verdict = run_portfolio(script.query, solvers).verdict
    if args.json:
        doc = {"status": verdict.status}
        if verdict.reason:
            doc["reason"] = verdict.reason
        if verdict.witness is not None:
            names = script.query.vars.names
            doc["witness"] = {names[i]: str(v) for i, v in sorted(verdict.witness.items())}
        print(json.dumps(doc, indent=2))
    else:
        print(verdict.status + (f" ({verdict.reason})" if verdict.reason else ""))
    if args.strict and verdict.is_unknown:
        return 1
    return 0


def cmd_qe(args) -> int:
    p = _load_problem(args.model)
    free = [n.strip() for n in args.free.split(",") if n.strip()]
    side = derive_side_condition(p, free, _engine_config(args), _solvers(args))
    doc = {
        "formula_dsl": formula_to_dsl(side.condition, p.vars.names),
        "projection_dsl": formula_to_dsl(side.projection, p.vars.names),
        "equivalence_checked": side.equivalence_checked,
        "notes": side.notes,
    }
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print("condition:", doc["formula_dsl"])
        print("verified:", side.equivalence_checked)
        for n in side.notes:
            print("note:", n)
    return 0


def cmd_stats(args) -> int:
    index = index_corpus(args.dir)
    rows = []
    for entry in index.complete_entries:
        queries = entry.load_queries()
        rows.append(analyze_problem(queries["counterexample"], entry.theorem_id))
    if not rows:
        print("no complete corpus entries found", file=sys.stderr)
        return 2
    report = aggregate(rows)
    if args.csv:
        print(report_to_csv(report), end="")
    elif args.json:
        print(json.dumps(report_to_json_dict(report), indent=2))
    else:
        doc = report_to_json_dict(report)
        print(f"problems: {len(rows)}")
        for metric, s in doc["aggregates"].items():
            print(f"  {metric}: min {s['min']} max {s['max']} "
                  f"mean {s['mean']} median {s['median']}")
        print(f"  corpus max per-variable degree: {doc['corpus_max_per_variable_degree']}")
        print(f"  mean occurrence density: {doc['mean_occurrence_density_2dp']}")
    return 0


def cmd_convert(args) -> int:
    if args.infile.endswith(".smt2"):
        query = parse_smt2(Path(args.infile).read_text(encoding="utf-8")).query
    else:
        p = _load_problem(args.infile)
        trio = build_query_trio(p)
        query = {
            "assumptions": trio.assumptions_query,
            "example": trio.example_query,
            "counterexample": trio.counterexample_query,
        }[args.query]
    emit = {"smt2": emit_smt2, "redlog": emit_redlog, "maple": emit_maple}[args.to]
    print(emit(query), end="")
    return 0


def cmd_fetch(args) -> int:
    source = args.url
    if args.bundled:
        source = None
    index = fetch_corpus(source, args.dest)
    print(json.dumps(index.summary(), indent=2))
    return 0


def cmd_batch(args) -> int:
    root = args.dir if args.dir else bundled_corpus_root()
    index = index_corpus(root)
    manifest = batch_classify(
        index, _engine_config(args), _solvers(args),
        workers=args.workers, engine_mode=args.engine,
    )
    doc = manifest_to_json_dict(manifest)
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2), encoding="utf-8")
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(f"classified {len(manifest.rows)} theorems in {manifest.wall_seconds:.1f} s")
        print("outcomes:", doc["outcome_counts"])
        print("counterexample statuses:", doc["counterexample_status_counts"])
    unknowns = doc["outcome_counts"].get("Unknown", 0)
    if args.strict and unknowns:
        return 1
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(host=args.host, port=args.port, cfg=_engine_config(args),
          solvers=_solvers(args), engine_mode=args.engine,
          static_dir=args.static)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="econqe",
        description="Classify potential economic theorems over nonlinear real arithmetic",
    )
    parser.add_argument("--version", action="version", version=f"econqe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify one model (DSL or JSON)")
    p.add_argument("model")
    p.add_argument("--strict", action="store_true")
    _common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("decide", help="decide one SMT2 existential query")
    p.add_argument("query")
    p.add_argument("--strict", action="store_true")
    _common(p)
    p.set_defaults(fn=cmd_decide)

    p = sub.add_parser("qe", help="derive a side condition over free variables")
    p.add_argument("model")
    p.add_argument("--free", required=True, metavar="v1,v2")
    _common(p)
    p.set_defaults(fn=cmd_qe)

    p = sub.add_parser("stats", help="structural statistics of a corpus directory")
    p.add_argument("dir")
    p.add_argument("--csv", action="store_true")
    _common(p)
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("convert", help="emit a query as smt2/redlog/maple text")
    p.add_argument("infile")
    p.add_argument("--to", choices=["smt2", "redlog", "maple"], required=True)
    p.add_argument("--query", choices=["assumptions", "example", "counterexample"],
                   default="counterexample")
    _common(p)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("fetch", help="download or unpack the benchmark corpus")
    p.add_argument("--url", default=ZENODO_RECORD_URL,
                   help="archive URL, local archive, or directory")
    p.add_argument("--bundled", action="store_true",
                   help="copy the bundled reference corpus instead of downloading")
    p.add_argument("dest")
    p.set_defaults(fn=cmd_fetch)

    p = sub.add_parser("batch", help="classify a corpus directory")
    p.add_argument("dir", nargs="?", default=None,
                   help="corpus directory (default: bundled corpus)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", metavar="PATH", help="write the run manifest JSON here")
    p.add_argument("--strict", action="store_true")
    _common(p)
    p.set_defaults(fn=cmd_batch)

    p = sub.add_parser("serve", help="run the HTTP analysis service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--static", metavar="DIR", default=None,
                   help="also serve this directory (e.g. the browser console)")
    _common(p)
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
