"""Standalone SMT2 solver front end over the builtin engine.

Reads one script, prints sat/unsat/unknown on the first line and, for sat
with `--model`, a get-model style block.  This makes the builtin engine
usable as a portfolio lane over the same process protocol as any other
solver.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .engine import EngineConfig, decide_existential
from .smtlib import SmtError, parse_smt2, smt_symbol


def _model_block(witness, table) -> str:
    lines = ["("]
    for v in table:
        value = witness.get(v.index, Fraction(0))
        if value.denominator == 1:
            body = str(value.numerator) if value >= 0 else f"(- {-value.numerator})"
        else:
            body = f"(/ {abs(value.numerator)} {value.denominator})"
            if value < 0:
                body = f"(- {body})"
        lines.append(f"  (define-fun {smt_symbol(v.name)} () Real {body})")
    lines.append(")")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="econqe-solve",
                                     description="decide one SMT-LIB 2 QF_NRA script")
    parser.add_argument("file", help="path to the .smt2 script")
    parser.add_argument("--model", action="store_true", help="print a model on sat")
    parser.add_argument("--timeout", type=float, default=60.0, help="seconds")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            script = parse_smt2(fh.read())
    except (OSError, SmtError) as e:
        print("unknown")
        print(f"error: {e}", file=sys.stderr)
        return 1

    cfg = EngineConfig(deadline=args.timeout, seed=args.seed)
    verdict = decide_existential(script.query, cfg)
    print(verdict.status.lower())
    if verdict.is_sat and args.model and verdict.witness is not None:
        print(_model_block(verdict.witness, script.query.vars))
    if verdict.is_unknown and verdict.reason:
        print(f"reason: {verdict.reason}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
