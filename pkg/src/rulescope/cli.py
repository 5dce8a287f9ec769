"""Command-line interface: ``rulescope <command> ...``.

Exit codes: 0 success or true, 1 false, 2 parse or validation error,
3 iteration limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .consequence import METHODS, SCORE, IterationLimitExceeded, applicability_report, schema_closure
from .formats import (
    ParseError,
    load_graph,
    load_rules,
    load_schema,
    serialize_graph,
    serialize_rules,
    serialize_schema,
)
from .genbench import GenParams, generate, read_grid, run_bench, write_csv
from .oracle import EnumBounds, check_methods_agree, check_against_rules
from .rules import RuleError, apply_rule_once, closure_instance
from .schema import SchemaError, is_instance, schema_equiv

OK, FALSE, INVALID, LIMIT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(INVALID)


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_consequence(a):
    S, R = load_schema(a.schema), load_rules(a.rules)
    rep = schema_closure(S, R, a.method)
    _write(serialize_schema(rep.output), a.out)
    print(f"iterations: {rep.iterations}", file=sys.stderr if a.out in (None, "-") else sys.stdout)
    return OK


def cmd_applicable(a):
    S, R = load_schema(a.schema), load_rules(a.rules)
    for name, ok in applicability_report(S, R, a.method, fast=a.fast).items():
        print(f"{name} {'true' if ok else 'false'}")
    return OK


def cmd_apply(a):
    G, R = load_graph(a.graph), load_rules(a.rules)
    if a.closure:
        out = closure_instance(G, R, strategy="seminaive")
    else:
        out = G
        for r in R:
            out = out | apply_rule_once(r, G)
    _write(serialize_graph(out), a.out)
    return OK


def cmd_check_instance(a):
    ok = is_instance(load_graph(a.graph), load_schema(a.schema))
    print("true" if ok else "false")
    return OK if ok else FALSE


def cmd_equiv(a):
    ok = schema_equiv(load_schema(a.a), load_schema(a.b))
    print("true" if ok else "false")
    return OK if ok else FALSE


def cmd_gen(a):
    p = GenParams(pi_c=a.pic, n_p=a.np, n_u=a.nu, n_l=a.nl, n_s=a.ns, n_r=a.nr, n_a=a.na, seed=a.seed)
    S, R = generate(p)
    _write(serialize_schema(S), a.out_schema)
    _write(serialize_rules(R), a.out_rules)
    return OK


def cmd_bench(a):
    with open(a.grid, encoding="utf-8") as fh:
        grid = read_grid(json.load(fh))
    methods = a.methods.split(",") if a.methods else METHODS

    def progress(row):
        p = row.params
        state = "timeout" if row.timed_out else f"{row.elapsed_ms:.1f} ms"
        print(f"{row.method} ns={p.n_s} nr={p.n_r} na={p.n_a}: {state}", file=sys.stderr)

    rows = run_bench(grid, methods, a.reps, a.timeout_secs, progress)
    if a.csv in (None, "-"):
        write_csv(rows, sys.stdout)
    else:
        with open(a.csv, "w", newline="", encoding="utf-8") as fh:
            write_csv(rows, fh)
    return OK


def cmd_oracle(a):
    S, R = load_schema(a.schema), load_rules(a.rules)
    b = EnumBounds(a.uris, a.lits, a.max_triples)
    all_ok = True
    for r in R:
        t1 = check_methods_agree(S, r)
        rep = check_against_rules(S, r, b, exact=a.exact)
        ok = t1 and rep.ok
        all_ok = all_ok and ok
        line = f"{r.name} agree={str(t1).lower()} sound={str(rep.sound).lower()} tight={str(rep.tight).lower()}"
        if rep.exact is not None:
            line += f" exact={str(rep.exact).lower()}"
        print(line)
        if rep.counterexample is not None:
            I, t, p = rep.counterexample
            print(f"  counterexample: instance={None if I is None else sorted(I.sorted())} triple={t} pattern={p}")
    return OK if all_ok else FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rulescope", description="Rule applicability and schema consequences for RDF triplestore schemas.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("consequence", help="close a schema under a rule set")
    p.add_argument("--schema", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--method", choices=METHODS, default=SCORE)
    p.add_argument("--out")
    p.set_defaults(func=cmd_consequence)

    p = sub.add_parser("applicable", help="report which rules can fire on some instance")
    p.add_argument("--schema", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--method", choices=METHODS, default=SCORE)
    p.add_argument("--fast", action="store_true", help="one joint closure instead of one per rule")
    p.set_defaults(func=cmd_applicable)

    p = sub.add_parser("apply", help="apply rules to a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--closure", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("check-instance", help="is the graph an instance of the schema")
    p.add_argument("--graph", required=True)
    p.add_argument("--schema", required=True)
    p.set_defaults(func=cmd_check_instance)

    p = sub.add_parser("equiv", help="do two schemas have the same instances")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("gen", help="generate a random schema and rule set")
    p.add_argument("--pic", type=float, default=0.1)
    for flag, default in (("--np", 15), ("--nu", 10), ("--nl", 10), ("--ns", 10), ("--nr", 4), ("--na", 2), ("--seed", 0)):
        p.add_argument(flag, type=int, default=default)
    p.add_argument("--out-schema", required=True)
    p.add_argument("--out-rules", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time both methods over a JSON grid of generator parameters")
    p.add_argument("--grid", required=True)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--timeout-secs", type=float, default=600.0)
    p.add_argument("--methods", help="comma-separated subset of score,critical")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="check both methods against brute-force rule application")
    p.add_argument("--schema", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--uris", type=int, default=2)
    p.add_argument("--lits", type=int, default=1)
    p.add_argument("--max-triples", type=int, default=5)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else INVALID
    try:
        return a.func(a)
    except ParseError as e:
        for d in e.diagnostics:
            print(f"{e.path}:{d}" if e.path else str(d), file=sys.stderr)
        return INVALID
    except (SchemaError, RuleError, ValueError) as e:
        print(f"1:1: error: {e}", file=sys.stderr)
        return INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return INVALID
    except IterationLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return LIMIT


if __name__ == "__main__":
    sys.exit(main())
