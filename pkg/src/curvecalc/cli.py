"""Command-line front end.

`curvecalc eval` loads a normal form, an operator (matrix or relation)
and a vector from JSON and writes the evaluated vector plus quadrature
diagnostics.  `curvecalc check <suite>` runs one of the randomized
check suites and writes a CSV margin report.

Exit codes: 0 success, 1 failed checks, 2 resolvent failure on the
spectrum, 3 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from curvecalc import backend, checks, formats
from curvecalc._quad import QuadratureRule
from curvecalc.errors import CurveCalcError, ResolventFailure
from curvecalc.funcalc import CalculusContext, evaluate


def _threads():
    raw = os.environ.get("CURVECALC_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _rule(tol):
    if tol is None:
        return None
    return QuadratureRule(order=16, tol=float(tol), max_depth=30)


def cmd_eval(args) -> int:
    try:
        nf_obj = formats.load_json(args.nf)
        system = formats.system_from_json(formats.load_json(args.curve)) if args.curve else None
        nf = formats.normal_form_from_json(nf_obj, system=system)
        A = formats.relation_from_json(formats.load_json(args.op))
        u = formats.vector_from_json(formats.load_json(args.vec))
    except (CurveCalcError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    rule = _rule(args.tol)
    ctx = CalculusContext(A, rule=rule) if rule else CalculusContext(A)
    try:
        out = evaluate(ctx, nf, u)
    except ResolventFailure as exc:
        print(f"resolvent failure at node {exc.node}: {exc}", file=sys.stderr)
        return 2
    except CurveCalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    result = formats.vector_to_json(out)
    result["diagnostics"] = {
        "backend": backend.backend_name(),
        "degree": nf.degree,
        "norm": float(np.linalg.norm(out)),
        "tol": ctx.rule.tol,
    }
    if args.out:
        formats.dump_json(args.out, result)
    else:
        import json

        json.dump(result, sys.stdout, indent=1)
        print()
    return 0


def cmd_check(args) -> int:
    if args.suite not in checks.SUITE_NAMES:
        print(f"error: unknown suite {args.suite!r}; choose from {sorted(checks.SUITE_NAMES)}", file=sys.stderr)
        return 3
    kwargs = {"seed": args.seed}
    if args.n is not None:
        kwargs["n"] = args.n
    if args.suite == "locality":
        kwargs["negative_control"] = args.negative_control
    if args.suite == "estimates" and args.lemma:
        kwargs["lemma"] = args.lemma
    try:
        rows, ok = checks.run_suite(args.suite, **kwargs)
    except CurveCalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    writer = None
    handle = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(handle)
        writer.writerow(["suite", "name", "value", "tol", "passed"])
        for r in rows:
            writer.writerow([r["suite"], r["name"], "%.17e" % r["value"], "%.17e" % r["tol"], int(r["passed"])])
    finally:
        if args.out:
            handle.close()
    failed = sum(not r["passed"] for r in rows)
    print(f"{args.suite}: {len(rows) - failed}/{len(rows)} passed", file=sys.stderr)
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="curvecalc", description="Cauchy-integral functional calculus tools")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a normal form on an operator")
    pe.add_argument("--nf", required=True, help="normal form JSON")
    pe.add_argument("--op", required=True, help="relation/matrix JSON")
    pe.add_argument("--vec", required=True, help="vector JSON")
    pe.add_argument("--curve", help="curve system JSON (when not embedded in --nf)")
    pe.add_argument("--tol", type=float, help="quadrature tolerance override")
    pe.add_argument("--out", help="output JSON path (default stdout)")
    pe.set_defaults(fn=cmd_eval)

    pc = sub.add_parser("check", help="run a check suite")
    pc.add_argument("suite", help="|".join(checks.SUITE_NAMES))
    pc.add_argument("--n", type=int, help="number of random instances")
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--tol", type=float, help="unused override, kept for CSV reproducibility")
    pc.add_argument("--lemma", help="restrict the estimates suite to one lemma id")
    pc.add_argument("--negative-control", action="store_true")
    pc.add_argument("--out", help="CSV output path (default stdout)")
    pc.set_defaults(fn=cmd_check)
    return p


def main(argv=None) -> int:
    os.environ.setdefault("OMP_NUM_THREADS", str(_threads()))
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
