"""``numerosity`` command line.

Exit codes: 0 on a decided result, 2 when the oracle answers UNDECIDED,
1 on any error (diagnostics go to stderr).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .axioms import FAIL, UNDECIDED, PreconditionError, report_table, run_catalog
from .counting import counting_csv, counting_sequence, parse_chain
from .dsl import ParseError, parse_expr
from .numerosity import (
    DEFAULT_HORIZON,
    DEFAULT_WINDOW,
    CongruenceError,
    build_congruence,
    compare,
    get_oracle,
    numerosity,
)
from .pointset import InvalidExpression, NotMultipliable
from .series import (
    TruncationWindow,
    char_series,
    is_characteristic,
    squarefree,
    to_text as series_text,
    window_for,
)

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2


def _default_horizon() -> int:
    raw = os.environ.get("NUMEROSITY_HORIZON")
    if raw is None:
        return DEFAULT_HORIZON
    try:
        value = int(raw)
    except ValueError:
        value = -1
    if value < 0:
        raise SystemExit(f"error: NUMEROSITY_HORIZON must be a natural number, got {raw!r}")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a natural number")
    return value


def _support(text: str) -> list[int]:
    cleaned = text.strip().strip("{}").replace(",", " ")
    try:
        return sorted({_natural(p) for p in cleaned.split()})
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"bad support {text!r}; use e.g. '0,1,2'") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def cmd_count(args, out) -> int:
    X = parse_expr(args.expr)
    chain = parse_chain(args.chain)
    if args.format == "json":
        seq = counting_sequence(X, chain, args.horizon)
        rows = [{"k": k, "H_k": sorted(H), "count": c}
                for k, (H, c) in enumerate(zip(chain.elements(args.horizon), seq))]
        out.write(_dump(rows) + "\n")
    else:
        out.write(counting_csv(X, chain, args.horizon))
    return EXIT_OK


def cmd_compare(args, out) -> int:
    A, B = parse_expr(args.a), parse_expr(args.b)
    chain = parse_chain(args.chain)
    oracle = get_oracle(args.oracle, args.window)
    c = compare(numerosity(A, chain, args.horizon), numerosity(B, chain, args.horizon), oracle)
    if args.format == "json":
        out.write(_dump({"outcome": c.outcome.value, "tail": c.tail}) + "\n")
    else:
        out.write(str(c) + "\n")
    return EXIT_OK if c.outcome.decided else EXIT_UNDECIDED


def cmd_series(args, out) -> int:
    X = parse_expr(args.expr)
    F = args.support if args.support is not None else list(range(4))
    W = TruncationWindow(F, args.degcap) if args.degcap is not None else window_for(X, F)
    S = char_series(X, W)
    sf = squarefree(S)
    verdict = is_characteristic(S)
    if args.format == "json":
        out.write(_dump({
            "support": sorted(W.support),
            "degree_cap": W.degree_cap,
            "series": series_text(S),
            "squarefree": series_text(sf),
            "characteristic": verdict,
        }) + "\n")
    else:
        out.write(f"series: {series_text(S)}\n")
        out.write(f"squarefree: {series_text(sf)}\n")
        out.write(f"characteristic: {'yes' if verdict else 'no'}\n")
    return EXIT_OK


def cmd_congruence(args, out) -> int:
    A, B = parse_expr(args.a), parse_expr(args.b)
    chain = parse_chain(args.chain)
    try:
        tau = build_congruence(A, B, chain, args.horizon)
    except CongruenceError as e:
        if args.format == "json":
            out.write(_dump({"mismatch": e.k}) + "\n")
        else:
            out.write(f"mismatch {e.k}\n")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "json":
        out.write(_dump([[list(a), list(b)] for a, b in tau.items()]) + "\n")
    elif args.format == "csv":
        out.write("source,image\n")
        for a, b in tau.items():
            out.write(f"\"{a}\",\"{b}\"\n")
    else:
        for a, b in tau.items():
            out.write(f"{a} -> {b}\n")
    return EXIT_OK


def cmd_axioms(args, out) -> int:
    reports = run_catalog(args.catalog, args.horizon, args.window)
    if args.no_timing:
        for r in reports:
            r.millis = 0.0
    if args.format == "text":
        out.write(report_table(reports) + "\n")
    else:
        out.write(_dump([r.to_dict() for r in reports]) + "\n")
    failed = [r for r in reports if r.verdict == FAIL]
    undecided = [r for r in reports if r.verdict == UNDECIDED]
    print(f"{len(reports)} checks, {len(failed)} failed, {len(undecided)} undecided", file=sys.stderr)
    return EXIT_ERROR if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    horizon = _default_horizon()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=_natural, default=horizon,
                        help=f"last chain index K (default {horizon}; env NUMEROSITY_HORIZON)")
    common.add_argument("--window", type=_natural, default=DEFAULT_WINDOW,
                        help="trailing window the oracle inspects (default %(default)s)")
    common.add_argument("--chain", default="identity", help="identity | perm:<comma list prefix>")
    common.add_argument("--oracle", default="eventual-sign", help="eventual-sign | residue:R/M")
    common.add_argument("--format", choices=("csv", "json", "text"), default="text")

    parser = argparse.ArgumentParser(prog="numerosity", description="Numerosities of finitary point sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="counting sequence along a chain")
    p.add_argument("expr")
    p.set_defaults(run=cmd_count)

    p = sub.add_parser("compare", parents=[common], help="compare two numerosities")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("series", parents=[common], help="truncated characteristic series")
    p.add_argument("expr")
    p.add_argument("--support", type=_support, default=None, help="e.g. '0,1,2' (default 0..3)")
    p.add_argument("--degcap", type=_natural, default=None, help="per-variable degree cap")
    p.set_defaults(run=cmd_series)

    p = sub.add_parser("congruence", parents=[common], help="bijection matching restrictions on every H_k")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_congruence)

    p = sub.add_parser("axioms", parents=[common], help="run the axiom harness over a catalog")
    p.add_argument("--catalog", default=None, help="catalog JSON (default: built-in)")
    p.add_argument("--no-timing", action="store_true", help="report millis as 0 for reproducible output")
    p.set_defaults(run=cmd_axioms)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        code = e.code
        if isinstance(code, str):
            print(code, file=sys.stderr)
            return EXIT_ERROR
        return EXIT_OK if code == 0 else EXIT_ERROR
    try:
        return args.run(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
    except NotMultipliable as e:
        print(f"not multipliable: {e}", file=sys.stderr)
    except (InvalidExpression, PreconditionError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
