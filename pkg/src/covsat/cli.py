"""Command-line front end.

Exit codes: 10 satisfiable, 20 unsatisfiable, 0 other success, 1 usage or
parse error, 2 anomaly.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cnf import ParseError, parse_dimacs, preprocess, write_dimacs
from .decomposition import (
    DecompositionFormatError,
    ValidationError,
    decomposition_of_cnf,
    is_special_covering,
    missing_elements,
    parse_decomposition,
    validate_decomposition,
)
from .graph import build_graph, to_dot
from .oracle import (
    InvalidBounds,
    TooManyPairs,
    TooManyVariables,
    brute_force_covering,
    brute_force_sat,
    differential_corpus,
    differential_run,
)
from .procedures import clean_graph, eliminate_incompatibilities
from .solver import ProportionalKind, VerdictKind, decide, to_proportional

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ANOMALY = 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_cnf(path: str, strip: bool = False):
    return parse_dimacs(_read(path), strip_tautologies=strip)


def _load_decomposition(path: str, fmt: str):
    """A decomposition from DIMACS (via its clauses) or from the text format."""
    text = _read(path)
    if fmt == "auto":
        fmt = "dimacs" if any(
            ln.strip().startswith("p ") for ln in text.splitlines()
        ) else "decomposition"
    if fmt == "dimacs":
        return decomposition_of_cnf(preprocess(parse_dimacs(text)).formula)
    d = parse_decomposition(text)
    validate_decomposition(d)
    return d


def _value_line(assignment) -> str:
    lits = [str(i if v else -i) for i, v in enumerate(assignment, start=1)]
    return "v " + " ".join(lits + ["0"])


def cmd_solve(args) -> int:
    f = _load_cnf(args.path, args.strip_tautologies)
    alphas = {"1": (1,), "0": (0,), "both": (1, 0)}[args.alpha]
    verdict = decide(f, alphas)
    if verdict.kind is VerdictKind.SAT:
        print("s SATISFIABLE")
        print(_value_line(verdict.assignment))
        code = EXIT_SAT
    elif verdict.kind is VerdictKind.UNSAT:
        print("s UNSATISFIABLE")
        code = EXIT_UNSAT
    else:
        print("s ANOMALY")
        code = EXIT_ANOMALY
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in verdict.traces():
                fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
    if args.oracle_check:
        truth = brute_force_sat(f)
        agree = truth.satisfiable == verdict.is_sat
        print(f"c oracle {'SATISFIABLE' if truth.satisfiable else 'UNSATISFIABLE'} "
              f"{'agree' if agree else 'disagree'}")
    return code


def cmd_graph(args) -> int:
    d = _load_decomposition(args.path, args.format)
    alpha = args.alpha
    missing = missing_elements(d, alpha)
    if not missing:
        print(f"error: nothing is missing at alpha={alpha}; there is no graph", file=sys.stderr)
        return EXIT_USAGE
    g = build_graph(d, alpha, missing)
    if args.stage in ("clean", "final"):
        clean = clean_graph(g)
        if not clean.stable:
            print(f"error: cleaning is Unstable at alpha={alpha} "
                  f"(stage {clean.stage}, element c{clean.exhausted})", file=sys.stderr)
            return EXIT_USAGE
        g = clean.graph
        if args.stage == "final":
            compat = eliminate_incompatibilities(d, alpha, g)
            if not compat.stable:
                print(f"error: compatibility is Unstable at alpha={alpha} "
                      f"({compat.reason}, element c{compat.exhausted})", file=sys.stderr)
                return EXIT_USAGE
            g = compat.graph
    dot = to_dot(g)
    if args.dot and args.dot != "-":
        Path(args.dot).write_text(dot)
    else:
        sys.stdout.write(dot)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    if args.corpus:
        named = [(p, _load_cnf(p)) for p in args.corpus]
        report = differential_corpus(named)
    else:
        if args.count < 0:
            raise InvalidBounds("--count must be non-negative")
        seeds = range(args.seed, args.seed + args.count)
        report = differential_run(seeds, args.vars, args.clauses, args.min_len, args.max_len)
    text = report.dumps()
    if args.report:
        Path(args.report).write_text(text)
    summary = report.summary()
    counts = summary["counts"]
    print(" ".join(f"{k}={counts[k]}" for k in sorted(counts)) + f" count={summary['count']}")
    print(f"unsound={summary['unsound']} domain_violations={summary['domain_violations']} "
          f"alpha_gaps={json.dumps(summary['alpha_gaps'], sort_keys=True)}")
    return EXIT_OK


def cmd_proportional(args) -> int:
    f = _load_cnf(args.path)
    res = to_proportional(f, use_oracle=args.oracle)
    if res.kind is ProportionalKind.NOT_TRANSFORMABLE:
        print("c not transformable: no satisfying assignment")
        return EXIT_OK
    if res.kind is ProportionalKind.ALREADY:
        print("c already proportional")
    else:
        inv = ",".join(str(v) for v in sorted(res.inverted))
        print(f"c inverted {{{inv}}}")
    sys.stdout.write(write_dimacs(res.formula))
    return EXIT_OK


def cmd_oracle(args) -> int:
    f = _load_cnf(args.path)
    truth = brute_force_sat(f)
    if truth.satisfiable:
        print("s SATISFIABLE")
        print(_value_line(truth.witness))
        return EXIT_SAT
    print("s UNSATISFIABLE")
    return EXIT_UNSAT


def cmd_check_cover(args) -> int:
    d = _load_decomposition(args.path, args.format)
    sel = args.selection
    if not sel or set(sel) - {"0", "1"}:
        raise UsageError("selection must be a string of 0s and 1s")
    if len(sel) != d.n:
        raise UsageError(f"selection has {len(sel)} bits but the decomposition has {d.n} pairs")
    print("true" if is_special_covering(d, [int(ch) for ch in sel]) else "false")
    return EXIT_OK


def cmd_cover(args) -> int:
    d = _load_decomposition(args.path, args.format)
    found = brute_force_covering(d)
    if found.satisfiable:
        print("s COVERED")
        print("v " + "".join(map(str, found.witness)))
        return EXIT_SAT
    print("s UNCOVERED")
    return EXIT_UNSAT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covsat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a DIMACS formula")
    p.add_argument("path")
    p.add_argument("--alpha", choices=["0", "1", "both"], default="both")
    p.add_argument("--trace", metavar="PATH", help="write cascade events as JSON lines")
    p.add_argument("--oracle-check", action="store_true", help="also run the brute-force oracle")
    p.add_argument("--strip-tautologies", action="store_true")
    p.set_defaults(func=cmd_solve)

    fmt_help = "input format (default: guess from a 'p cnf' header)"
    p = sub.add_parser("graph", help="export a replaceability graph as DOT")
    p.add_argument("path")
    p.add_argument("--alpha", type=int, choices=[0, 1], default=1)
    p.add_argument("--dot", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--stage", choices=["raw", "clean", "final"], default="raw")
    p.add_argument("--format", choices=["auto", "dimacs", "decomposition"], default="auto",
                   help=fmt_help)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("fuzz", help="differential run against the brute-force oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--vars", type=int, default=6)
    p.add_argument("--clauses", type=int, default=12)
    p.add_argument("--min-len", type=int, default=1)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--report", metavar="PATH")
    p.add_argument("--corpus", nargs="+", metavar="FILE", help="DIMACS files instead of random")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("proportional", help="invert literals into proportional form")
    p.add_argument("path")
    p.add_argument("--oracle", action="store_true", help="take the assignment from brute force")
    p.set_defaults(func=cmd_proportional)

    p = sub.add_parser("oracle", help="brute-force satisfiability")
    p.add_argument("path")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check-cover", help="test whether a selection is a covering")
    p.add_argument("path")
    p.add_argument("selection", help="bit string, one bit per pair")
    p.add_argument("--format", choices=["auto", "dimacs", "decomposition"], default="auto",
                   help=fmt_help)
    p.set_defaults(func=cmd_check_cover)

    p = sub.add_parser("cover", help="brute-force search for a covering")
    p.add_argument("path")
    p.add_argument("--format", choices=["auto", "dimacs", "decomposition"], default="auto",
                   help=fmt_help)
    p.set_defaults(func=cmd_cover)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ParseError, DecompositionFormatError, ValidationError,
            InvalidBounds, TooManyVariables, TooManyPairs) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
