"""Command-line front end.

Machine output goes to stdout, diagnostics to stderr.  Exit codes: 0 success
(or tree accepted), 1 failed check / tree rejected, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import random
import sys

from .automaton import (
    build_position_automaton,
    export_automaton,
    nfta_from_json,
    run_states,
)
from .bench import format_csv, run_benchmark
from .checks import (
    OracleSkip,
    automaton_oracle_failure,
    follow_agreement_failure,
    shrink_failure,
)
from .expr import AlphabetError, linearize, to_text
from .generator import DEFAULT_TEST_ALPHABET, random_expression
from .parser import ParseError, format_expression_file, parse_expression_file, parse_tree
from .positions import first_naive, follow_naive, last_naive
from .zpc import build_zpc, follow_all, follow_fast, follow_via_gamma


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_expression_file(path: str):
    return parse_expression_file(_read(path))


def cmd_follow(args: argparse.Namespace) -> int:
    _, expr = _load_expression_file(args.file)
    lin = linearize(expr)
    linn = lin.normalized()
    queries = [(p, k) for p in linn.positions for k in range(1, linn.arity(p) + 1)]

    if args.algo == "naive":
        follow = {(p, k): follow_naive(linn, p, k) for p, k in queries}
    elif args.algo == "improved":
        follow = follow_all(linn)
    else:
        z = build_zpc(linn)
        impl = follow_via_gamma if args.algo == "gamma" else follow_fast
        follow = {(p, k): impl(z, p, k) for p, k in queries}

    print(f"First = {first_naive(linn)}")
    print("Last = {" + ", ".join(sorted(last_naive(linn))) + "}")
    for p, k in queries:
        print(f"Follow({p}, {k}) = {follow[(p, k)]}")
    return 0


def cmd_automaton(args: argparse.Namespace) -> int:
    alphabet, expr = _load_expression_file(args.file)
    nfta = build_position_automaton(expr, alphabet)
    rendered = export_automaton(nfta, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    if args.check:
        try:
            failure, checked = automaton_oracle_failure(expr, alphabet, depth=args.depth)
        except OracleSkip as exc:
            print(f"oracle check: SKIPPED ({exc})", file=sys.stderr)
            return 0
        if failure is not None:
            print(f"oracle check: FAIL ({failure})", file=sys.stderr)
            return 1
        print(f"oracle check: PASS ({checked} trees)", file=sys.stderr)
    return 0


def cmd_accept(args: argparse.Namespace) -> int:
    nfta = nfta_from_json(_read(args.automaton))
    tree = parse_tree(args.tree, nfta.alphabet)
    states = run_states(nfta, tree)
    if args.verbose:
        print("states: {" + ", ".join(sorted(states)) + "}")
    return 0 if states & nfta.final else 1


def cmd_oracle_check(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    checked = skipped = 0
    for _ in range(args.count):
        expr = random_expression(rng, DEFAULT_TEST_ALPHABET,
                                 max_depth=args.max_depth, max_width=args.max_width)

        def probe(e) -> str | None:
            msg = follow_agreement_failure(e)
            if msg is None:
                msg, _ = automaton_oracle_failure(e, DEFAULT_TEST_ALPHABET,
                                                  depth=args.depth)
            return msg

        try:
            message = probe(expr)
        except OracleSkip:
            skipped += 1
            continue
        if message is not None:
            small, small_message = shrink_failure(expr, probe)
            print(f"counterexample: {to_text(expr)}", file=sys.stderr)
            print(f"shrunk to: {to_text(small)}", file=sys.stderr)
            print(f"failure: {small_message}", file=sys.stderr)
            return 1
        checked += 1
    print(f"oracle check: PASS ({checked} expressions, {skipped} skipped, "
          f"seed {args.seed})")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()] if args.sizes else []
    sys.stdout.write(format_csv(run_benchmark(sizes, repeat=args.repeat)))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    records = []
    for _ in range(args.count):
        expr = random_expression(rng, DEFAULT_TEST_ALPHABET,
                                 max_depth=args.max_depth, max_width=args.max_width)
        records.append(format_expression_file(DEFAULT_TEST_ALPHABET, expr))
    sys.stdout.write("\n".join(records))
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treepos",
        description="Convert regular tree expressions into position tree automata "
                    "and cross-check the Follow-set algorithms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("follow", help="print First, Last and every Follow set")
    p.add_argument("file", help="expression file ('-' for stdin)")
    p.add_argument("--algo", choices=["naive", "zpc", "gamma", "improved"],
                   default="improved")
    p.set_defaults(fn=cmd_follow)

    p = sub.add_parser("automaton", help="build and export the position automaton")
    p.add_argument("file", help="expression file ('-' for stdin)")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("--check", action="store_true",
                   help="also compare against brute-force enumeration")
    p.add_argument("--depth", type=int, default=3, help="tree depth for --check")
    p.set_defaults(fn=cmd_automaton)

    p = sub.add_parser("accept", help="test tree membership (exit 0/1)")
    p.add_argument("automaton", help="automaton JSON file")
    p.add_argument("tree", help="tree as an s-expression, e.g. g(b,a)")
    p.add_argument("--verbose", action="store_true", help="print reached states")
    p.set_defaults(fn=cmd_accept)

    p = sub.add_parser("oracle-check",
                       help="random cross-check of all algorithms and the automaton")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--depth", type=int, default=3, help="tree depth for the oracle")
    p.add_argument("--max-depth", type=int, default=5, help="expression depth")
    p.add_argument("--max-width", type=int, default=5, help="expression width")
    p.set_defaults(fn=cmd_oracle_check)

    p = sub.add_parser("bench", help="CSV timing of naive vs improved Follow")
    p.add_argument("--sizes", default="8,16,32,64", help="comma-separated family sizes")
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("gen", help="emit random expression files")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--max-width", type=int, default=5)
    p.set_defaults(fn=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, AlphabetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
