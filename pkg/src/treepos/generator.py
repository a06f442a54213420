"""Seeded random expressions and trees, and the benchmark expression family."""

from __future__ import annotations

import random

from .expr import (
    Apply,
    Const,
    GroundTree,
    Product,
    RankedAlphabet,
    Star,
    Sum,
    TreeExpr,
)

# Three constants plus one operator of each rank 1..3.
DEFAULT_TEST_ALPHABET = RankedAlphabet(
    {"a": 0, "b": 0, "c": 0, "f": 1, "g": 2, "h": 3})


def random_expression(rng: random.Random, alphabet: RankedAlphabet | None = None,
                      max_depth: int = 5, max_width: int = 5) -> TreeExpr:
    """A random expression with syntax depth <= max_depth and alphabetic width
    <= max_width.

    Node kinds are drawn with fixed weights under the depth/width budgets.  The
    empty expression is never produced: degenerate empty sublanguages would
    make the syntactic position functions over-approximate their semantic
    definitions, and they get dedicated unit tests instead.
    """
    if alphabet is None:
        alphabet = DEFAULT_TEST_ALPHABET
    consts = sorted(alphabet.constants)
    if not consts:
        raise ValueError("need at least one constant")
    operators = sorted((s, r) for s, r in alphabet.ranks().items() if r >= 1)

    def gen(depth: int, width: int) -> TreeExpr:
        choices: list[tuple[str, int]] = [("const", 1)]
        if depth > 1:
            choices += [("sum", 2), ("product", 2), ("star", 1)]
            if width >= 1 and operators:
                choices.append(("apply", 4))
        total = sum(w for _, w in choices)
        pick = rng.randrange(total)
        for kind, w in choices:
            pick -= w
            if pick < 0:
                break
        if kind == "const":
            return Const(rng.choice(consts))
        if kind == "apply":
            symbol, rank = rng.choice(operators)
            budgets = _split(rng, width - 1, rank)
            return Apply(symbol, tuple(gen(depth - 1, b) for b in budgets))
        if kind == "sum":
            wl = rng.randint(0, width)
            return Sum(gen(depth - 1, wl), gen(depth - 1, width - wl))
        if kind == "product":
            wl = rng.randint(0, width)
            return Product(gen(depth - 1, wl), rng.choice(consts),
                           gen(depth - 1, width - wl))
        return Star(gen(depth - 1, width), rng.choice(consts))

    return gen(max_depth, max_width)


def _split(rng: random.Random, amount: int, parts: int) -> list[int]:
    out = [0] * parts
    for _ in range(amount):
        out[rng.randrange(parts)] += 1
    return out


def random_tree(rng: random.Random, alphabet: RankedAlphabet,
                max_depth: int) -> GroundTree:
    """A random well-formed tree of depth <= max_depth over the alphabet."""
    consts = sorted(alphabet.constants)
    operators = sorted((s, r) for s, r in alphabet.ranks().items() if r >= 1)

    def gen(depth: int) -> GroundTree:
        if depth <= 1 or not operators or rng.random() < 0.3:
            return GroundTree(rng.choice(consts))
        symbol, rank = rng.choice(operators)
        return GroundTree(symbol, tuple(gen(depth - 1) for _ in range(rank)))

    return gen(max_depth)


def scaling_family(n: int) -> tuple[RankedAlphabet, TreeExpr]:
    """Left-nested chain of ``n`` copies of a fixed block, joined on ``b``.

    Size and width both grow linearly in ``n``.  Every block's leaves include
    the join constant, so all positions stay reachable and their Follow sets
    accumulate across later blocks; joining on fresh constants instead would
    strand every block after the first in a dead branch, which the Follow
    computations legitimately short-circuit to nothing.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def block() -> TreeExpr:
        inner = Product(Star(Apply("f", (Const("a"),)), "a"), "a", Const("b"))
        return Star(Sum(inner, Apply("h", (Const("b"),))), "b")

    expr = block()
    for _ in range(1, n):
        expr = Product(expr, "b", block())
    return RankedAlphabet({"a": 0, "b": 0, "f": 1, "h": 1}), expr
