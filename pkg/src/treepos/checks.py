"""Cross-checks: algorithm agreement, language-level oracles, shrinking.

These drive the ``oracle-check`` command and the heavier test properties.
Every check takes a plain (unmarked) expression and prepares it itself, so a
failing input can be shrunk by descending into subexpressions.
"""

from __future__ import annotations

import random
import zlib
from typing import Callable

from . import zpc
from .automaton import accepts, build_position_automaton
from .expr import (
    RankedAlphabet,
    TreeExpr,
    immediate_subexpressions,
    linearize,
    normalize_stars,
    to_text,
)
from .generator import random_tree
from .language import enumerate_language
from .positions import (
    PositionSet,
    first0,
    first_naive,
    first_sup,
    follow_naive,
    last_follow,
    follow_sup,
)

FollowImpl = Callable[[zpc.ZpcStructure, object, int], PositionSet]


class OracleSkip(Exception):
    """The language is too large to enumerate within the configured caps."""


def follow_agreement_failure(expr: TreeExpr,
                             fast_impl: FollowImpl | None = None) -> str | None:
    """Check that all Follow computations and the constant/position split agree
    on one expression; return a description of the first mismatch, else None.

    ``fast_impl`` replaces the structure-walk implementation, which lets tests
    inject a corrupted variant and watch the harness catch it.
    """
    fast = fast_impl or zpc.follow_fast
    lin = linearize(normalize_stars(expr))
    z = zpc.build_zpc(lin)

    f_naive = first_naive(lin)
    f_split = PositionSet(first0(lin), first_sup(lin))
    f_zpc = z.first_of(z.root)
    if f_naive != f_split:
        return f"First split mismatch: naive {f_naive} vs split {f_split}"
    if f_naive != f_zpc:
        return f"First forest mismatch: naive {f_naive} vs structure {f_zpc}"

    all_sets = zpc.follow_all(lin)
    for p in lin.positions:
        for k in range(1, lin.arity(p) + 1):
            ref = follow_naive(lin, p, k)
            # Constants and positions are disjoint by type, so part-wise
            # equality below is exactly the disjoint-union identity.
            split = PositionSet(last_follow(lin, p, k), follow_sup(lin, p, k))
            candidates = [
                ("split recurrences", split),
                ("link-chain product", zpc.follow_via_gamma(z, p, k)),
                ("structure walk", fast(z, p, k)),
                ("substitution scheme", all_sets[(p, k)]),
            ]
            for name, got in candidates:
                if got != ref:
                    return (f"Follow({p},{k}) mismatch in {name}: "
                            f"expected {ref}, got {got}")
    return None


def automaton_oracle_failure(expr: TreeExpr, alphabet: RankedAlphabet,
                             depth: int = 4, probes: int = 25,
                             max_count: int = 4000,
                             probe_seed: int | None = None) -> tuple[str | None, int]:
    """Compare automaton membership against brute-force enumeration.

    Every enumerated tree (depth-bounded, exhaustively listed) must be
    accepted, and random probe trees must be accepted exactly when enumerated.
    Falls back to smaller depths when the language is too large, and raises
    OracleSkip when even depth 2 cannot be enumerated exactly.  Returns
    ``(failure_or_None, trees_checked)``.
    """
    norm = normalize_stars(expr)
    sample = None
    used_depth = depth
    for d in range(depth, 1, -1):
        candidate = enumerate_language(norm, d, max_count)
        if not candidate.truncated:
            sample, used_depth = candidate, d
            break
    if sample is None:
        raise OracleSkip(f"language too large to enumerate at depth 2..{depth}")

    nfta = build_position_automaton(expr, alphabet)
    checked = 0
    for t in sample:
        checked += 1
        if not accepts(nfta, t):
            return f"enumerated tree {t} rejected by the automaton", checked

    if probe_seed is None:
        probe_seed = zlib.crc32(to_text(expr).encode())
    rng = random.Random(probe_seed)
    for _ in range(probes):
        t = random_tree(rng, alphabet, used_depth)
        checked += 1
        member = t in sample
        if accepts(nfta, t) != member:
            verdict = "accepted" if not member else "rejected"
            return f"probe tree {t} wrongly {verdict} (depth bound {used_depth})", checked
    return None, checked


def shrink_failure(expr: TreeExpr,
                   predicate: Callable[[TreeExpr], str | None]) -> tuple[TreeExpr, str]:
    """Shrink a failing expression by repeated subexpression descent.

    ``predicate`` returns a failure message or None; ``expr`` must fail.
    Returns the smallest failing descendant together with its message.
    """
    message = predicate(expr)
    if message is None:
        raise ValueError("expression does not fail the predicate")
    while True:
        for child in immediate_subexpressions(expr):
            try:
                child_message = predicate(child)
            except OracleSkip:
                child_message = None
            if child_message is not None:
                expr, message = child, child_message
                break
        else:
            return expr, message
