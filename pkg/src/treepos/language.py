"""Brute-force language semantics: substitution, enumeration, emptiness.

``enumerate_language`` realizes the denotation of an expression restricted to
a depth bound, iterating the substitution closure to a fixpoint.  It is the
independent oracle for the position functions and the constructed automata.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterable, Iterator

from .expr import (
    AlphabetError,
    Apply,
    Const,
    Empty,
    GroundTree,
    Product,
    RankedAlphabet,
    Star,
    Sum,
    TreeExpr,
    tree_depth,
)


def tree_substitute(t: GroundTree, c: str, trees: Iterable[GroundTree]) -> frozenset[GroundTree]:
    """All trees obtained by replacing each ``c``-leaf of ``t`` with a choice
    from ``trees``; distinct leaves may pick distinct replacements."""
    pool = frozenset(trees)

    def go(node: GroundTree) -> frozenset[GroundTree]:
        if not node.children:
            return pool if node.symbol == c else frozenset({node})
        parts = [go(k) for k in node.children]
        return frozenset(GroundTree(node.symbol, combo) for combo in cartesian(*parts))

    return go(t)


class _Cap:
    """Shared truncation state for one enumeration."""

    def __init__(self, max_count: int | None):
        self.max_count = max_count
        self.truncated = False

    def clip(self, trees: set[GroundTree]) -> set[GroundTree]:
        if self.max_count is not None and len(trees) > self.max_count:
            self.truncated = True
            kept = sorted(trees, key=_tree_key)[: self.max_count]
            return set(kept)
        return trees

    def combine(self, parts: list[set[GroundTree]], make) -> set[GroundTree]:
        """Cartesian combination of per-child sets, cut off at the cap.

        Children are iterated in canonical order so the kept subset is
        deterministic.  Once truncation has struck anywhere, further work is
        pointless (the sample is already flagged) and an empty set — still a
        subset of the true language — comes back immediately.
        """
        if self.truncated and self.max_count is not None:
            return set()
        if any(not p for p in parts):
            return set()
        if self.max_count is None:
            return {make(combo) for combo in cartesian(*parts)}
        ordered = [sorted(p, key=_tree_key) for p in parts]
        out: set[GroundTree] = set()
        for combo in cartesian(*ordered):
            out.add(make(combo))
            if len(out) > self.max_count:
                self.truncated = True
                break
        return out


def _substitute_bounded(t: GroundTree, c: str, pool: Iterable[GroundTree],
                        max_depth: int, cap: _Cap) -> set[GroundTree]:
    # Substitution never shrinks depth, so prune against the remaining budget.
    depths = [(u, tree_depth(u)) for u in pool]

    def go(node: GroundTree, budget: int) -> set[GroundTree]:
        if budget < 1:
            return set()
        if not node.children:
            if node.symbol == c:
                return {u for u, d in depths if d <= budget}
            return {node}
        parts = [go(k, budget - 1) for k in node.children]
        return cap.combine(parts, lambda kids: GroundTree(node.symbol, kids))

    return go(t, max_depth)


def _tree_key(t: GroundTree) -> tuple[int, str]:
    return (tree_depth(t), str(t))


@dataclass(frozen=True)
class LanguageSample:
    """The language restricted to a depth bound, possibly count-truncated."""

    trees: frozenset[GroundTree]
    truncated: bool

    def __contains__(self, t: GroundTree) -> bool:
        return t in self.trees

    def __iter__(self) -> Iterator[GroundTree]:
        return iter(sorted(self.trees, key=_tree_key))

    def __len__(self) -> int:
        return len(self.trees)


def enumerate_language(expr: TreeExpr, max_depth: int,
                       max_count: int | None = None) -> LanguageSample:
    """Exactly the denoted trees of depth <= ``max_depth`` unless truncated.

    When ``max_count`` is reached the result is clipped to a canonical prefix
    and flagged; a clipped result is still a subset of the language.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if max_count is not None and max_count < 1:
        raise ValueError("max_count must be >= 1")
    cap = _Cap(max_count)

    def enum(e: TreeExpr, depth: int) -> set[GroundTree]:
        if cap.truncated:
            return set()
        match e:
            case Empty():
                return set()
            case Const(symbol):
                return {GroundTree(symbol)}
            case Apply(symbol, children):
                if depth < 2:
                    return set()
                parts = [enum(k, depth - 1) for k in children]
                return cap.combine(parts, lambda kids: GroundTree(symbol, kids))
            case Sum(left, right):
                return cap.clip(enum(left, depth) | enum(right, depth))
            case Product(left, c, right):
                pool = enum(right, depth)
                out: set[GroundTree] = set()
                for t in sorted(enum(left, depth), key=_tree_key):
                    if cap.truncated:
                        break
                    out = cap.clip(out | _substitute_bounded(t, c, pool, depth, cap))
                return out
            case Star(child, c):
                # Iterated substitution closure: grow until no tree within the
                # depth bound is added (guaranteed finite) or the cap is hit.
                pool = sorted(enum(child, depth), key=_tree_key)
                acc: set[GroundTree] = {GroundTree(c)}
                while not cap.truncated:
                    grown = set(acc)
                    for t in pool:
                        if cap.truncated:
                            break
                        grown = cap.clip(grown | _substitute_bounded(t, c, acc, depth, cap))
                    if grown == acc:
                        break
                    acc = grown
                return acc if not cap.truncated else cap.clip(acc)
        raise TypeError(f"not a TreeExpr: {e!r}")

    trees = enum(expr, max_depth)
    return LanguageSample(frozenset(cap.clip(trees)), cap.truncated)


def constants_in_language(expr: TreeExpr) -> frozenset[str]:
    """The constants that occur as whole (single-node) trees of the language.

    One bottom-up pass.  A constant survives a product unless it is the
    substituted one, and the right factor's constants enter exactly when the
    left factor can produce the substituted constant; a star closure always
    contains its annotation constant.
    """
    match expr:
        case Empty() | Apply(_, _):
            return frozenset()
        case Const(symbol):
            return frozenset({symbol})
        case Sum(left, right):
            return constants_in_language(left) | constants_in_language(right)
        case Product(left, sep, right):
            lc = constants_in_language(left)
            if sep in lc:
                return (lc - {sep}) | constants_in_language(right)
            return lc
        case Star(child, sep):
            return constants_in_language(child) | {sep}
    raise TypeError(f"not a TreeExpr: {expr!r}")


def contains_constant(expr: TreeExpr, c: str,
                      alphabet: RankedAlphabet | None = None) -> bool:
    """Decide whether the single-node tree ``c`` belongs to the language."""
    if alphabet is not None and alphabet.rank(c) != 0:
        raise AlphabetError(f"{c!r} is not a constant")
    return c in constants_in_language(expr)


def is_empty_language(expr: TreeExpr) -> bool:
    """True iff the language is surely empty.

    The product case needs "every tree of the left factor has a ``c`` leaf",
    which is only under-approximated; when uncertain the language is classified
    non-empty, the safe direction for all downstream uses.
    """
    match expr:
        case Empty():
            return True
        case Const(_):
            return False
        case Apply(_, children):
            return any(is_empty_language(k) for k in children)
        case Sum(left, right):
            return is_empty_language(left) and is_empty_language(right)
        case Product(left, c, right):
            if is_empty_language(left):
                return True
            return is_empty_language(right) and c in _guaranteed_leaves(left)
        case Star(_, _):
            return False  # the closure always contains its annotation constant
    raise TypeError(f"not a TreeExpr: {expr!r}")


def _guaranteed_leaves(expr: TreeExpr) -> frozenset[str]:
    """Constants guaranteed to occur as a leaf of every denoted tree.

    Under-approximated in one bottom-up pass: the empty expression yields the
    empty set rather than the vacuous "everything", which only makes callers
    more conservative.  A substituted constant stays guaranteed only when both
    factors guarantee it; other guaranteed leaves of the left factor survive
    the substitution untouched, and leaves guaranteed by the right factor are
    guaranteed overall whenever every left tree has somewhere to put them.
    """
    match expr:
        case Empty():
            return frozenset()
        case Const(symbol):
            return frozenset({symbol})
        case Apply(_, children):
            return frozenset().union(*(_guaranteed_leaves(k) for k in children))
        case Sum(left, right):
            return _guaranteed_leaves(left) & _guaranteed_leaves(right)
        case Product(left, sep, right):
            gl, gr = _guaranteed_leaves(left), _guaranteed_leaves(right)
            out = gl - {sep}
            if sep in gl:
                out |= gr
            return frozenset(out)
        case Star(child, sep):
            return frozenset({sep}) & _guaranteed_leaves(child)
    raise TypeError(f"not a TreeExpr: {expr!r}")
