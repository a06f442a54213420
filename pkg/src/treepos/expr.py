"""Ranked alphabets, regular tree expressions, ground trees, and linearization.

A regular tree expression is built from the empty expression ``0``, constants,
operator applications ``f(E1, ..., En)``, sums ``E1 + E2``, constant-indexed
products ``E1 .c E2`` and constant-indexed stars ``E*c``.  The product
``E1 .c E2`` substitutes trees of ``E2`` for the ``c``-leaves of trees of
``E1``; the star iterates that substitution.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class AlphabetError(ValueError):
    """A symbol is undeclared, badly named, or used at the wrong rank."""


@dataclass(frozen=True, slots=True)
class Position:
    """A marked occurrence of a rank>=1 symbol: base symbol plus mark index."""

    base: str
    mark: int

    def __str__(self) -> str:
        return f"{self.base}{self.mark}"

    def __repr__(self) -> str:
        return f"Position({self.base!r}, {self.mark})"


Symbol = Union[str, Position]


def unmark(symbol: Symbol) -> str:
    """Erase the mark of a position; constants and plain symbols are unchanged."""
    return symbol.base if isinstance(symbol, Position) else symbol


class RankedAlphabet:
    """Finite symbol table mapping each symbol name to its rank (arity).

    Rank-0 symbols are the constants; the rest take that many subtrees.
    Instances are immutable and usable as read-only shared state.
    """

    def __init__(self, ranks: Mapping[str, int]):
        checked: dict[str, int] = {}
        for name, rank in ranks.items():
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise AlphabetError(f"bad symbol name {name!r}")
            if not isinstance(rank, int) or rank < 0:
                raise AlphabetError(f"bad rank {rank!r} for symbol {name!r}")
            checked[name] = rank
        self._ranks = checked

    @classmethod
    def from_text(cls, text: str) -> "RankedAlphabet":
        """Parse a declaration like ``"f:1 h:1 g:2 a:0"``."""
        ranks: dict[str, int] = {}
        for item in text.split():
            name, sep, rank = item.partition(":")
            if not sep or not rank.isdigit():
                raise AlphabetError(f"bad alphabet entry {item!r} (expected name:rank)")
            if name in ranks and ranks[name] != int(rank):
                raise AlphabetError(f"symbol {name!r} declared with two ranks")
            ranks[name] = int(rank)
        return cls(ranks)

    def rank(self, symbol: Symbol) -> int:
        name = unmark(symbol)
        if name not in self._ranks:
            raise AlphabetError(f"undeclared symbol {name!r}")
        return self._ranks[name]

    def __contains__(self, symbol: Symbol) -> bool:
        return unmark(symbol) in self._ranks

    @property
    def constants(self) -> frozenset[str]:
        return frozenset(s for s, r in self._ranks.items() if r == 0)

    @property
    def nonconstants(self) -> frozenset[str]:
        return frozenset(s for s, r in self._ranks.items() if r >= 1)

    def ranks(self) -> dict[str, int]:
        return dict(self._ranks)

    def max_rank(self) -> int:
        return max(self._ranks.values(), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RankedAlphabet):
            return self._ranks == other._ranks
        return NotImplemented

    def __repr__(self) -> str:
        items = " ".join(f"{s}:{r}" for s, r in sorted(self._ranks.items()))
        return f"RankedAlphabet({items})"


# ---------------------------------------------------------------------------
# Expression AST


class TreeExpr:
    """Base class of regular tree expression nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Empty(TreeExpr):
    """The expression ``0`` denoting the empty language."""


@dataclass(frozen=True, slots=True)
class Const(TreeExpr):
    symbol: str


@dataclass(frozen=True, slots=True)
class Apply(TreeExpr):
    symbol: Symbol
    children: tuple[TreeExpr, ...]


@dataclass(frozen=True, slots=True)
class Sum(TreeExpr):
    left: TreeExpr
    right: TreeExpr


@dataclass(frozen=True, slots=True)
class Product(TreeExpr):
    left: TreeExpr
    c: str
    right: TreeExpr


@dataclass(frozen=True, slots=True)
class Star(TreeExpr):
    child: TreeExpr
    c: str


def subexpressions(expr: TreeExpr) -> Iterator[TreeExpr]:
    """All subexpressions of ``expr`` in preorder, including ``expr`` itself."""
    stack = [expr]
    while stack:
        e = stack.pop()
        yield e
        stack.extend(reversed(immediate_subexpressions(e)))


def immediate_subexpressions(expr: TreeExpr) -> tuple[TreeExpr, ...]:
    match expr:
        case Apply(_, children):
            return children
        case Sum(left, right) | Product(left, _, right):
            return (left, right)
        case Star(child, _):
            return (child,)
        case _:
            return ()


def occurs(expr: TreeExpr, symbol: Symbol) -> bool:
    """True iff ``symbol`` labels some application node of ``expr``."""
    return any(isinstance(e, Apply) and e.symbol == symbol for e in subexpressions(expr))


def size(expr: TreeExpr) -> int:
    """Node count of the syntax tree (product/star annotations are not nodes)."""
    return sum(1 for _ in subexpressions(expr))


def width(expr: TreeExpr) -> int:
    """Alphabetic width: number of rank>=1 symbol occurrences."""
    return sum(1 for e in subexpressions(expr) if isinstance(e, Apply))


def measure(expr: TreeExpr) -> dict[str, int]:
    """Size and width of an expression.

    ``width`` counts only rank>=1 occurrences; ``width_with_constants`` also
    counts constant leaves (some authors use that convention), but not the
    product/star annotations.
    """
    consts = sum(1 for e in subexpressions(expr) if isinstance(e, Const))
    w = width(expr)
    return {"size": size(expr), "width": w, "width_with_constants": w + consts}


def h_expr(expr: TreeExpr) -> TreeExpr:
    """Apply the un-marking homomorphism to every application symbol."""
    match expr:
        case Empty() | Const(_):
            return expr
        case Apply(symbol, children):
            return Apply(unmark(symbol), tuple(h_expr(k) for k in children))
        case Sum(left, right):
            return Sum(h_expr(left), h_expr(right))
        case Product(left, c, right):
            return Product(h_expr(left), c, h_expr(right))
        case Star(child, c):
            return Star(h_expr(child), c)
    raise TypeError(f"not a TreeExpr: {expr!r}")


def validate_expression(expr: TreeExpr, alphabet: RankedAlphabet) -> None:
    """Check arities and annotations against ``alphabet``; raise AlphabetError."""
    for e in subexpressions(expr):
        match e:
            case Const(symbol):
                if alphabet.rank(symbol) != 0:
                    raise AlphabetError(f"{symbol!r} used as a constant but has rank "
                                        f"{alphabet.rank(symbol)}")
            case Apply(symbol, children):
                r = alphabet.rank(symbol)
                if r != len(children):
                    raise AlphabetError(f"{unmark(symbol)!r} has rank {r} but is applied "
                                        f"to {len(children)} arguments")
                if r == 0:
                    raise AlphabetError(f"constant {unmark(symbol)!r} cannot take arguments")
            case Product(_, c, _) | Star(_, c):
                if alphabet.rank(c) != 0:
                    raise AlphabetError(f"annotation {c!r} must be a constant")


def inferred_alphabet(expr: TreeExpr) -> RankedAlphabet:
    """Reconstruct a ranked alphabet from the symbols used in ``expr``."""
    ranks: dict[str, int] = {}

    def put(name: str, rank: int) -> None:
        if ranks.setdefault(name, rank) != rank:
            raise AlphabetError(f"symbol {name!r} used at ranks {ranks[name]} and {rank}")

    for e in subexpressions(expr):
        match e:
            case Const(symbol):
                put(symbol, 0)
            case Apply(symbol, children):
                put(unmark(symbol), len(children))
            case Product(_, c, _) | Star(_, c):
                put(c, 0)
    return RankedAlphabet(ranks)


# ---------------------------------------------------------------------------
# Star normalization and linearization


def normalize_stars(expr: TreeExpr) -> TreeExpr:
    """Rewrite every star body ``F*c`` into ``(F + c)*c``.

    The rewritten star body always contains its annotation constant, which the
    inductive First/Follow recurrences rely on.  The language is unchanged and
    the rewriting is idempotent: a body that is already a sum ending in the
    annotation constant is left alone.
    """
    match expr:
        case Empty() | Const(_):
            return expr
        case Apply(symbol, children):
            return Apply(symbol, tuple(normalize_stars(k) for k in children))
        case Sum(left, right):
            return Sum(normalize_stars(left), normalize_stars(right))
        case Product(left, c, right):
            return Product(normalize_stars(left), c, normalize_stars(right))
        case Star(child, c):
            body = normalize_stars(child)
            if not (isinstance(body, Sum) and body.right == Const(c)):
                body = Sum(body, Const(c))
            return Star(body, c)
    raise TypeError(f"not a TreeExpr: {expr!r}")


def is_star_normalized(expr: TreeExpr) -> bool:
    for e in subexpressions(expr):
        if isinstance(e, Star):
            if not (isinstance(e.child, Sum) and e.child.right == Const(e.c)):
                return False
    return True


def is_linear(expr: TreeExpr) -> bool:
    """True iff no rank>=1 symbol labels two application nodes."""
    seen: set[Symbol] = set()
    for e in subexpressions(expr):
        if isinstance(e, Apply):
            if e.symbol in seen:
                return False
            seen.add(e.symbol)
    return True


class LinearizedExpr:
    """An expression whose rank>=1 occurrences are uniquely marked positions.

    ``positions`` lists the marks in ascending order (which is also preorder).
    The un-marking map sends each position to its base symbol; applying it
    homomorphically recovers ``origin``.  Instances are immutable.
    """

    def __init__(self, expr: TreeExpr):
        arity: dict[Position, int] = {}
        for e in subexpressions(expr):
            if isinstance(e, Apply):
                if not isinstance(e.symbol, Position):
                    raise ValueError(f"unmarked rank>=1 symbol {e.symbol!r}")
                if e.symbol in arity:
                    raise ValueError(f"duplicate position {e.symbol}")
                arity[e.symbol] = len(e.children)
        self.expr = expr
        self._arity = arity

    @property
    def positions(self) -> tuple[Position, ...]:
        return tuple(sorted(self._arity, key=lambda p: p.mark))

    def arity(self, position: Position) -> int:
        if position not in self._arity:
            raise ValueError(f"position {position} does not occur")
        return self._arity[position]

    def __contains__(self, position: Position) -> bool:
        return position in self._arity

    @property
    def h_map(self) -> dict[Position, str]:
        return {p: p.base for p in self._arity}

    @property
    def origin(self) -> TreeExpr:
        return h_expr(self.expr)

    def normalized(self) -> "LinearizedExpr":
        """Star-normalize the marked expression; marks are unchanged."""
        return LinearizedExpr(normalize_stars(self.expr))

    def is_normalized(self) -> bool:
        return is_star_normalized(self.expr)

    def __repr__(self) -> str:
        return f"LinearizedExpr({to_text(self.expr)})"


def linearize(expr: TreeExpr) -> LinearizedExpr:
    """Mark the rank>=1 occurrences 1, 2, ... in left-to-right preorder."""
    counter = itertools.count(1)

    def mark(e: TreeExpr) -> TreeExpr:
        match e:
            case Empty() | Const(_):
                return e
            case Apply(symbol, children):
                pos = Position(unmark(symbol), next(counter))
                return Apply(pos, tuple(mark(k) for k in children))
            case Sum(left, right):
                return Sum(mark(left), mark(right))
            case Product(left, c, right):
                return Product(mark(left), c, mark(right))
            case Star(child, c):
                return Star(mark(child), c)
        raise TypeError(f"not a TreeExpr: {e!r}")

    return LinearizedExpr(mark(expr))


# ---------------------------------------------------------------------------
# Ground trees


@dataclass(frozen=True, slots=True)
class GroundTree:
    """A tree over the alphabet; leaves are constants."""

    symbol: Symbol
    children: tuple["GroundTree", ...] = ()

    def __str__(self) -> str:
        if not self.children:
            return str(self.symbol)
        return f"{self.symbol}({','.join(str(k) for k in self.children)})"


def tree_depth(t: GroundTree) -> int:
    """Depth of a tree; a lone constant has depth 1."""
    return 1 + max((tree_depth(k) for k in t.children), default=0)


def tree_leaves(t: GroundTree) -> frozenset[str]:
    """The constants occurring as leaves of ``t``."""
    out: set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if node.children:
            stack.extend(node.children)
        else:
            out.add(unmark(node.symbol))  # leaves always have rank 0
    return frozenset(out)


def subtrees(t: GroundTree) -> Iterator[GroundTree]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def h_tree(t: GroundTree) -> GroundTree:
    """Un-mark every symbol of a ground tree."""
    return GroundTree(unmark(t.symbol), tuple(h_tree(k) for k in t.children))


def validate_tree(t: GroundTree, alphabet: RankedAlphabet) -> None:
    for node in subtrees(t):
        r = alphabet.rank(node.symbol)
        if r != len(node.children):
            raise AlphabetError(f"{unmark(node.symbol)!r} has rank {r} but carries "
                                f"{len(node.children)} subtrees")


# ---------------------------------------------------------------------------
# Printing

_PREC_SUM, _PREC_PRODUCT, _PREC_STAR, _PREC_ATOM = 1, 2, 3, 4


def _prec(expr: TreeExpr) -> int:
    match expr:
        case Sum(_, _):
            return _PREC_SUM
        case Product(_, _, _):
            return _PREC_PRODUCT
        case Star(_, _):
            return _PREC_STAR
        case _:
            return _PREC_ATOM


def to_text(expr: TreeExpr) -> str:
    """Render with minimal parentheses; star binds tighter than product than sum."""

    def wrap(e: TreeExpr, parent_prec: int, right_side: bool = False) -> str:
        s = go(e)
        p = _prec(e)
        if p < parent_prec or (right_side and p == parent_prec):
            return f"({s})"
        return s

    def go(e: TreeExpr) -> str:
        match e:
            case Empty():
                return "0"
            case Const(symbol):
                return symbol
            case Apply(symbol, children):
                return f"{symbol}({', '.join(go(k) for k in children)})"
            case Sum(left, right):
                return f"{wrap(left, _PREC_SUM)} + {wrap(right, _PREC_SUM, True)}"
            case Product(left, c, right):
                return f"{wrap(left, _PREC_PRODUCT)} .{c} {wrap(right, _PREC_PRODUCT, True)}"
            case Star(child, c):
                return f"{wrap(child, _PREC_STAR)}*{c}"
        raise TypeError(f"not a TreeExpr: {e!r}")

    return go(expr)
