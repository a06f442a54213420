"""First, Last, and Follow over linearized expressions.

Two independent routes are provided:

* the reference recursions (``first_naive``, ``last_naive``, ``follow_naive``)
  that compute whole sets mixing constants and positions, and
* the split recurrences (``first0``/``first_sup`` and
  ``last_follow``/``follow_sup``) that compute the constant part and the
  position part separately and must recombine to the reference.

All functions require star-normalized input: the star recurrences assume the
star body contains its annotation constant.  Callers normalize first (see
``LinearizedExpr.normalized``); the precondition is asserted, not repaired.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .expr import (
    Apply,
    Const,
    Empty,
    LinearizedExpr,
    Position,
    Product,
    Star,
    Sum,
    Symbol,
    TreeExpr,
    occurs,
)
from .language import contains_constant


@dataclass(frozen=True)
class PositionSet:
    """A set of symbols split into constants and marked positions.

    The two parts are disjoint by construction; iteration is canonical
    (constants sorted, then positions by mark index) so printed output is
    deterministic.
    """

    constants: frozenset[str] = frozenset()
    marked: frozenset[Position] = frozenset()

    @staticmethod
    def of(items: Iterable[Symbol]) -> "PositionSet":
        consts, marked = set(), set()
        for item in items:
            (marked if isinstance(item, Position) else consts).add(item)
        return PositionSet(frozenset(consts), frozenset(marked))

    def __contains__(self, item: Symbol) -> bool:
        return item in self.marked if isinstance(item, Position) else item in self.constants

    def __iter__(self) -> Iterator[Symbol]:
        yield from sorted(self.constants)
        yield from sorted(self.marked, key=lambda p: p.mark)

    def __len__(self) -> int:
        return len(self.constants) + len(self.marked)

    def __or__(self, other: "PositionSet") -> "PositionSet":
        return PositionSet(self.constants | other.constants, self.marked | other.marked)

    def c_product(self, c: str, other: "PositionSet") -> "PositionSet":
        """Set-level product step: if ``c`` is present, replace it by ``other``."""
        if c not in self.constants:
            return self
        return PositionSet(self.constants - {c}, self.marked) | other

    def as_set(self) -> frozenset[Symbol]:
        return frozenset(self.constants) | frozenset(self.marked)

    def __str__(self) -> str:
        return "{" + ", ".join(str(s) for s in self) + "}"


def _require_ready(lin: LinearizedExpr) -> None:
    if not lin.is_normalized():
        raise ValueError("expression must be star-normalized first")


def _check_query(lin: LinearizedExpr, p: Position, k: int) -> None:
    if p not in lin:
        raise ValueError(f"position {p} does not occur in the expression")
    m = lin.arity(p)
    if not 1 <= k <= m:
        raise ValueError(f"child index {k} out of range 1..{m} for {p}")


# ---------------------------------------------------------------------------
# Reference recursions


def _first(e: TreeExpr) -> PositionSet:
    match e:
        case Empty():
            return PositionSet()
        case Const(symbol):
            return PositionSet(constants=frozenset({symbol}))
        case Apply(symbol, _):
            return PositionSet(marked=frozenset({symbol}))
        case Sum(left, right):
            return _first(left) | _first(right)
        case Product(left, c, right):
            f = _first(left)
            if contains_constant(left, c):
                return PositionSet(f.constants - {c}, f.marked) | _first(right)
            return f
        case Star(child, _):
            return _first(child)
    raise TypeError(f"not a TreeExpr: {e!r}")


def _last(e: TreeExpr) -> frozenset[str]:
    match e:
        case Empty():
            return frozenset()
        case Const(symbol):
            return frozenset({symbol})
        case Apply(_, children):
            return frozenset().union(*(_last(k) for k in children))
        case Sum(left, right):
            return _last(left) | _last(right)
        case Product(left, c, right):
            ll = _last(left)
            if c in ll:
                return (ll - {c}) | _last(right)
            return ll
        case Star(child, c):
            return _last(child) | {c}
    raise TypeError(f"not a TreeExpr: {e!r}")


def _follow(e: TreeExpr, p: Position, k: int) -> PositionSet:
    match e:
        case Empty() | Const(_):
            return PositionSet()
        case Apply(symbol, children):
            if symbol == p:
                return _first(children[k - 1])
            for kid in children:
                if occurs(kid, p):
                    return _follow(kid, p, k)
            return PositionSet()
        case Sum(left, right):
            if occurs(left, p):
                return _follow(left, p, k)
            if occurs(right, p):
                return _follow(right, p, k)
            return PositionSet()
        case Product(left, c, right):
            if occurs(left, p):
                f = _follow(left, p, k)
                if c in f.constants:
                    return PositionSet(f.constants - {c}, f.marked) | _first(right)
                return f
            if occurs(right, p) and c in _last(left):
                return _follow(right, p, k)
            return PositionSet()
        case Star(child, c):
            f = _follow(child, p, k)
            if c in f.constants:
                return f | _first(child)
            return f
    raise TypeError(f"not a TreeExpr: {e!r}")


def first_naive(lin: LinearizedExpr) -> PositionSet:
    """Roots of the denoted trees, by the inductive rules."""
    _require_ready(lin)
    return _first(lin.expr)


def last_naive(lin: LinearizedExpr) -> frozenset[str]:
    """Constants occurring as leaves of some denoted tree."""
    _require_ready(lin)
    return _last(lin.expr)


def follow_naive(lin: LinearizedExpr, p: Position, k: int) -> PositionSet:
    """Symbols that can appear as the k-th child of ``p`` in a denoted tree."""
    _require_ready(lin)
    _check_query(lin, p, k)
    return _follow(lin.expr, p, k)


# ---------------------------------------------------------------------------
# Split recurrences: constant parts


def _firs(e: TreeExpr) -> frozenset[str]:
    match e:
        case Empty() | Apply(_, _):
            return frozenset()
        case Const(symbol):
            return frozenset({symbol})
        case Sum(left, right):
            return _firs(left) | _firs(right)
        case Product(left, c, right):
            if contains_constant(left, c):
                return (_firs(left) - {c}) | _firs(right)
            return _firs(left)
        case Star(child, _):
            return _firs(child)
    raise TypeError(f"not a TreeExpr: {e!r}")


def _las(e: TreeExpr, p: Position, k: int) -> frozenset[str]:
    match e:
        case Empty() | Const(_):
            return frozenset()
        case Apply(symbol, children):
            if symbol == p:
                return _firs(children[k - 1])
            for kid in children:
                if occurs(kid, p):
                    return _las(kid, p, k)
            return frozenset()
        case Sum(left, right):
            if occurs(left, p):
                return _las(left, p, k)
            if occurs(right, p):
                return _las(right, p, k)
            return frozenset()
        case Product(left, c, right):
            if occurs(left, p):
                s = _las(left, p, k)
                if c in s:
                    return (s - {c}) | _firs(right)
                return s
            if occurs(right, p) and c in _last(left):
                return _las(right, p, k)
            return frozenset()
        case Star(child, c):
            s = _las(child, p, k)
            if c in s:
                return (s - {c}) | _firs(child)
            return s
    raise TypeError(f"not a TreeExpr: {e!r}")


# ---------------------------------------------------------------------------
# Split recurrences: position parts (the word-like half)


def _firstt(e: TreeExpr) -> frozenset[Position]:
    match e:
        case Empty() | Const(_):
            return frozenset()
        case Apply(symbol, _):
            return frozenset({symbol})
        case Sum(left, right):
            return _firstt(left) | _firstt(right)
        case Product(left, c, right):
            if contains_constant(left, c):
                return _firstt(left) | _firstt(right)
            return _firstt(left)
        case Star(child, _):
            return _firstt(child)
    raise TypeError(f"not a TreeExpr: {e!r}")


def _fw(e: TreeExpr, p: Position, k: int) -> frozenset[Position]:
    match e:
        case Empty() | Const(_):
            return frozenset()
        case Apply(symbol, children):
            if symbol == p:
                return _firstt(children[k - 1])
            for kid in children:
                if occurs(kid, p):
                    return _fw(kid, p, k)
            return frozenset()
        case Sum(left, right):
            if occurs(left, p):
                return _fw(left, p, k)
            if occurs(right, p):
                return _fw(right, p, k)
            return frozenset()
        case Product(left, c, right):
            if occurs(left, p):
                if c in _las(left, p, k):
                    return _fw(left, p, k) | _firstt(right)
                return _fw(left, p, k)
            if occurs(right, p) and c in _last(left):
                return _fw(right, p, k)
            return frozenset()
        case Star(child, c):
            if c in _las(child, p, k):
                return _fw(child, p, k) | _firstt(child)
            return _fw(child, p, k)
    raise TypeError(f"not a TreeExpr: {e!r}")


def first0(lin: LinearizedExpr) -> frozenset[str]:
    """Constant part of First."""
    _require_ready(lin)
    return _firs(lin.expr)


def first_sup(lin: LinearizedExpr) -> frozenset[Position]:
    """Position part of First."""
    _require_ready(lin)
    return _firstt(lin.expr)


def last_follow(lin: LinearizedExpr, p: Position, k: int) -> frozenset[str]:
    """Constant part of Follow."""
    _require_ready(lin)
    _check_query(lin, p, k)
    return _las(lin.expr, p, k)


def follow_sup(lin: LinearizedExpr, p: Position, k: int) -> frozenset[Position]:
    """Position part of Follow."""
    _require_ready(lin)
    _check_query(lin, p, k)
    return _fw(lin.expr, p, k)


def follow_decomposed(lin: LinearizedExpr, p: Position, k: int) -> PositionSet:
    """Follow reassembled from its constant and position halves."""
    return PositionSet(last_follow(lin, p, k), follow_sup(lin, p, k))
