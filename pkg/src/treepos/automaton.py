"""Bottom-up nondeterministic tree automata built from First/Follow sets.

The construction has one state per (position, child index) pair plus a single
final state; a rule reads an un-marked symbol and its argument states and
yields the states whose Follow (or First, for the final state) admits the
symbol's position.  Constants give rise to rules with no argument states.
"""

from __future__ import annotations

import json
from typing import Iterable

from .expr import (
    GroundTree,
    Position,
    RankedAlphabet,
    TreeExpr,
    inferred_alphabet,
    linearize,
    normalize_stars,
    validate_tree,
)
from .positions import PositionSet
from .zpc import build_zpc, follow_all

FINAL_STATE = "eps1"

Rule = tuple[str, tuple[str, ...], str]  # (symbol, argument states, target)


def state_name(p: Position, k: int) -> str:
    return f"{p.base}{p.mark}^{k}"


class Nfta:
    """A bottom-up tree automaton; immutable after construction.

    ``rules`` holds triples ``(symbol, args, target)`` meaning that reading
    ``symbol`` on subtrees evaluating to ``args`` can produce ``target``.
    """

    def __init__(self, alphabet: RankedAlphabet, states: Iterable[str],
                 final: Iterable[str], rules: Iterable[Rule]):
        self.alphabet = alphabet
        self.states = frozenset(states)
        self.final = frozenset(final)
        self.rules = frozenset(rules)
        if not self.final <= self.states:
            raise ValueError("final states must be states")
        by_symbol: dict[str, list[tuple[tuple[str, ...], str]]] = {}
        for symbol, args, target in self.rules:
            if alphabet.rank(symbol) != len(args):
                raise ValueError(f"rule for {symbol!r} has {len(args)} argument states "
                                 f"but the symbol has rank {alphabet.rank(symbol)}")
            by_symbol.setdefault(symbol, []).append((args, target))
        self._by_symbol = by_symbol

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Nfta):
            return (self.alphabet == other.alphabet and self.states == other.states
                    and self.final == other.final and self.rules == other.rules)
        return NotImplemented

    def sorted_states(self) -> list[str]:
        return sorted(self.states, key=lambda s: (s != FINAL_STATE, s))

    def sorted_rules(self) -> list[Rule]:
        return sorted(self.rules)

    def __repr__(self) -> str:
        return f"Nfta(states={len(self.states)}, rules={len(self.rules)})"


def build_position_automaton(expr: TreeExpr,
                             alphabet: RankedAlphabet | None = None) -> Nfta:
    """Build the position tree automaton recognizing the expression's language.

    The expression is star-normalized and linearized internally.  ``alphabet``
    defaults to the symbols occurring in the expression; passing the full
    declared alphabet lets membership queries range over unused symbols too.
    """
    if alphabet is None:
        alphabet = inferred_alphabet(expr)
    lin = linearize(normalize_stars(expr))
    arity = {p: lin.arity(p) for p in lin.positions}

    states = {FINAL_STATE}
    for p, m in arity.items():
        states.update(state_name(p, k) for k in range(1, m + 1))

    def rules_into(target: str, admitted: PositionSet) -> Iterable[Rule]:
        for c in admitted.constants:
            yield (c, (), target)
        for g in admitted.marked:
            args = tuple(state_name(g, i) for i in range(1, arity[g] + 1))
            yield (g.base, args, target)

    follows = follow_all(lin)
    first = build_zpc(lin).first_of(0)
    rules: set[Rule] = set(rules_into(FINAL_STATE, first))
    for (p, k), fset in follows.items():
        rules.update(rules_into(state_name(p, k), fset))
    return Nfta(alphabet, states, {FINAL_STATE}, rules)


def run_states(nfta: Nfta, t: GroundTree) -> frozenset[str]:
    """The states reachable bottom-up on ``t``."""
    validate_tree(t, nfta.alphabet)

    def go(node: GroundTree) -> frozenset[str]:
        child_states = [go(k) for k in node.children]
        out = set()
        for args, target in nfta._by_symbol.get(node.symbol, []):
            if all(a in s for a, s in zip(args, child_states)):
                out.add(target)
        return frozenset(out)

    return go(t)


def accepts(nfta: Nfta, t: GroundTree) -> bool:
    """True iff some run on ``t`` reaches a final state."""
    return bool(run_states(nfta, t) & nfta.final)


# ---------------------------------------------------------------------------
# Export / import


def to_json(nfta: Nfta) -> str:
    doc = {
        "alphabet": [{"symbol": s, "rank": r}
                     for s, r in sorted(nfta.alphabet.ranks().items())],
        "states": nfta.sorted_states(),
        "final": sorted(nfta.final),
        "rules": [{"symbol": s, "args": list(args), "target": t}
                  for s, args, t in nfta.sorted_rules()],
    }
    return json.dumps(doc, indent=2) + "\n"


def nfta_from_json(text: str) -> Nfta:
    try:
        doc = json.loads(text)
        alphabet = RankedAlphabet({e["symbol"]: e["rank"] for e in doc["alphabet"]})
        rules = [(r["symbol"], tuple(r["args"]), r["target"]) for r in doc["rules"]]
        return Nfta(alphabet, doc["states"], doc["final"], rules)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValueError(f"bad automaton JSON: {exc}") from exc


def to_dot(nfta: Nfta) -> str:
    """DOT rendering: double circles for final states, fan-in points for
    symbols of rank >= 2, floating labels for constant rules."""
    lines = ["digraph nfta {", "  rankdir=LR;", "  node [shape=circle];"]
    for s in nfta.sorted_states():
        shape = "doublecircle" if s in nfta.final else "circle"
        lines.append(f'  "{s}" [shape={shape}];')
    aux = 0
    for symbol, args, target in nfta.sorted_rules():
        if len(args) == 0:
            lines.append(f'  c{aux} [shape=plaintext label="{symbol}"];')
            lines.append(f'  c{aux} -> "{target}";')
            aux += 1
        elif len(args) == 1:
            lines.append(f'  "{args[0]}" -> "{target}" [label="{symbol}"];')
        else:
            lines.append(f'  j{aux} [shape=point label=""];')
            for a in args:
                lines.append(f'  "{a}" -> j{aux} [arrowhead=none];')
            lines.append(f'  j{aux} -> "{target}" [label="{symbol}"];')
            aux += 1
    lines.append("}")
    return "\n".join(lines)


def export_automaton(nfta: Nfta, format: str) -> str:
    """Serialize as ``"json"`` or ``"dot"``; both orderings are canonical."""
    if format == "json":
        return to_json(nfta)
    if format == "dot":
        return to_dot(nfta)
    raise ValueError(f"unknown format {format!r} (expected 'json' or 'dot')")
