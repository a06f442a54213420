"""Follow-link structure over the syntax tree and the fast Follow algorithms.

``build_zpc`` decorates the syntax tree of a star-normalized linearized
expression with three layers, each computable in one bottom-up/top-down pass:

* per-node constant-part First sets (``first0``) and Last sets;
* a pruned copy of the child links (the First forest) whose reachable
  application nodes below a node are exactly the position part of its First
  set: a product loses the link to its right factor when the annotation
  constant cannot be produced by the left factor, application nodes lose all
  child links, and constant leaves drop out of the forest entirely (the nodes
  stay in the arena so subexpression Firsts remain addressable);
* follow links: the left factor of a product points at the right factor, the
  body of a star points back at the star node.

Three Follow computations ride on the structure: the follow-link chain product
(``follow_via_gamma``), the two-phase constant/position walk (``follow_fast``),
and the per-symbol substitution scheme (``follow_all``) that rewrites the
queried application to a single constant child and reuses rank-1 queries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import (
    Apply,
    Const,
    Empty,
    LinearizedExpr,
    Position,
    Product,
    Star,
    Sum,
    TreeExpr,
    to_text,
)
from .positions import PositionSet


@dataclass(slots=True)
class ZpcNode:
    id: int
    expr: TreeExpr
    parent: int | None
    children: tuple[int, ...] = ()
    forest_children: tuple[int, ...] = ()
    in_forest: bool = True
    first0: frozenset[str] = frozenset()
    last: frozenset[str] = frozenset()
    gamma: int | None = None

    @property
    def label(self) -> str:
        match self.expr:
            case Empty():
                return "0"
            case Const(symbol):
                return symbol
            case Apply(symbol, _):
                return str(symbol)
            case Sum(_, _):
                return "+"
            case Product(_, c, _):
                return f".{c}"
            case Star(_, c):
                return f"*{c}"
        raise TypeError(f"not a TreeExpr: {self.expr!r}")


class ZpcStructure:
    """Immutable arena of decorated syntax-tree nodes; ids are preorder ranks."""

    def __init__(self, lin: LinearizedExpr):
        if not lin.is_normalized():
            raise ValueError("expression must be star-normalized first")
        self.lin = lin
        self.nodes: list[ZpcNode] = []
        self.position_index: dict[Position, int] = {}
        self.removed_product_links: list[tuple[int, int]] = []
        self.removed_apply_links: list[tuple[int, int]] = []
        self.deleted_constant_nodes: list[int] = []
        self.gamma_links: list[tuple[int, int]] = []
        self._build(lin.expr)

    # -- construction ------------------------------------------------------

    def _add(self, expr: TreeExpr, parent: int | None) -> int:
        nid = len(self.nodes)
        self.nodes.append(ZpcNode(nid, expr, parent))
        match expr:
            case Apply(symbol, children):
                self.position_index[symbol] = nid
                kids = children
            case Sum(left, right) | Product(left, _, right):
                kids = (left, right)
            case Star(child, _):
                kids = (child,)
            case _:
                kids = ()
        self.nodes[nid].children = tuple(self._add(k, nid) for k in kids)
        return nid

    def _build(self, expr: TreeExpr) -> None:
        self._add(expr, None)
        nodes = self.nodes

        # Per-node constant sets, bottom-up (children have larger preorder ids).
        for node in reversed(nodes):
            kids = node.children
            match node.expr:
                case Empty():
                    pass
                case Const(symbol):
                    node.first0 = frozenset({symbol})
                    node.last = frozenset({symbol})
                case Apply(_, _):
                    node.last = frozenset().union(*(nodes[k].last for k in kids))
                case Sum(_, _):
                    node.first0 = nodes[kids[0]].first0 | nodes[kids[1]].first0
                    node.last = nodes[kids[0]].last | nodes[kids[1]].last
                case Product(_, c, _):
                    lf, rf = nodes[kids[0]].first0, nodes[kids[1]].first0
                    node.first0 = (lf - {c}) | rf if c in lf else lf
                    ll, rl = nodes[kids[0]].last, nodes[kids[1]].last
                    node.last = (ll - {c}) | rl if c in ll else ll
                case Star(_, c):
                    node.first0 = nodes[kids[0]].first0
                    node.last = nodes[kids[0]].last | {c}

        # First forest: prune product links without the annotation constant,
        # cut below applications, drop constant leaves.
        for node in nodes:
            kept = list(node.children)
            match node.expr:
                case Product(_, c, _):
                    if c not in nodes[node.children[0]].first0:
                        kept.remove(node.children[1])
                        self.removed_product_links.append((node.id, node.children[1]))
                case Apply(_, _):
                    for k in kept:
                        self.removed_apply_links.append((node.id, k))
                    kept = []
            node.forest_children = tuple(kept)
        for node in nodes:
            if isinstance(node.expr, Const):
                node.in_forest = False
                self.deleted_constant_nodes.append(node.id)
                if node.parent is not None:
                    parent = nodes[node.parent]
                    parent.forest_children = tuple(
                        k for k in parent.forest_children if k != node.id)

        # Follow links.
        for node in nodes:
            match node.expr:
                case Product(_, _, _):
                    left, right = node.children
                    nodes[left].gamma = right
                    self.gamma_links.append((left, right))
                case Star(_, _):
                    (child,) = node.children
                    nodes[child].gamma = node.id
                    self.gamma_links.append((child, node.id))

    # -- queries -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def root(self) -> int:
        return 0

    def node(self, nid: int) -> ZpcNode:
        if not 0 <= nid < len(self.nodes):
            raise ValueError(f"no node {nid}")
        return self.nodes[nid]

    def first_sup_from_forest(self, nid: int,
                              visited: set[int] | None = None) -> frozenset[Position]:
        """Positions of the forest below ``nid`` by prefix traversal.

        A shared ``visited`` set lets one query union several nested forests
        without retraversing shared parts.
        """
        node = self.node(nid)
        if not node.in_forest:
            return frozenset()
        out: set[Position] = set()
        stack = [nid]
        while stack:
            cur = stack.pop()
            if visited is not None:
                if cur in visited:
                    continue
                visited.add(cur)
            n = self.nodes[cur]
            if isinstance(n.expr, Apply):
                out.add(n.expr.symbol)
            stack.extend(reversed(n.forest_children))
        return frozenset(out)

    def first_of(self, nid: int) -> PositionSet:
        """First set of the subexpression rooted at ``nid``."""
        return PositionSet(self.node(nid).first0, self.first_sup_from_forest(nid))

    def gamma_chain(self, nid: int) -> list[int]:
        """Nodes on the path from ``nid`` to the root carrying a follow link,
        innermost first."""
        self.node(nid)
        chain = []
        cur: int | None = nid
        while cur is not None:
            if self.nodes[cur].gamma is not None:
                chain.append(cur)
            cur = self.nodes[cur].parent
        return chain

    def _annotation(self, nid: int) -> str:
        parent = self.nodes[self.nodes[nid].parent]
        match parent.expr:
            case Product(_, c, _) | Star(_, c):
                return c
        raise AssertionError("follow link under a non-product, non-star node")

    def _query_node(self, p: Position, k: int) -> int:
        if p not in self.position_index:
            raise ValueError(f"position {p} does not occur in the expression")
        nid = self.position_index[p]
        m = len(self.nodes[nid].children)
        if not 1 <= k <= m:
            raise ValueError(f"child index {k} out of range 1..{m} for {p}")
        return nid

    def in_dead_branch(self, nid: int) -> bool:
        """True iff ``nid`` sits in the right factor of some product whose left
        factor never yields the annotation constant as a leaf; subtrees of the
        right factor then never occur in any denoted tree and all Follow sets
        below are empty.  The follow-link chain and the substitution scheme
        cannot see this case and must check it explicitly."""
        nodes = self.nodes
        cur = nid
        while nodes[cur].parent is not None:
            par = nodes[nodes[cur].parent]
            if isinstance(par.expr, Product):
                left, right = par.children
                if cur == right and par.expr.c not in nodes[left].last:
                    return True
            cur = par.id
        return False


def build_zpc(lin: LinearizedExpr) -> ZpcStructure:
    return ZpcStructure(lin)


def follow_via_gamma(z: ZpcStructure, p: Position, k: int) -> PositionSet:
    """Follow as the chained set product of Firsts along the follow links.

    The chain formula alone cannot express the dead-branch case of the
    reference recursion (see ``ZpcStructure.in_dead_branch``), so that guard
    is checked up front.
    """
    nid = z._query_node(p, k)
    if z.in_dead_branch(nid):
        return PositionSet()
    acc = z.first_of(z.nodes[nid].children[k - 1])
    for link in z.gamma_chain(nid):
        acc = acc.c_product(z._annotation(link), z.first_of(z.nodes[link].gamma))
    return acc


def follow_fast(z: ZpcStructure, p: Position, k: int) -> PositionSet:
    """Follow by one walk from the queried node to the root.

    The constant half is updated by the split recurrences at each product and
    star passed; the position half unions the forest of the linked sibling or
    star body whenever the annotation constant is present in the constant half
    at that point.  A per-query visited set keeps the total forest traversal
    linear even when star bodies nest.
    """
    nid = z._query_node(p, k)
    nodes = z.nodes
    visited: set[int] = set()
    start = nodes[nid].children[k - 1]
    las = set(nodes[start].first0)
    fw = set(z.first_sup_from_forest(start, visited))
    cur = nid
    while nodes[cur].parent is not None:
        par = nodes[nodes[cur].parent]
        match par.expr:
            case Product(_, c, _):
                left, right = par.children
                if cur == left:
                    if c in las:
                        las -= {c}
                        las |= nodes[right].first0
                        fw |= z.first_sup_from_forest(right, visited)
                elif c not in nodes[left].last:
                    # The left factor never produces the annotation constant,
                    # so nothing of the right factor is reachable.
                    las.clear()
                    fw.clear()
            case Star(_, c):
                if c in las:
                    las -= {c}
                    las |= nodes[cur].first0
                    fw |= z.first_sup_from_forest(cur, visited)
        cur = par.id
    return PositionSet(frozenset(las), frozenset(fw))


def substitute_subexpr(lin: LinearizedExpr, p: Position, a: str) -> LinearizedExpr:
    """Replace the application of ``p`` (and its whole subtree) by ``p(a)``.

    The position keeps its mark but is used at rank 1 in the result; all other
    structure is unchanged.
    """
    if p not in lin:
        raise ValueError(f"position {p} does not occur in the expression")
    if not isinstance(a, str):
        raise ValueError(f"replacement {a!r} must be a constant")

    # Only the spine from the root down to p is rebuilt; untouched subtrees
    # are shared with the input.
    def go(e: TreeExpr) -> TreeExpr | None:
        match e:
            case Apply(symbol, children):
                if symbol == p:
                    return Apply(symbol, (Const(a),))
                for i, kid in enumerate(children):
                    new = go(kid)
                    if new is not None:
                        kids = children[:i] + (new,) + children[i + 1:]
                        return Apply(symbol, kids)
            case Sum(left, right):
                if (new := go(left)) is not None:
                    return Sum(new, right)
                if (new := go(right)) is not None:
                    return Sum(left, new)
            case Product(left, c, right):
                if (new := go(left)) is not None:
                    return Product(new, c, right)
                if (new := go(right)) is not None:
                    return Product(left, c, new)
            case Star(child, c):
                if (new := go(child)) is not None:
                    return Star(new, c)
        return None

    replaced = go(lin.expr)
    assert replaced is not None
    return LinearizedExpr(replaced)


def follow_all(lin: LinearizedExpr) -> dict[tuple[Position, int], PositionSet]:
    """Every Follow set, via per-symbol substitution.

    For each position, the expression is rewritten once per constant in the
    union of its children's constant Firsts, and the rank-1 Follow of each
    rewrite is cached; Follow(p, k) is then the forest positions of the k-th
    child joined with the cached sets of that child's constants.
    """
    z = build_zpc(lin)
    out: dict[tuple[Position, int], PositionSet] = {}
    for p in lin.positions:
        nid = z.position_index[p]
        kids = z.nodes[nid].children
        if z.in_dead_branch(nid):
            # The scheme would still report the child's forest positions,
            # but nothing below a dead branch occurs in any tree.
            for k in range(1, len(kids) + 1):
                out[(p, k)] = PositionSet()
            continue
        cache: dict[str, PositionSet] = {}
        for a in sorted(frozenset().union(*(z.nodes[k].first0 for k in kids))):
            sub = substitute_subexpr(lin, p, a)
            cache[a] = follow_fast(build_zpc(sub), p, 1)
        for k, kid in enumerate(kids, start=1):
            acc = PositionSet(marked=z.first_sup_from_forest(kid))
            for a in z.nodes[kid].first0:
                acc = acc | cache[a]
            out[(p, k)] = acc
    return out


def zpc_to_dot(z: ZpcStructure) -> str:
    """Graph description of the structure: solid forest edges, dashed removed
    edges, red follow links, grayed-out deleted constant leaves."""
    lines = ["digraph zpc {", "  node [shape=ellipse];"]
    for node in z.nodes:
        style = ' color=gray fontcolor=gray style=dashed' if not node.in_forest else ""
        lines.append(f'  n{node.id} [label="{node.label}"{style}];')
    for node in z.nodes:
        in_forest = set(node.forest_children)
        for kid in node.children:
            style = "" if kid in in_forest else " [style=dashed]"
            lines.append(f"  n{node.id} -> n{kid}{style};")
    for src, dst in z.gamma_links:
        lines.append(f"  n{src} -> n{dst} [color=red constraint=false];")
    lines.append(f'  label="{to_text(z.lin.expr)}";')
    lines.append("}")
    return "\n".join(lines)
