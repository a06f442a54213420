import random
from collections import Counter

import pytest

from treepos import (
    Apply,
    Const,
    Position,
    PositionSet,
    Product,
    RankedAlphabet,
    Star,
    Sum,
    build_zpc,
    follow_all,
    follow_fast,
    follow_naive,
    follow_via_gamma,
    linearize,
    normalize_stars,
    parse_expression,
    size,
    substitute_subexpr,
    zpc_to_dot,
)
from treepos.generator import random_expression

from conftest import EXAMPLE_FOLLOW, F1, F4, G3, H5


def lin_of(expr):
    return linearize(normalize_stars(expr))


def labels(z, pairs):
    return Counter((z.nodes[a].label, z.nodes[b].label) for a, b in pairs)


def test_build_requires_normalization(example_lin):
    with pytest.raises(ValueError, match="normalized"):
        build_zpc(example_lin)


def test_node_count_equals_size(example_zpc, example_norm):
    assert len(example_zpc) == size(example_norm.expr) == 34


def test_example_gamma_links(example_zpc):
    # One link per product node (left factor -> right factor) and one per
    # star node (body -> star), eight in total here.
    z = example_zpc
    assert len(z.gamma_links) == 8
    assert labels(z, z.gamma_links) == Counter({
        ("+", "*b"): 2, ("+", "*a"): 2, ("+", "*c"): 1,
        ("*a", "b"): 2, ("*c", "*b"): 1,
    })
    for src, dst in z.gamma_links:
        parent = z.nodes[z.nodes[src].parent]
        if isinstance(parent.expr, Star):
            assert dst == parent.id
        else:
            assert isinstance(parent.expr, Product)
            assert dst == parent.children[1] and src == parent.children[0]


def test_gamma_only_from_products_and_stars(example_zpc):
    z = example_zpc
    linked = {src for src, _ in z.gamma_links}
    for node in z.nodes:
        if node.parent is None:
            assert node.gamma is None
            continue
        parent = z.nodes[node.parent]
        if isinstance(parent.expr, Star):
            assert node.id in linked
        elif isinstance(parent.expr, Product) and node.id == parent.children[0]:
            assert node.id in linked
        else:
            assert node.gamma is None  # sums and applications induce no links


def test_example_forest_removals(example_zpc):
    z = example_zpc
    assert z.removed_product_links == []
    assert labels(z, z.removed_apply_links) == Counter({
        ("f1", "a"): 1, ("h2", "b"): 1, ("g3", "c"): 1,
        ("g3", "a"): 1, ("f4", "a"): 1, ("h5", "b"): 1,
    })
    deleted = [z.nodes[n] for n in z.deleted_constant_nodes]
    assert len(deleted) == 13
    assert all(isinstance(n.expr, Const) and not n.in_forest for n in deleted)
    kept = [n for n in z.nodes if isinstance(n.expr, Const) and n.in_forest]
    assert kept == []


def test_product_link_pruned_when_constant_missing():
    # b .a c: the left factor never yields a, so the right link is cut.
    z = build_zpc(lin_of(Product(Const("b"), "a", Const("c"))))
    assert len(z.removed_product_links) == 1
    assert labels(z, z.removed_product_links) == Counter({(".a", "c"): 1})


def test_empty_expression_nodes():
    from treepos.expr import Empty
    z = build_zpc(lin_of(Sum(Empty(), Const("a"))))
    assert z.first_of(z.root) == PositionSet.of(["a"])
    empty_node = next(n for n in z.nodes if isinstance(n.expr, Empty))
    assert empty_node.first0 == frozenset() and empty_node.last == frozenset()
    assert empty_node.in_forest  # harmless: it carries no positions
    assert z.first_sup_from_forest(empty_node.id) == frozenset()


def test_single_constant_structure():
    z = build_zpc(lin_of(Const("a")))
    assert len(z) == 1
    assert z.gamma_links == []
    assert not z.nodes[0].in_forest
    assert z.first_sup_from_forest(0) == set()
    assert z.first_of(0) == PositionSet.of(["a"])


def test_product_gamma_by_hand():
    # f1(a) .a b: the left subtree root links to the b leaf.
    lin = lin_of(Product(Apply("f", (Const("a"),)), "a", Const("b")))
    z = build_zpc(lin)
    assert labels(z, z.gamma_links) == Counter({("f1", "b"): 1})


def test_first_forest_collection(example_zpc, example_norm):
    z = example_zpc
    assert z.first_sup_from_forest(z.root) == set(example_norm.positions)
    star_c = next(n.id for n in z.nodes if n.label == "*c")
    assert z.first_sup_from_forest(star_c) == {G3}


def test_first_of_matches_naive_per_node(example_zpc):
    from treepos import LinearizedExpr, first_naive
    z = example_zpc
    for node in z.nodes:
        lin = LinearizedExpr(node.expr)
        assert z.first_of(node.id) == first_naive(lin), node.label


def test_gamma_chain_for_f4(example_zpc):
    z = example_zpc
    chain = z.gamma_chain(z.position_index[F4])
    assert len(chain) == 3
    fathers = [z.nodes[z.nodes[n].parent].label for n in chain]
    assert fathers == ["*a", ".a", "*b"]


def test_gamma_chain_root_and_sum():
    lin = lin_of(Sum(Apply("f", (Const("a"),)), Const("b")))
    z = build_zpc(lin)
    assert z.gamma_chain(z.root) == []
    assert z.gamma_chain(z.position_index[lin.positions[0]]) == []


def test_follow_via_gamma_example(example_zpc):
    assert follow_via_gamma(example_zpc, F1, 1).as_set() == {"b", F1, Position("h", 2)}
    assert follow_via_gamma(example_zpc, H5, 1).as_set() == {"b", F4, H5}


def test_follow_via_gamma_empty_chain():
    lin = lin_of(Apply("f", (Const("a"),)))
    z = build_zpc(lin)
    assert follow_via_gamma(z, lin.positions[0], 1).as_set() == {"a"}


def test_follow_fast_example(example_zpc):
    for (p, k), expected in EXAMPLE_FOLLOW.items():
        assert follow_fast(example_zpc, p, k).as_set() == expected


def test_follow_query_errors(example_zpc):
    with pytest.raises(ValueError, match="out of range"):
        follow_fast(example_zpc, G3, 0)
    with pytest.raises(ValueError, match="does not occur"):
        follow_via_gamma(example_zpc, Position("q", 1), 1)
    with pytest.raises(ValueError, match="no node"):
        example_zpc.first_sup_from_forest(999)


def test_substitute_subexpr():
    alpha = RankedAlphabet.from_text("a:0 b:0 f:2 g:1 h:1 l:1")
    expr = parse_expression("f(a + g(b), a + b + h(a))*a .b l(b)", alpha)
    lin = linearize(expr)
    f1 = lin.positions[0]
    for const in ("a", "b"):
        sub = substitute_subexpr(lin, f1, const)
        # f keeps its mark but is used at rank 1 in the result.
        expected = Product(Star(Apply("f", (Const(const),)), "a"), "b",
                           Apply("l", (Const("b"),)))
        assert sub.origin == expected
        assert sub.positions == (f1, Position("l", 4))
        assert sub.arity(f1) == 1


def test_substitute_already_minimal():
    lin = linearize(Apply("f", (Const("a"),)))
    sub = substitute_subexpr(lin, lin.positions[0], "a")
    assert sub.expr == lin.expr


def test_substitute_errors(example_lin):
    with pytest.raises(ValueError, match="does not occur"):
        substitute_subexpr(example_lin, Position("q", 7), "a")


def test_follow_all_example(example_norm):
    sets = follow_all(example_norm)
    assert set(sets) == set(EXAMPLE_FOLLOW)
    for key, expected in EXAMPLE_FOLLOW.items():
        assert sets[key].as_set() == expected


def test_follow_all_no_positions():
    assert follow_all(lin_of(Const("b"))) == {}


def test_follow_all_nested_applications():
    lin = lin_of(Apply("f", (Apply("g", (Const("a"),)),)))
    f1, g2 = lin.positions
    sets = follow_all(lin)
    assert sets[(f1, 1)].as_set() == {g2}
    assert sets[(g2, 1)].as_set() == {"a"}


def test_algorithms_agree_random():
    rng = random.Random(13)
    for _ in range(150):
        lin = lin_of(random_expression(rng, max_depth=6, max_width=8))
        z = build_zpc(lin)
        sets = follow_all(lin)
        for p in lin.positions:
            for k in range(1, lin.arity(p) + 1):
                ref = follow_naive(lin, p, k)
                assert follow_via_gamma(z, p, k) == ref
                assert follow_fast(z, p, k) == ref
                assert sets[(p, k)] == ref


def test_build_is_deterministic(example_norm):
    z1, z2 = build_zpc(example_norm), build_zpc(example_norm)
    assert [(n.id, n.parent, n.children, n.forest_children, n.first0, n.last,
             n.gamma, n.in_forest) for n in z1.nodes] == \
           [(n.id, n.parent, n.children, n.forest_children, n.first0, n.last,
             n.gamma, n.in_forest) for n in z2.nodes]
    assert z1.gamma_links == z2.gamma_links


def test_structure_is_linear_in_size():
    # Counts per node kind are fixed, so totals stay within a small multiple
    # of the node count.
    alphabet_size = 3  # constants of the generator alphabet
    rng = random.Random(3)
    for _ in range(40):
        lin = lin_of(random_expression(rng, max_depth=6, max_width=6))
        z = build_zpc(lin)
        n = len(z)
        assert n == size(lin.expr)
        tree_links = sum(len(node.children) for node in z.nodes)
        assert tree_links == n - 1
        assert len(z.gamma_links) == sum(
            1 for node in z.nodes if isinstance(node.expr, (Product, Star)))
        forest_links = sum(len(node.forest_children) for node in z.nodes)
        assert forest_links <= tree_links
        assert len(z.removed_apply_links) == sum(
            len(node.children) for node in z.nodes if isinstance(node.expr, Apply))
        assert len(z.deleted_constant_nodes) == sum(
            1 for node in z.nodes if isinstance(node.expr, Const))
        first0_cells = sum(len(node.first0) for node in z.nodes)
        last_cells = sum(len(node.last) for node in z.nodes)
        assert first0_cells <= n * alphabet_size
        assert last_cells <= n * alphabet_size


def test_gamma_chain_is_ancestor_ordered(example_zpc):
    z = example_zpc
    for p, nid in z.position_index.items():
        chain = z.gamma_chain(nid)
        # Walking parents from the node visits the chain in order.
        path = []
        cur = nid
        while cur is not None:
            path.append(cur)
            cur = z.nodes[cur].parent
        indices = [path.index(n) for n in chain]
        assert indices == sorted(indices)


def test_zpc_dot_dump(example_zpc):
    dot = zpc_to_dot(example_zpc)
    assert dot.startswith("digraph zpc {") and dot.endswith("}")
    assert "style=dashed" in dot        # removed forest links
    assert "color=red" in dot           # follow links
    assert dot.count("color=red") == 8
    assert 'label="g3"' in dot
