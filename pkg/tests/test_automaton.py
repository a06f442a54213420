import json
import random

import pytest

from treepos import (
    AlphabetError,
    Apply,
    Const,
    Empty,
    FINAL_STATE,
    GroundTree,
    Nfta,
    RankedAlphabet,
    accepts,
    build_position_automaton,
    enumerate_language,
    export_automaton,
    nfta_from_json,
    normalize_stars,
    parse_tree,
    run_states,
)
from treepos.automaton import to_dot, to_json
from treepos.generator import DEFAULT_TEST_ALPHABET, random_expression, random_tree

from conftest import EXAMPLE_RULES, EXAMPLE_STATES


@pytest.fixture(scope="module")
def example_nfta(example_expr, alphabet):
    return build_position_automaton(example_expr, alphabet)


def test_example_states_and_rules(example_nfta):
    assert example_nfta.states == EXAMPLE_STATES
    assert example_nfta.final == {FINAL_STATE}
    assert example_nfta.rules == EXAMPLE_RULES
    assert len(example_nfta.rules) == 23


def test_rule_count_formula(example_nfta, example_norm):
    from treepos import first_naive, follow_all
    follows = follow_all(example_norm)
    expected = len(first_naive(example_norm)) + sum(len(s) for s in follows.values())
    assert len(example_nfta.rules) == expected


def test_state_count_formula(example_nfta, example_norm):
    ranks = sum(example_norm.arity(p) for p in example_norm.positions)
    assert len(example_nfta.states) == ranks + 1


def test_constant_only_automaton():
    nfta = build_position_automaton(Const("b"))
    assert nfta.states == {FINAL_STATE}
    assert nfta.rules == {("b", (), FINAL_STATE)}


def test_unary_application_automaton():
    nfta = build_position_automaton(Apply("f", (Const("a"),)))
    assert nfta.states == {FINAL_STATE, "f1^1"}
    assert nfta.rules == {("f", ("f1^1",), FINAL_STATE), ("a", (), "f1^1")}


def test_empty_expression_automaton():
    alpha = RankedAlphabet.from_text("a:0 b:0")
    nfta = build_position_automaton(Empty(), alpha)
    assert nfta.states == {FINAL_STATE} and nfta.rules == frozenset()
    assert not accepts(nfta, GroundTree("b"))


def test_degenerate_empty_sublanguage_automaton():
    # First of f(0) syntactically contains the position, but no rule can ever
    # produce its state, so the recognized language is still empty.
    alpha = RankedAlphabet.from_text("a:0 b:0 f:1")
    nfta = build_position_automaton(Apply("f", (Empty(),)), alpha)
    assert nfta.rules == {("f", ("f1^1",), FINAL_STATE)}
    rng = random.Random(8)
    for _ in range(25):
        assert not accepts(nfta, random_tree(rng, alpha, 3))


def test_example_membership(example_nfta, alphabet):
    assert accepts(example_nfta, parse_tree("g(b,a)", alphabet))
    assert accepts(example_nfta, parse_tree("b", alphabet))
    assert not accepts(example_nfta, parse_tree("a", alphabet))
    assert accepts(example_nfta, parse_tree("f(h(b))", alphabet))
    assert not accepts(example_nfta, parse_tree("g(a,b)", alphabet))


def test_run_states_and_purity(example_nfta, alphabet):
    t = parse_tree("b", alphabet)
    states = run_states(example_nfta, t)
    assert states == frozenset(
        {"eps1", "f1^1", "h2^1", "g3^1", "f4^1", "h5^1"})
    assert run_states(example_nfta, t) == states


def test_unknown_symbol_errors(example_nfta):
    with pytest.raises(AlphabetError):
        accepts(example_nfta, GroundTree("zz"))
    with pytest.raises(AlphabetError):
        accepts(example_nfta, GroundTree("f", (GroundTree("a"), GroundTree("b"))))


def test_declared_but_unused_symbol_rejects():
    alpha = RankedAlphabet.from_text("a:0 b:0 f:1 g:2")
    nfta = build_position_automaton(Apply("f", (Const("a"),)), alpha)
    tree = GroundTree("g", (GroundTree("a"), GroundTree("b")))
    assert not accepts(nfta, tree)


def test_json_schema(example_nfta):
    doc = json.loads(to_json(example_nfta))
    assert set(doc) == {"alphabet", "states", "final", "rules"}
    assert {"symbol": "g", "rank": 2} in doc["alphabet"]
    assert doc["states"][0] == "eps1"
    assert doc["final"] == ["eps1"]
    assert len(doc["rules"]) == 23
    assert {"symbol": "a", "args": [], "target": "g3^2"} in doc["rules"]
    assert doc["rules"] == sorted(
        doc["rules"], key=lambda r: (r["symbol"], r["args"], r["target"]))


def test_json_round_trip(example_nfta):
    assert nfta_from_json(to_json(example_nfta)) == example_nfta


def test_json_round_trip_empty_rules():
    nfta = build_position_automaton(Empty(), RankedAlphabet.from_text("a:0"))
    doc = json.loads(to_json(nfta))
    assert doc["rules"] == []
    assert nfta_from_json(to_json(nfta)) == nfta


def test_json_rejects_garbage():
    with pytest.raises(ValueError):
        nfta_from_json("{not json")
    with pytest.raises(ValueError):
        nfta_from_json("{}")


def test_export_format_dispatch(example_nfta):
    assert export_automaton(example_nfta, "json") == to_json(example_nfta)
    assert export_automaton(example_nfta, "dot") == to_dot(example_nfta)
    with pytest.raises(ValueError):
        export_automaton(example_nfta, "xml")


def test_dot_conventions(example_nfta):
    dot = to_dot(example_nfta)
    assert '"eps1" [shape=doublecircle];' in dot
    # Binary rules fan in through auxiliary point nodes.
    assert "[shape=point" in dot
    assert '"f1^1" -> "eps1" [label="f"];' in dot
    # Constant rules hang off plaintext label nodes.
    assert 'shape=plaintext label="b"' in dot


def test_export_is_deterministic(example_nfta, example_expr, alphabet):
    again = build_position_automaton(example_expr, alphabet)
    assert to_json(again) == to_json(example_nfta)
    assert to_dot(again) == to_dot(example_nfta)


def test_rule_arity_validated():
    alpha = RankedAlphabet.from_text("a:0 f:1")
    with pytest.raises(ValueError, match="rank"):
        Nfta(alpha, {"q"}, set(), {("f", (), "q")})
    with pytest.raises(ValueError, match="final"):
        Nfta(alpha, {"q"}, {"zz"}, set())


def test_rules_target_single_position_per_source():
    # Non-constant rules carry the argument states of exactly one position,
    # in slot order 1..n.
    rng = random.Random(123)
    for _ in range(20):
        expr = random_expression(rng, max_depth=5, max_width=5)
        nfta = build_position_automaton(expr, DEFAULT_TEST_ALPHABET)
        for symbol, args, _ in nfta.rules:
            prefixes = {a.rsplit("^", 1)[0] for a in args}
            assert len(prefixes) <= 1
            assert [a.rsplit("^", 1)[1] for a in args] == [
                str(i) for i in range(1, len(args) + 1)]
            if args:
                assert prefixes.pop().rstrip("0123456789") == symbol


def test_language_equivalence_random_sample():
    rng = random.Random(77)
    for _ in range(30):
        expr = random_expression(rng, max_depth=4, max_width=4)
        sample = enumerate_language(normalize_stars(expr), 3, max_count=2000)
        if sample.truncated:
            continue
        nfta = build_position_automaton(expr, DEFAULT_TEST_ALPHABET)
        for t in sample:
            assert accepts(nfta, t), (expr, str(t))
        for _ in range(15):
            probe = random_tree(rng, DEFAULT_TEST_ALPHABET, 3)
            assert accepts(nfta, probe) == (probe in sample), (expr, str(probe))
