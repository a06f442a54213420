import random

from treepos import is_star_normalized, measure, normalize_stars, size, width
from treepos.bench import CSV_HEADER, format_csv, run_benchmark
from treepos.expr import Empty, subexpressions, validate_expression
from treepos.generator import (
    DEFAULT_TEST_ALPHABET,
    random_expression,
    random_tree,
    scaling_family,
)
from treepos.expr import validate_tree


def test_expressions_deterministic_per_seed():
    def draws(seed):
        rng = random.Random(seed)
        return [random_expression(rng) for _ in range(5)]

    assert draws(9) == draws(9)
    assert len(set(map(repr, draws(9)))) > 1  # the sequence varies
    assert draws(9) != draws(10)


def test_expression_bounds_respected():
    rng = random.Random(1)
    for _ in range(200):
        e = random_expression(rng, max_depth=5, max_width=5)
        assert width(e) <= 5
        validate_expression(e, DEFAULT_TEST_ALPHABET)
        assert not any(isinstance(s, Empty) for s in subexpressions(e))


def test_tree_generator_well_formed():
    rng = random.Random(2)
    for _ in range(100):
        t = random_tree(rng, DEFAULT_TEST_ALPHABET, 4)
        validate_tree(t, DEFAULT_TEST_ALPHABET)


def test_scaling_family_growth():
    sizes, widths = [], []
    for n in (1, 2, 4, 8):
        alpha, expr = scaling_family(n)
        validate_expression(expr, alpha)
        stats = measure(expr)
        sizes.append(stats["size"])
        widths.append(stats["width"])
        assert stats["width"] == 2 * n
    # Size grows linearly: constant per-block increment.
    assert sizes[3] - sizes[2] == 2 * (sizes[2] - sizes[1])
    assert is_star_normalized(normalize_stars(expr))


def test_benchmark_rows_and_csv():
    rows = run_benchmark([2, 4], repeat=1)
    assert [r.n for r in rows] == [2, 4]
    assert rows[0].size < rows[1].size
    assert rows[0].width == 4 and rows[1].width == 8
    assert all(r.t_naive_ns > 0 and r.t_improved_ns > 0 for r in rows)
    csv = format_csv(rows)
    lines = csv.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert lines[1].startswith("2,")


def test_benchmark_empty_range():
    assert format_csv(run_benchmark([])) == CSV_HEADER + "\n"
