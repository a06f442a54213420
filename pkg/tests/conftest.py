import pytest

from treepos import (
    Position,
    RankedAlphabet,
    build_zpc,
    linearize,
    parse_expression,
)

# The worked example used throughout: two copies of a starred block joined
# with a binary operator, five positions f1, h2, g3, f4, h5.
EXAMPLE_TEXT = "(f(a)*a .a b + h(b))*b + g(c,a)*c .c (f(a)*a .a b + h(b))*b"
EXAMPLE_ALPHABET = "a:0 b:0 c:0 f:1 h:1 g:2"

F1, H2, G3, F4, H5 = (Position("f", 1), Position("h", 2), Position("g", 3),
                      Position("f", 4), Position("h", 5))

EXAMPLE_FIRST = {"b", F1, H2, G3, F4, H5}
EXAMPLE_LAST = {"a", "b"}
EXAMPLE_FOLLOW = {
    (F1, 1): {"b", F1, H2},
    (H2, 1): {"b", F1, H2},
    (G3, 1): {"b", G3, F4, H5},
    (G3, 2): {"a"},
    (F4, 1): {"b", F4, H5},
    (H5, 1): {"b", F4, H5},
}

# The full transition-rule listing of the worked automaton (23 rules).
EXAMPLE_RULES = {
    ("f", ("f1^1",), "eps1"), ("f", ("f1^1",), "f1^1"), ("f", ("f1^1",), "h2^1"),
    ("h", ("h2^1",), "eps1"), ("h", ("h2^1",), "f1^1"), ("h", ("h2^1",), "h2^1"),
    ("g", ("g3^1", "g3^2"), "g3^1"), ("g", ("g3^1", "g3^2"), "eps1"),
    ("f", ("f4^1",), "eps1"), ("f", ("f4^1",), "g3^1"),
    ("f", ("f4^1",), "f4^1"), ("f", ("f4^1",), "h5^1"),
    ("h", ("h5^1",), "eps1"), ("h", ("h5^1",), "g3^1"),
    ("h", ("h5^1",), "f4^1"), ("h", ("h5^1",), "h5^1"),
    ("a", (), "g3^2"),
    ("b", (), "eps1"), ("b", (), "f1^1"), ("b", (), "h2^1"),
    ("b", (), "g3^1"), ("b", (), "f4^1"), ("b", (), "h5^1"),
}
EXAMPLE_STATES = {"eps1", "f1^1", "h2^1", "g3^1", "g3^2", "f4^1", "h5^1"}


@pytest.fixture(scope="session")
def alphabet():
    return RankedAlphabet.from_text(EXAMPLE_ALPHABET)


@pytest.fixture(scope="session")
def example_expr(alphabet):
    return parse_expression(EXAMPLE_TEXT, alphabet)


@pytest.fixture(scope="session")
def example_lin(example_expr):
    return linearize(example_expr)


@pytest.fixture(scope="session")
def example_norm(example_lin):
    return example_lin.normalized()


@pytest.fixture(scope="session")
def example_zpc(example_norm):
    return build_zpc(example_norm)
