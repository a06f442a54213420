"""Regular tree expressions, Follow sets, and position tree automata.

The package converts regular tree expressions over ranked alphabets into
bottom-up nondeterministic tree automata.  The Follow sets that drive the
construction are computed by several mutually cross-checking routes (direct
recursion, constant/position-split recurrences, a decorated-syntax-tree walk,
and a per-symbol substitution scheme) and validated against brute-force
language enumeration.
"""

from .automaton import (
    FINAL_STATE,
    Nfta,
    accepts,
    build_position_automaton,
    export_automaton,
    nfta_from_json,
    run_states,
)
from .expr import (
    AlphabetError,
    Apply,
    Const,
    Empty,
    GroundTree,
    LinearizedExpr,
    Position,
    Product,
    RankedAlphabet,
    Star,
    Sum,
    TreeExpr,
    h_expr,
    h_tree,
    inferred_alphabet,
    is_linear,
    is_star_normalized,
    linearize,
    measure,
    normalize_stars,
    size,
    subtrees,
    to_text,
    tree_depth,
    tree_leaves,
    width,
)
from .language import (
    LanguageSample,
    constants_in_language,
    contains_constant,
    enumerate_language,
    is_empty_language,
    tree_substitute,
)
from .parser import (
    ParseError,
    format_expression_file,
    parse_expression,
    parse_expression_file,
    parse_tree,
)
from .positions import (
    PositionSet,
    first0,
    first_naive,
    first_sup,
    follow_decomposed,
    follow_naive,
    follow_sup,
    last_follow,
    last_naive,
)
from .zpc import (
    ZpcNode,
    ZpcStructure,
    build_zpc,
    follow_all,
    follow_fast,
    follow_via_gamma,
    substitute_subexpr,
    zpc_to_dot,
)

__version__ = "0.1.0"
