"""Euclidean numerosities of finitary sets of tuples of natural numbers."""
from .combinatorics import (
    Monomial,
    monomial_of_tuple,
    squarefree_of,
    subsets_of,
    tuple_count_of_monomial,
)
from .counting import Chain, CountingFunction, count, counting_sequence, sigma_transport
from .dsl import parse_expr, to_text
from .numerosity import (
    Comparison,
    EventualSignOracle,
    Numerosity,
    Outcome,
    build_congruence,
    compare,
    fap_check,
    get_oracle,
    numerosity,
    register_oracle,
)
from .pointset import (
    Diagonal,
    Finite,
    FullSpace,
    PointSetExpr,
    is_multipliable,
    is_multipliable_on,
    permute_transform,
    restrict,
    shifted_copy,
    validate,
)
from .series import TruncatedSeries, TruncationWindow, char_series, evaluate

__version__ = "0.1.0"
