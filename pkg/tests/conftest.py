"""Brute-force oracles shared by the test modules.

Nothing here calls the library's restriction or counting code: point sets
are enumerated through ``__contains__`` over every tuple up to the certified
length, and monomial counts come from raw tuple enumeration.
"""
import sys
from collections import Counter
from itertools import product

import pytest

from numerosities.combinatorics import Monomial
from numerosities.dsl import parse_expr

CATALOG_TEXTS = {
    "N1": "N^1",
    "N2": "N^2",
    "diag2": "diag(2)",
    "evens": "evens",
    "odds": "odds",
    "sq_or_3n1": "squares | affine(3,1)",
    "offdiag": "N^2 \\ diag(2)",
    "slab": "(N^2 \\ diag(2)) & (evens * N^1)",
    "prism": "N^1 * diag(2)",
    "swapped": "perm(N^1 * evens, [1 0])",
    "copy": "copy(N^1, 0, 2, 1, 1)",
    "finite": "{(1,2),(2,1),(0,0,3),(5)}",
}


def brute_members(X, F):
    F = sorted(F)
    if not F:
        return set()
    out = set()
    for length in range(1, X.bound(max(F)) + 1):
        out.update(t for t in product(F, repeat=length) if t in X)
    return out


def brute_tuple_count(exps: dict) -> int:
    """Number of distinct tuples whose component multiset is ``exps``."""
    target = Counter({v: e for v, e in exps.items() if e})
    length = sum(target.values())
    if length == 0:
        return 0
    return sum(1 for t in product(sorted(target), repeat=length) if Counter(t) == target)


def brute_series(points, support, cap) -> dict:
    """Characteristic coefficients of an explicit set inside a window."""
    out = Counter()
    for t in points:
        c = Counter(t)
        if set(c) <= set(support) and max(c.values()) <= cap:
            out[Monomial(c.items())] += 1
    return dict(out)


@pytest.fixture(scope="session")
def catalog():
    return {name: parse_expr(text) for name, text in CATALOG_TEXTS.items()}


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
