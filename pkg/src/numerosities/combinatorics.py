"""Tuples, finite supports, monomials and their multiplicity counts.

A point ``x = (x_1, ..., x_k)`` of naturals is mapped to the monomial
``t^a`` where ``a_i`` counts the occurrences of ``i`` in ``x``.  Tuples are
plain Python tuples of ints and finite supports are frozensets; the only
dedicated type here is :class:`Monomial`.
"""
from __future__ import annotations

from collections import Counter
from itertools import combinations
from math import factorial
from typing import Iterable, Iterator, Mapping

SUBSET_LIMIT = 20


def make_tuple(entries: Iterable[int]) -> tuple[int, ...]:
    """Validate and return ``entries`` as a point of some ``N^k``, ``k >= 1``."""
    t = tuple(entries)
    if not t:
        raise ValueError("a tuple must have at least one component")
    for e in t:
        if not isinstance(e, int) or isinstance(e, bool) or e < 0:
            raise ValueError(f"tuple components must be naturals, got {e!r}")
    return t


def make_support(elements: Iterable[int]) -> frozenset[int]:
    F = frozenset(elements)
    for e in F:
        if not isinstance(e, int) or isinstance(e, bool) or e < 0:
            raise ValueError(f"support elements must be naturals, got {e!r}")
    return F


def render_support(F: Iterable[int]) -> str:
    """Braced, comma-free, ascending rendering used in CSV output: ``{0 1 2}``."""
    return "{" + " ".join(str(i) for i in sorted(F)) + "}"


def point_key(t: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Canonical length-then-lexicographic ordering key for tuples."""
    return (len(t), t)


def canonical(points: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return sorted(points, key=point_key)


class Monomial:
    """A monomial ``t^a`` with finitely many nonzero exponents.

    Stored sparsely as an ascending tuple of ``(variable, exponent)`` pairs so
    that equality and hashing are structural.
    """

    __slots__ = ("exps",)

    def __init__(self, exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        merged: dict[int, int] = {}
        for var, e in items:
            if var < 0 or e < 0:
                raise ValueError(f"bad monomial entry t{var}^{e}")
            if e:
                merged[var] = merged.get(var, 0) + e
        self.exps: tuple[tuple[int, int], ...] = tuple(sorted(merged.items()))

    @classmethod
    def one(cls) -> Monomial:
        return cls()

    @classmethod
    def of_support(cls, F: Iterable[int]) -> Monomial:
        """The squarefree monomial ``t_F``."""
        return cls((i, 1) for i in F)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return hash(self.exps)

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {e}" for v, e in self.exps)
        return f"Monomial({{{inner}}})"

    def as_dict(self) -> dict[int, int]:
        return dict(self.exps)

    def exponent(self, var: int) -> int:
        for v, e in self.exps:
            if v == var:
                return e
        return 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.exps)

    @property
    def max_exponent(self) -> int:
        return max((e for _, e in self.exps), default=0)

    def sort_key(self):
        """Order by degree, then support, then exponents."""
        return (self.degree, tuple(v for v, _ in self.exps), tuple(e for _, e in self.exps))

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(list(self.exps) + list(other.exps))

    def divides(self, other: Monomial) -> bool:
        theirs = dict(other.exps)
        return all(theirs.get(v, 0) >= e for v, e in self.exps)

    def __truediv__(self, other: Monomial) -> Monomial:
        if not other.divides(self):
            raise ValueError(f"{other!r} does not divide {self!r}")
        mine = dict(self.exps)
        for v, e in other.exps:
            mine[v] -= e
        return Monomial(mine)


def monomial_of_tuple(x: Iterable[int]) -> Monomial:
    """The monomial ``t_x``: exponent of ``i`` is the number of occurrences of ``i``."""
    return Monomial(Counter(make_tuple(x)))


def multinomial(m: Monomial) -> int:
    """``k! / prod a_i!`` with ``k`` the degree; equals 1 for the constant monomial."""
    result = factorial(m.degree)
    for _, e in m.exps:
        result //= factorial(e)
    return result


def tuple_count_of_monomial(m: Monomial) -> int:
    """Number of distinct tuples whose monomial is ``m``."""
    if m.degree == 0:
        raise ValueError("no tuple has length zero")
    return multinomial(m)


def tuples_of_monomial(m: Monomial) -> Iterator[tuple[int, ...]]:
    """All distinct tuples ``x`` with ``monomial_of_tuple(x) == m``, in lexicographic order."""
    if m.degree == 0:
        return
    remaining = dict(m.exps)
    keys = sorted(remaining)
    prefix: list[int] = []

    def walk():
        if not any(remaining.values()):
            yield tuple(prefix)
            return
        for v in keys:
            if remaining[v]:
                remaining[v] -= 1
                prefix.append(v)
                yield from walk()
                prefix.pop()
                remaining[v] += 1

    yield from walk()


def squarefree_of(m: Monomial) -> Monomial:
    return Monomial.of_support(m.support)


def subsets_of(F: Iterable[int], limit: int = SUBSET_LIMIT) -> Iterator[frozenset[int]]:
    """Every subset of ``F`` once, ordered by size and then lexicographically."""
    elems = sorted(make_support(F))
    if len(elems) > limit:
        raise ValueError("support too large for subset enumeration")
    for r in range(len(elems) + 1):
        for combo in combinations(elems, r):
            yield frozenset(combo)
