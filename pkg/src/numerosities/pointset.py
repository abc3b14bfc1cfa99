"""Closed expressions for finitary point sets and their exact finite restrictions.

Infinite sets only enter through the constructors below, each of which has a
computable finitary certificate ``bound(n)``: no tuple of length greater than
``bound(n)`` with all components in ``{0..n}`` belongs to the set.  Arbitrary
predicates are deliberately not supported, since the finitary condition is
undecidable for them.  In particular a set such as ``{(n), (n,n), (n,n,n), ...}``
cannot be written down.

Products are concatenations: ``Product(A, B)`` is the set of all ``a + b``.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian
from math import isqrt
from typing import Iterable, Mapping

from .combinatorics import canonical, make_support, make_tuple

Point = tuple[int, ...]


class InvalidExpression(ValueError):
    """Raised by :func:`validate`; ``node`` is the offending sub-expression."""

    def __init__(self, reason: str, node: PointSetExpr):
        super().__init__(f"{reason}: {node!r}")
        self.reason = reason
        self.node = node


class NotMultipliable(ValueError):
    """Two distinct pairs share a concatenation."""

    def __init__(self, witness: Point, pairs):
        super().__init__(f"not multipliable: {witness} arises from {pairs[0]} and {pairs[1]}")
        self.witness = witness
        self.pairs = pairs


# -- monotone maps -----------------------------------------------------------


class MonotoneMap(ABC):
    """Strictly increasing map N -> N, used to build one-dimensional sets."""

    @abstractmethod
    def __call__(self, n: int) -> int: ...

    @abstractmethod
    def preimage(self, v: int) -> int | None:
        """The ``n`` with ``f(n) == v``, or None."""

    def check(self) -> str | None:
        return None


@dataclass(frozen=True)
class Affine(MonotoneMap):
    a: int
    b: int

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    def preimage(self, v: int) -> int | None:
        if v < self.b or (v - self.b) % self.a:
            return None
        return (v - self.b) // self.a

    def check(self) -> str | None:
        if self.a < 1 or self.b < 0:
            return "affine map needs a >= 1 and b >= 0"
        return None


@dataclass(frozen=True)
class Square(MonotoneMap):
    def __call__(self, n: int) -> int:
        return n * n

    def preimage(self, v: int) -> int | None:
        r = isqrt(v)
        return r if r * r == v else None


# -- expressions -------------------------------------------------------------


class PointSetExpr(ABC):
    """Base class of the expression catalog.  Subclasses are frozen dataclasses."""

    @abstractmethod
    def bound(self, n: int) -> int:
        """Finitary certificate: max length of a member with components in ``{0..n}``."""

    @abstractmethod
    def __contains__(self, t: Point) -> bool: ...

    @abstractmethod
    def _restrict(self, F: frozenset[int]) -> frozenset[Point]: ...

    def arity(self) -> int | None:
        """The common length of all members when decidable structurally."""
        return None

    def children(self) -> tuple[PointSetExpr, ...]:
        return ()

    def _check(self) -> str | None:
        return None

    def __or__(self, other: PointSetExpr) -> PointSetExpr:
        return Union(self, other)

    def __and__(self, other: PointSetExpr) -> PointSetExpr:
        return Intersection(self, other)

    def __sub__(self, other: PointSetExpr) -> PointSetExpr:
        return Difference(self, other)

    def __mul__(self, other: PointSetExpr) -> PointSetExpr:
        return Product(self, other)

    def __str__(self) -> str:
        from .dsl import to_text

        return to_text(self)


@dataclass(frozen=True)
class Finite(PointSetExpr):
    points: frozenset

    def __init__(self, points: Iterable[Iterable[int]] = ()):
        object.__setattr__(self, "points", frozenset(tuple(p) for p in points))

    def __repr__(self) -> str:
        return f"Finite({canonical(self.points)!r})"

    def _check(self):
        for p in self.points:
            try:
                make_tuple(p)
            except ValueError as exc:
                return str(exc)
        return None

    def bound(self, n):
        return max((len(p) for p in self.points), default=0)

    def __contains__(self, t):
        return t in self.points

    def _restrict(self, F):
        return frozenset(p for p in self.points if all(c in F for c in p))

    def arity(self):
        lengths = {len(p) for p in self.points}
        return lengths.pop() if len(lengths) == 1 else None


@dataclass(frozen=True)
class FullSpace(PointSetExpr):
    """``N^d``."""

    d: int

    def _check(self):
        return None if self.d >= 1 else "dimension must be positive"

    def bound(self, n):
        return self.d

    def __contains__(self, t):
        return len(t) == self.d

    def _restrict(self, F):
        return frozenset(cartesian(sorted(F), repeat=self.d))

    def arity(self):
        return self.d


@dataclass(frozen=True)
class Diagonal(PointSetExpr):
    """``{(n, ..., n)}`` with ``d`` copies of ``n``."""

    d: int

    def _check(self):
        return None if self.d >= 1 else "dimension must be positive"

    def bound(self, n):
        return self.d

    def __contains__(self, t):
        return len(t) == self.d and len(set(t)) == 1

    def _restrict(self, F):
        return frozenset((v,) * self.d for v in F)

    def arity(self):
        return self.d


@dataclass(frozen=True)
class MonotoneImage(PointSetExpr):
    """``{(f(n)) : n in N}`` for a strictly increasing ``f``."""

    f: MonotoneMap

    def _check(self):
        return self.f.check()

    def bound(self, n):
        return 1

    def __contains__(self, t):
        return len(t) == 1 and self.f.preimage(t[0]) is not None

    def _restrict(self, F):
        return frozenset((v,) for v in F if self.f.preimage(v) is not None)

    def arity(self):
        return 1


EVENS = MonotoneImage(Affine(2, 0))
ODDS = MonotoneImage(Affine(2, 1))
SQUARES = MonotoneImage(Square())
EMPTY = Finite()


@dataclass(frozen=True)
class Union(PointSetExpr):
    left: PointSetExpr
    right: PointSetExpr

    def children(self):
        return (self.left, self.right)

    def bound(self, n):
        return max(self.left.bound(n), self.right.bound(n))

    def __contains__(self, t):
        return t in self.left or t in self.right

    def _restrict(self, F):
        return restrict(self.left, F) | restrict(self.right, F)

    def arity(self):
        a, b = self.left.arity(), self.right.arity()
        return a if a == b else None


@dataclass(frozen=True)
class Intersection(PointSetExpr):
    left: PointSetExpr
    right: PointSetExpr

    def children(self):
        return (self.left, self.right)

    def bound(self, n):
        return min(self.left.bound(n), self.right.bound(n))

    def __contains__(self, t):
        return t in self.left and t in self.right

    def _restrict(self, F):
        return frozenset(t for t in restrict(self.left, F) if t in self.right)

    def arity(self):
        a = self.left.arity()
        return a if a is not None else self.right.arity()


@dataclass(frozen=True)
class Difference(PointSetExpr):
    left: PointSetExpr
    right: PointSetExpr

    def children(self):
        return (self.left, self.right)

    def bound(self, n):
        return self.left.bound(n)

    def __contains__(self, t):
        return t in self.left and t not in self.right

    def _restrict(self, F):
        return frozenset(t for t in restrict(self.left, F) if t not in self.right)

    def arity(self):
        return self.left.arity()


@dataclass(frozen=True)
class Product(PointSetExpr):
    """Concatenation product ``{a + b : a in left, b in right}``."""

    left: PointSetExpr
    right: PointSetExpr

    def children(self):
        return (self.left, self.right)

    def bound(self, n):
        return self.left.bound(n) + self.right.bound(n)

    def __contains__(self, t):
        return any(t[:i] in self.left and t[i:] in self.right for i in range(1, len(t)))

    def _restrict(self, F):
        rb = restrict(self.right, F)
        return frozenset(a + b for a in restrict(self.left, F) for b in rb)

    def arity(self):
        a, b = self.left.arity(), self.right.arity()
        return a + b if a is not None and b is not None else None


@dataclass(frozen=True)
class PermSpec:
    """Per-arity position permutations; ``reverse`` reverses every tuple.

    ``perms`` holds ``(arity, permutation)`` pairs; a point ``a`` of that
    arity is sent to ``(a[p[0]], a[p[1]], ...)``.  Arities not listed are
    left alone.
    """

    perms: tuple[tuple[int, tuple[int, ...]], ...] = ()
    reverse: bool = False

    @classmethod
    def of(cls, *perms: Iterable[int], reverse: bool = False) -> PermSpec:
        items = []
        for p in perms:
            p = tuple(p)
            items.append((len(p), p))
        return cls(tuple(sorted(items)), reverse)

    def check(self) -> str | None:
        seen = set()
        for arity, p in self.perms:
            if arity in seen:
                return f"two permutations given for arity {arity}"
            seen.add(arity)
            if arity < 1 or len(p) != arity or sorted(p) != list(range(arity)):
                return f"{list(p)} is not a permutation of positions 0..{arity - 1}"
        if self.reverse and self.perms:
            return "'rev' cannot be combined with explicit permutations"
        return None

    def apply(self, t: Point) -> Point:
        if self.reverse:
            return t[::-1]
        for arity, p in self.perms:
            if arity == len(t):
                return tuple(t[i] for i in p)
        return t

    def invert(self, t: Point) -> Point:
        if self.reverse:
            return t[::-1]
        for arity, p in self.perms:
            if arity == len(t):
                out = [0] * arity
                for i, src in enumerate(p):
                    out[src] = t[i]
                return tuple(out)
        return t


@dataclass(frozen=True)
class Permute(PointSetExpr):
    inner: PointSetExpr
    spec: PermSpec

    def _check(self):
        return self.spec.check()

    def children(self):
        return (self.inner,)

    def bound(self, n):
        return self.inner.bound(n)

    def __contains__(self, t):
        return self.spec.invert(t) in self.inner

    def _restrict(self, F):
        return frozenset(self.spec.apply(t) for t in restrict(self.inner, F))

    def arity(self):
        return self.inner.arity()


@dataclass(frozen=True)
class ShiftedCopy(PointSetExpr):
    """``inner x {m}^h x {n}^k``."""

    inner: PointSetExpr
    m: int
    h: int
    n: int
    k: int

    def _check(self):
        if min(self.m, self.h, self.n, self.k) < 0:
            return "copy parameters must be naturals"
        return None

    def children(self):
        return (self.inner,)

    @property
    def tail(self) -> Point:
        return (self.m,) * self.h + (self.n,) * self.k

    def bound(self, n):
        return self.inner.bound(n) + self.h + self.k

    def __contains__(self, t):
        s = len(self.tail)
        if len(t) <= s or (s and t[-s:] != self.tail):
            return False
        return t[: len(t) - s] in self.inner

    def _restrict(self, F):
        if any(c not in F for c in self.tail):
            return frozenset()
        tail = self.tail
        return frozenset(a + tail for a in restrict(self.inner, F))

    def arity(self):
        a = self.inner.arity()
        return None if a is None else a + self.h + self.k


# -- operations --------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Proof that an expression denotes a finitary set."""

    expr: PointSetExpr

    def bound(self, n: int) -> int:
        return self.expr.bound(n)


def validate(X: PointSetExpr) -> Certificate:
    """Check every node of ``X``; raise :class:`InvalidExpression` naming the bad one."""
    if not isinstance(X, PointSetExpr):
        raise InvalidExpression("not a point-set expression", X)
    for child in X.children():
        validate(child)
    problem = X._check()
    if problem:
        raise InvalidExpression(problem, X)
    return Certificate(X)


@lru_cache(maxsize=2048)
def _cached_restrict(X: PointSetExpr, F: frozenset[int]) -> frozenset[Point]:
    return X._restrict(F)


def restrict(X: PointSetExpr, F: Iterable[int]) -> frozenset[Point]:
    """``X_F``: the members of ``X`` all of whose components lie in ``F``."""
    return _cached_restrict(X, make_support(F))


def count_on(X: PointSetExpr, F: Iterable[int]) -> int:
    """``|X_F|``, using closed forms where the structure allows it."""
    F = make_support(F)
    return _count(X, F)


def _count(X: PointSetExpr, F: frozenset[int]) -> int:
    if isinstance(X, FullSpace):
        return len(F) ** X.d
    if isinstance(X, (Diagonal, MonotoneImage, Finite)):
        return len(X._restrict(F))
    if isinstance(X, Permute):
        return _count(X.inner, F)
    if isinstance(X, ShiftedCopy):
        return _count(X.inner, F) if all(c in F for c in X.tail) else 0
    if isinstance(X, Product) and structurally_multipliable(X.left, X.right):
        return _count(X.left, F) * _count(X.right, F)
    return len(restrict(X, F))


def find_collision(X: PointSetExpr, Y: PointSetExpr, F: Iterable[int]):
    """A concatenation reached by two different pairs over ``F``, or None.

    Returns ``(concatenation, (pair, other_pair))``.
    """
    rx, ry = canonical(restrict(X, F)), canonical(restrict(Y, F))
    seen: dict[Point, tuple[Point, Point]] = {}
    for a in rx:
        for b in ry:
            c = a + b
            if c in seen:
                return c, (seen[c], (a, b))
            seen[c] = (a, b)
    return None


def is_multipliable_on(X: PointSetExpr, Y: PointSetExpr, F: Iterable[int]) -> bool:
    return find_collision(X, Y, F) is None


def structurally_multipliable(X: PointSetExpr, Y: PointSetExpr) -> bool:
    """True when a uniform-arity factor makes every concatenation split uniquely."""
    return (
        X.arity() is not None
        or Y.arity() is not None
        or X == EMPTY
        or Y == EMPTY
    )


@dataclass(frozen=True)
class Multipliability:
    status: str  # "true" | "false" | "unknown"
    witness: Point | None = None
    pairs: tuple | None = None
    horizon: int | None = None

    def __str__(self) -> str:
        if self.status == "false":
            return f"false (witness {self.witness})"
        if self.status == "unknown":
            return f"unknown({self.horizon})"
        return "true"


def is_multipliable(X: PointSetExpr, Y: PointSetExpr, horizon: int = 8) -> Multipliability:
    """Three-valued multipliability: structural rule, else search along ``{0..k}``."""
    if structurally_multipliable(X, Y):
        return Multipliability("true")
    for k in range(horizon + 1):
        hit = find_collision(X, Y, range(k + 1))
        if hit is not None:
            return Multipliability("false", hit[0], hit[1])
    return Multipliability("unknown", horizon=horizon)


def shifted_copy(A: PointSetExpr, m: int, h: int, n: int, k: int) -> PointSetExpr:
    return ShiftedCopy(A, m, h, n, k)


def permute_transform(X: PointSetExpr, spec: PermSpec | Mapping[int, Iterable[int]]) -> PointSetExpr:
    if not isinstance(spec, PermSpec):
        spec = PermSpec.of(*spec.values())
    problem = spec.check()
    if problem:
        raise ValueError(problem)
    return Permute(X, spec)


def reversal() -> PermSpec:
    return PermSpec(reverse=True)


def is_finite(X: PointSetExpr) -> bool | None:
    """Whether ``X`` is finite, when it can be read off the structure."""
    if isinstance(X, Finite):
        return True
    if isinstance(X, (FullSpace, Diagonal, MonotoneImage)):
        return False
    if isinstance(X, (Permute, ShiftedCopy)):
        return is_finite(X.inner)
    if isinstance(X, Union):
        a, b = is_finite(X.left), is_finite(X.right)
        if a is False or b is False:
            return False
        return True if a and b else None
    if isinstance(X, Intersection):
        if is_finite(X.left) or is_finite(X.right):
            return True
        return None
    if isinstance(X, Difference):
        return True if is_finite(X.left) else None
    if isinstance(X, Product):
        a, b = is_finite(X.left), is_finite(X.right)
        if X.left == EMPTY or X.right == EMPTY or (a and b):
            return True
        return None
    return None
