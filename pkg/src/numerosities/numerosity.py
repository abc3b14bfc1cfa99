"""Numerosities as counting sequences along a chain, compared modulo an oracle.

A genuine ultrafilter decides the sign of every difference sequence, but no
computable oracle can.  Oracles here may answer ``UNDECIDED``; the default one
commits to a sign only when it is constant over a trailing window of the
horizon.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from .combinatorics import canonical, subsets_of
from .counting import Chain, CountingFunction, counting_sequence
from .pointset import (
    EMPTY,
    Difference,
    Finite,
    NotMultipliable,
    PointSetExpr,
    Product,
    ShiftedCopy,
    Union,
    count_on,
    find_collision,
    restrict,
    structurally_multipliable,
    validate,
)

DEFAULT_HORIZON = 64
DEFAULT_WINDOW = 16


class Sign(Enum):
    NEGATIVE = "NEGATIVE"
    ZERO = "ZERO"
    POSITIVE = "POSITIVE"
    UNDECIDED = "UNDECIDED"


class Outcome(Enum):
    LESS = "LESS"
    EQUAL = "EQUAL"
    GREATER = "GREATER"
    UNDECIDED = "UNDECIDED"

    @property
    def decided(self) -> bool:
        return self is not Outcome.UNDECIDED

    def flipped(self) -> Outcome:
        return {Outcome.LESS: Outcome.GREATER, Outcome.GREATER: Outcome.LESS}.get(self, self)


def sign_of(x: int) -> Sign:
    return Sign.POSITIVE if x > 0 else Sign.NEGATIVE if x < 0 else Sign.ZERO


class UltrafilterOracle(ABC):
    """Decides which sign class of a difference sequence is large.

    Implementations must be deterministic and treat every cofinite index set
    as large.
    """

    name = "oracle"

    @abstractmethod
    def classify(self, d: Sequence[int]) -> tuple[Sign, int | None]:
        """Sign class of ``d`` and the index where the witnessing tail starts."""


def _constant_tail(d: Sequence[int], indices: Sequence[int]) -> tuple[Sign, int | None]:
    signs = {sign_of(d[i]) for i in indices}
    if len(signs) != 1:
        return Sign.UNDECIDED, None
    s = signs.pop()
    # extend the witnessing tail as far back as the sign persists
    start = indices[0]
    i = start - 1
    while i >= 0 and sign_of(d[i]) is s:
        start = i
        i -= 1
    return s, start


@dataclass(frozen=True)
class EventualSignOracle(UltrafilterOracle):
    """Commits to a sign only if it holds on every index of ``[K - window, K]``."""

    window: int = DEFAULT_WINDOW
    name = "eventual-sign"

    def classify(self, d):
        if not d:
            return Sign.UNDECIDED, None
        K = len(d) - 1
        return _constant_tail(d, range(max(0, K - self.window), K + 1))


@dataclass(frozen=True)
class ResidueOracle(UltrafilterOracle):
    """Eventual sign along the indices ``k = residue (mod modulus)``.

    Models an ultrafilter containing that residue class, so it decides some
    sequences (such as evens vs odds) that oscillate on the full chain.
    """

    residue: int
    modulus: int
    window: int = DEFAULT_WINDOW
    name = "residue"

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise ValueError("need 0 <= residue < modulus")

    def classify(self, d):
        K = len(d) - 1
        idx = [i for i in range(max(0, K - self.window), K + 1) if i % self.modulus == self.residue]
        if not idx:
            return Sign.UNDECIDED, None
        signs = {sign_of(d[i]) for i in idx}
        if len(signs) != 1:
            return Sign.UNDECIDED, None
        s = signs.pop()
        start = idx[0]
        i = start - self.modulus
        while i >= 0 and sign_of(d[i]) is s:
            start = i
            i -= self.modulus
        return s, start


_ORACLES: dict[str, Callable[..., UltrafilterOracle]] = {}


def register_oracle(name: str, factory: Callable[..., UltrafilterOracle]) -> None:
    """Make an oracle available by name; ``factory(arg, window=W)`` builds it.

    ``arg`` is the text after ``name:`` in a selector such as ``residue:1/2``,
    or None.
    """
    _ORACLES[name] = factory


def _residue_factory(arg, window=DEFAULT_WINDOW):
    try:
        r, m = (int(x) for x in (arg or "").split("/"))
    except ValueError:
        raise ValueError("residue oracle needs 'residue:R/M'") from None
    return ResidueOracle(r, m, window)


register_oracle("eventual-sign", lambda arg=None, window=DEFAULT_WINDOW: EventualSignOracle(window))
register_oracle("residue", _residue_factory)


def get_oracle(selector: str = "eventual-sign", window: int = DEFAULT_WINDOW) -> UltrafilterOracle:
    name, _, arg = selector.partition(":")
    if name not in _ORACLES:
        raise ValueError(f"unknown oracle {name!r}; known: {', '.join(sorted(_ORACLES))}")
    return _ORACLES[name](arg or None, window=window)


# -- numerosities ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Numerosity:
    """The numerosity of ``counting.source``, observed on ``H_0 .. H_horizon``."""

    counting: CountingFunction
    chain: Chain
    horizon: int
    counts: tuple[int, ...]

    @property
    def source(self) -> PointSetExpr:
        return self.counting.source

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __sub__(self, other):
        return sub_partial(self, other)

    def __repr__(self) -> str:
        return f"Numerosity({self.source}, {self.chain}, K={self.horizon})"


def numerosity(X: PointSetExpr, chain: Chain | None = None, horizon: int = DEFAULT_HORIZON) -> Numerosity:
    chain = chain or Chain()
    f = CountingFunction(X)
    return Numerosity(f, chain, horizon, tuple(counting_sequence(f, chain, horizon)))


def zero(chain: Chain | None = None, horizon: int = DEFAULT_HORIZON) -> Numerosity:
    return numerosity(EMPTY, chain, horizon)


def one(chain: Chain | None = None, horizon: int = DEFAULT_HORIZON) -> Numerosity:
    """The numerosity of a singleton on the first chain element, so it counts 1 everywhere."""
    chain = chain or Chain()
    return numerosity(Finite([(chain.order(0)[0],)]), chain, horizon)


def _same_frame(x: Numerosity, y: Numerosity):
    if x.chain != y.chain or x.horizon != y.horizon:
        raise ValueError("numerosities live on different chains or horizons")


def _derived(source: PointSetExpr, x: Numerosity, counts) -> Numerosity:
    return Numerosity(CountingFunction(source), x.chain, x.horizon, tuple(counts))


def add(x: Numerosity, y: Numerosity) -> Numerosity:
    """Pointwise sum, realised by a disjoint union.

    If the sources overlap inside the horizon, ``y`` is replaced by a shifted
    copy ``Y x {p}^h`` whose tuples are longer than anything either set has
    there, with ``p`` the first chain element.
    """
    _same_frame(x, y)
    counts = [a + b for a, b in zip(x.counts, y.counts)]
    HK = x.chain.element(x.horizon)
    X, Y = x.source, y.source
    if restrict(X, HK) & restrict(Y, HK):
        top = max(HK)
        p = x.chain.order(0)[0]
        h = max(X.bound(top), Y.bound(top)) + 1
        Y = ShiftedCopy(Y, p, h, p, 0)
    return _derived(Union(X, Y), x, counts)


def mul(x: Numerosity, y: Numerosity) -> Numerosity:
    """Pointwise product, realised by the concatenation product.

    Raises :class:`NotMultipliable` with the colliding tuple if two pairs
    share a concatenation inside the horizon.
    """
    _same_frame(x, y)
    X, Y = x.source, y.source
    if not structurally_multipliable(X, Y):
        hit = find_collision(X, Y, x.chain.element(x.horizon))
        if hit is not None:
            raise NotMultipliable(*hit)
    return _derived(Product(X, Y), x, [a * b for a, b in zip(x.counts, y.counts)])


def sub_partial(c: Numerosity, a: Numerosity) -> Numerosity:
    """``n(C) - n(A)`` for ``A`` a subset of ``C``."""
    _same_frame(c, a)
    HK = c.chain.element(c.horizon)
    if not restrict(a.source, HK) <= restrict(c.source, HK):
        raise ValueError("subtrahend is not a subset of the minuend")
    counts = [p - q for p, q in zip(c.counts, a.counts)]
    for k, v in enumerate(counts):
        if v < 0:
            raise ValueError(f"negative difference at k={k}")
    return _derived(Difference(c.source, a.source), c, counts)


@dataclass(frozen=True)
class Comparison:
    outcome: Outcome
    tail: int | None = None

    def __str__(self) -> str:
        if self.tail is None:
            return self.outcome.value
        return f"{self.outcome.value} {self.tail}"


_BY_SIGN = {Sign.POSITIVE: Outcome.GREATER, Sign.ZERO: Outcome.EQUAL,
            Sign.NEGATIVE: Outcome.LESS, Sign.UNDECIDED: Outcome.UNDECIDED}


def difference(x: Numerosity, y: Numerosity) -> list[int]:
    _same_frame(x, y)
    return [a - b for a, b in zip(x.counts, y.counts)]


def compare(x: Numerosity, y: Numerosity, oracle: UltrafilterOracle | None = None) -> Comparison:
    d = difference(x, y)
    if not any(d):
        return Comparison(Outcome.EQUAL, 0)
    sign, tail = (oracle or EventualSignOracle()).classify(d)
    return Comparison(_BY_SIGN[sign], tail)


def oscillates(d: Sequence[int], window: int = DEFAULT_WINDOW) -> bool:
    """At least two sign classes occur on the trailing window."""
    K = len(d) - 1
    return len({sign_of(v) for v in d[max(0, K - window):]}) > 1


# -- finite approximation and congruences -------------------------------------


@dataclass(frozen=True)
class FapResult:
    holds: bool
    witness: frozenset[int] | None = None


def fap_check(X: PointSetExpr, Y: PointSetExpr, K: int) -> FapResult:
    """``|X_F| <= |Y_F|`` for every ``F`` inside ``{0..K}``; first failure is the witness."""
    validate(X)
    validate(Y)
    for F in subsets_of(range(K + 1)):
        if count_on(X, F) > count_on(Y, F):
            return FapResult(False, F)
    return FapResult(True)


class CongruenceError(ValueError):
    def __init__(self, k: int, left: int, right: int):
        super().__init__(f"counts differ at k={k}: {left} vs {right}")
        self.k = k


def build_congruence(X: PointSetExpr, Y: PointSetExpr, chain: Chain | None, K: int) -> dict:
    """A bijection ``tau`` on ``X_{H_K}`` with ``tau[X_{H_k}] = Y_{H_k}`` for all ``k <= K``.

    Glues bijections between successive layers ``X_{H_k} - X_{H_{k-1}}``,
    pairing points in canonical order.
    """
    chain = chain or Chain()
    tau: dict = {}
    prev_x: frozenset = frozenset()
    prev_y: frozenset = frozenset()
    for k, H in enumerate(chain.elements(K)):
        xs, ys = restrict(X, H), restrict(Y, H)
        if len(xs) != len(ys):
            raise CongruenceError(k, len(xs), len(ys))
        for a, b in zip(canonical(xs - prev_x), canonical(ys - prev_y)):
            tau[a] = b
        prev_x, prev_y = xs, ys
    return tau
