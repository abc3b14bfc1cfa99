"""Bounded formal power series viewed through finite truncation windows.

A window fixes a finite set of variables and a per-variable exponent cap.
A product coefficient at ``t^c`` only involves monomials dividing ``t^c``,
so arithmetic inside a window is exact.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Mapping

from .combinatorics import (
    SUBSET_LIMIT,
    Monomial,
    make_support,
    monomial_of_tuple,
    multinomial,
    subsets_of,
    tuple_count_of_monomial,
)
from .pointset import PointSetExpr, restrict

Assignment = Mapping[int, "Fraction | int"]


class WindowMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TruncationWindow:
    support: frozenset[int]
    degree_cap: int

    def __init__(self, support: Iterable[int], degree_cap: int):
        if degree_cap < 1:
            raise ValueError("degree cap must be positive")
        object.__setattr__(self, "support", make_support(support))
        object.__setattr__(self, "degree_cap", degree_cap)

    def admits(self, m: Monomial) -> bool:
        return all(v in self.support and e <= self.degree_cap for v, e in m.exps)

    def monomials(self) -> list[Monomial]:
        """Every monomial of the window, in canonical order."""
        vars_ = sorted(self.support)
        out = [
            Monomial(zip(vars_, exps))
            for exps in cartesian(range(self.degree_cap + 1), repeat=len(vars_))
        ]
        return sorted(out, key=Monomial.sort_key)


def window_for(X: PointSetExpr, F: Iterable[int]) -> TruncationWindow:
    """Smallest window on ``F`` that holds every monomial of ``X_F``."""
    F = make_support(F)
    cap = X.bound(max(F)) if F else 1
    return TruncationWindow(F, max(cap, 1))


def least_bound(coeffs: Mapping[Monomial, int]) -> int:
    """Least ``b`` with ``|n_a| <= b * multinomial(a)`` for every coefficient."""
    b = 0
    for m, c in coeffs.items():
        cap = multinomial(m)
        b = max(b, -(-abs(c) // cap))
    return b


@dataclass(frozen=True)
class TruncatedSeries:
    window: TruncationWindow
    coeffs: Mapping[Monomial, int]
    bound_b: int | None = field(default=None, compare=False)

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            if not self.window.admits(m):
                raise ValueError(f"{m!r} lies outside the window")
            if c:
                clean[m] = int(c)
        object.__setattr__(self, "coeffs", clean)
        if self.bound_b is not None and least_bound(clean) > self.bound_b:
            raise ValueError(f"coefficients exceed the bound b={self.bound_b}")

    @classmethod
    def zero(cls, window: TruncationWindow) -> TruncatedSeries:
        return cls(window, {}, 0)

    @classmethod
    def build(cls, window: TruncationWindow, coeffs: Mapping[Monomial, int]) -> TruncatedSeries:
        """Construct with the least valid bound certificate attached."""
        s = cls(window, coeffs)
        return cls(window, s.coeffs, least_bound(s.coeffs))

    def __hash__(self):
        return hash((self.window, frozenset(self.coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, m: Monomial) -> int:
        return self.coeffs.get(m, 0)

    def terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.coeffs.items(), key=lambda mc: mc[0].sort_key())

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return TruncatedSeries(self.window, {m: -c for m, c in self.coeffs.items()}, self.bound_b)

    def __str__(self) -> str:
        return to_text(self)


def char_series(X: PointSetExpr, W: TruncationWindow) -> TruncatedSeries:
    """``S_X`` inside ``W``: coefficient of ``t^a`` counts the points of ``X`` with monomial ``t^a``."""
    coeffs: dict[Monomial, int] = {}
    for x in restrict(X, W.support):
        m = monomial_of_tuple(x)
        if W.admits(m):
            coeffs[m] = coeffs.get(m, 0) + 1
    return TruncatedSeries(W, coeffs, 1)


def truncate(S: TruncatedSeries, W: TruncationWindow) -> TruncatedSeries:
    """Keep the terms of ``S`` that fit in ``W``."""
    return TruncatedSeries.build(W, {m: c for m, c in S.coeffs.items() if W.admits(m)})


def _same_window(S: TruncatedSeries, T: TruncatedSeries):
    if S.window != T.window:
        raise WindowMismatch(f"windows differ: {S.window} vs {T.window}")


def add(S: TruncatedSeries, T: TruncatedSeries) -> TruncatedSeries:
    _same_window(S, T)
    out = dict(S.coeffs)
    for m, c in T.coeffs.items():
        out[m] = out.get(m, 0) + c
    return TruncatedSeries.build(S.window, out)


def sub(S: TruncatedSeries, T: TruncatedSeries) -> TruncatedSeries:
    return add(S, -T)


def mul(S: TruncatedSeries, T: TruncatedSeries) -> TruncatedSeries:
    """Convolution; the result window has the summed degree cap."""
    if S.window.support != T.window.support:
        raise WindowMismatch("product needs windows on the same support")
    W = TruncationWindow(S.window.support, S.window.degree_cap + T.window.degree_cap)
    out: dict[Monomial, int] = {}
    for ma, ca in S.coeffs.items():
        for mb, cb in T.coeffs.items():
            m = ma * mb
            out[m] = out.get(m, 0) + ca * cb
    return TruncatedSeries.build(W, out)


def indicator(F: Iterable[int]) -> dict[int, int]:
    """The 0-1 assignment ``x_F``."""
    return {i: 1 for i in make_support(F)}


def evaluate(S: TruncatedSeries, v: Assignment) -> Fraction:
    """Exact value of ``S`` with ``t_i := v[i]`` (absent variables read 0)."""
    values = {}
    for i, x in v.items():
        if i not in S.window.support:
            raise ValueError(f"assignment mentions t{i}, outside the window")
        x = Fraction(x)
        if x < 0:
            raise ValueError("assignment values must be non-negative")
        values[i] = x
    total = Fraction(0)
    for m, c in S.coeffs.items():
        term = Fraction(c)
        for var, e in m.exps:
            term *= values.get(var, 0) ** e
            if not term:
                break
        total += term
    return total


def evaluate_at_support(S: TruncatedSeries, F: Iterable[int]) -> int:
    """``S(x_F)``: the sum of coefficients of monomials supported inside ``F``."""
    F = make_support(F)
    if not F <= S.window.support:
        raise ValueError("support outside the window")
    return sum(c for m, c in S.coeffs.items() if m.support <= F)


def squarefree(S: TruncatedSeries) -> TruncatedSeries:
    """Replace each ``t^a`` by ``t_{supp(a)}`` and collect coefficients."""
    out: dict[Monomial, int] = {}
    for m, c in S.coeffs.items():
        sq = Monomial.of_support(m.support)
        out[sq] = out.get(sq, 0) + c
    return TruncatedSeries.build(TruncationWindow(S.window.support, 1), out)


def _masks(F: Iterable[int], g: Mapping[frozenset, int]) -> tuple[list[int], list[int]]:
    elems = sorted(make_support(F))
    if len(elems) > SUBSET_LIMIT:
        raise ValueError("support too large for subset enumeration")
    vals = []
    for mask in range(1 << len(elems)):
        E = frozenset(e for j, e in enumerate(elems) if mask >> j & 1)
        if E not in g:
            raise KeyError(f"missing value for subset {sorted(E)}")
        vals.append(g[E])
    return elems, vals


def _to_map(elems: list[int], vals: list[int]) -> dict[frozenset, int]:
    return {
        frozenset(e for j, e in enumerate(elems) if mask >> j & 1): v
        for mask, v in enumerate(vals)
    }


def mobius_invert(g: Mapping[frozenset, int], F: Iterable[int]) -> dict[frozenset, int]:
    """``n_E = sum over E' in E of (-1)^|E - E'| g(E')`` for every ``E`` in ``F``."""
    elems, vals = _masks(F, g)
    for j in range(len(elems)):
        bit = 1 << j
        for mask in range(len(vals)):
            if mask & bit:
                vals[mask] -= vals[mask ^ bit]
    return _to_map(elems, vals)


def subset_sum(n: Mapping[frozenset, int], F: Iterable[int]) -> dict[frozenset, int]:
    """``g(E) = sum over E' in E of n(E')``; inverse of :func:`mobius_invert`."""
    elems, vals = _masks(F, n)
    for j in range(len(elems)):
        bit = 1 << j
        for mask in range(len(vals)):
            if mask & bit:
                vals[mask] += vals[mask ^ bit]
    return _to_map(elems, vals)


def is_characteristic(S: TruncatedSeries) -> bool:
    """Whether ``S`` is the characteristic series of some point set.

    The constant term must vanish since there are no tuples of length zero.
    """
    for m, c in S.coeffs.items():
        if c < 0 or m.degree == 0 or c > tuple_count_of_monomial(m):
            return False
    return True


def decompose_positive(S: TruncatedSeries) -> tuple[int, list[TruncatedSeries]]:
    """Split a non-negative series into a constant plus characteristic layers.

    Each layer takes, per monomial, as much of the remaining coefficient as
    the monomial's tuple count allows, so at most ``b`` layers are produced.
    """
    if any(c < 0 for c in S.coeffs.values()):
        raise ValueError("negative coefficient present")
    constant = S.coeffs.get(Monomial.one(), 0)
    remaining = {m: c for m, c in S.coeffs.items() if m.degree}
    layers = []
    while remaining:
        layer = {m: min(c, tuple_count_of_monomial(m)) for m, c in remaining.items()}
        layers.append(TruncatedSeries(S.window, layer, 1))
        remaining = {m: c - layer[m] for m, c in remaining.items() if c > layer[m]}
    b = S.bound_b if S.bound_b is not None else least_bound(S.coeffs)
    assert len(layers) <= max(b, 0), "layer count exceeds the bound certificate"
    return constant, layers


def in_I0_poly(S: TruncatedSeries) -> bool:
    """Membership of a polynomial in the ideal generated by ``t_n - 1``.

    For polynomial rings this ideal is the kernel of evaluation at all ones.
    """
    return evaluate(S, {i: 1 for i in S.window.support}) == 0


def in_I1_window(S: TruncatedSeries) -> bool:
    """Whether ``S`` has zero squarefree part (equivalently ``S(x_F) = 0`` for all ``F``)."""
    by_projection = not squarefree(S)
    by_counting = all(evaluate_at_support(S, F) == 0 for F in subsets_of(S.window.support))
    if by_projection != by_counting:
        raise AssertionError("squarefree and counting characterizations disagree")
    return by_projection


# -- canonical text ----------------------------------------------------------


def _monomial_text(m: Monomial) -> str:
    return "*".join(f"t{v}" if e == 1 else f"t{v}^{e}" for v, e in m.exps)


def to_text(S: TruncatedSeries) -> str:
    """Canonical form such as ``3*t0 + 2*t0*t1 - 1*t1^2``; zero prints as ``0``."""
    parts = []
    for m, c in S.terms():
        body = str(abs(c)) if not m.exps else f"{abs(c)}*{_monomial_text(m)}"
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


_MONO = r"t\d+(?:\^\d+)?(?:\s*\*\s*t\d+(?:\^\d+)?)*"
_TERM = re.compile(rf"\s*([+-])?\s*(?:(\d+)(?:\s*\*\s*({_MONO}))?|({_MONO}))\s*")
_FACTOR = re.compile(r"t(\d+)(?:\^(\d+))?")


def parse_series(text: str, window: TruncationWindow | None = None) -> TruncatedSeries:
    """Parse the canonical text form (coefficient ``1`` may be omitted).

    Without ``window`` the smallest window holding every term is used.
    """
    coeffs: dict[Monomial, int] = {}
    pos = 0
    first = True
    if not text.strip():
        raise ValueError("empty series text")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(4) is None):
            raise ValueError(f"cannot parse series at column {pos + 1}: {text!r}")
        sign, num = m.group(1), m.group(2)
        factors = m.group(3) or m.group(4) or ""
        if sign is None and not first:
            raise ValueError(f"missing '+' or '-' at column {pos + 1}: {text!r}")
        mono = Monomial((int(v), int(e or 1)) for v, e in _FACTOR.findall(factors))
        c = int(num) if num is not None else 1
        coeffs[mono] = coeffs.get(mono, 0) + (-c if sign == "-" else c)
        pos = m.end()
        first = False
    if window is None:
        support = set().union(*(mm.support for mm in coeffs)) if coeffs else set()
        cap = max((mm.max_exponent for mm in coeffs), default=1)
        window = TruncationWindow(support, max(cap, 1))
    return TruncatedSeries.build(window, coeffs)
