"""Counting functions ``F -> |X_F|``, chains of supports and sigma-indexing."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .combinatorics import make_support, render_support
from .pointset import PointSetExpr, count_on, validate


@dataclass(frozen=True)
class Chain:
    """A reordering of N given by an injective prefix ``pi(0), pi(1), ...``.

    Past the prefix the order continues with the unused naturals in
    increasing order, so ``Chain()`` is the identity chain ``F_k = {0..k}``.
    Prefixes are normalised so that equal orders compare equal.
    """

    prefix: tuple[int, ...] = ()

    def __post_init__(self):
        p = tuple(self.prefix)
        if len(set(p)) != len(p) or any(not isinstance(i, int) or i < 0 for i in p):
            raise ValueError("chain prefix must be an injective sequence of naturals")
        p = list(p)
        while p and p[-1] == _least_missing(p[:-1]):
            p.pop()
        object.__setattr__(self, "prefix", tuple(p))

    @classmethod
    def identity(cls) -> Chain:
        return cls()

    def order(self, k: int) -> list[int]:
        """``pi(0), ..., pi(k)``."""
        out = list(self.prefix[: k + 1])
        used = set(out)
        nxt = 0
        while len(out) <= k:
            while nxt in used:
                nxt += 1
            out.append(nxt)
            used.add(nxt)
        return out

    def element(self, k: int) -> frozenset[int]:
        """``H_k = {pi(0), ..., pi(k)}``."""
        return frozenset(self.order(k))

    def elements(self, K: int) -> list[frozenset[int]]:
        order = self.order(K)
        return [frozenset(order[: k + 1]) for k in range(K + 1)]

    def __str__(self) -> str:
        return "identity" if not self.prefix else "perm:" + ",".join(map(str, self.prefix))


def _least_missing(items) -> int:
    s = set(items)
    n = 0
    while n in s:
        n += 1
    return n


def parse_chain(text: str) -> Chain:
    """``identity`` or ``perm:<comma separated prefix>``."""
    text = text.strip()
    if text == "identity":
        return Chain()
    if text.startswith("perm:"):
        body = text[len("perm:"):]
        try:
            prefix = tuple(int(p) for p in body.split(",") if p.strip())
        except ValueError:
            raise ValueError(f"bad chain prefix {body!r}") from None
        return Chain(prefix)
    raise ValueError(f"unknown chain {text!r}; use 'identity' or 'perm:<list>'")


class CountingFunction:
    """Memoised ``F -> |X_F|`` for one point-set expression."""

    def __init__(self, source: PointSetExpr):
        validate(source)
        self.source = source
        self._cache: dict[frozenset[int], int] = {}

    def __call__(self, F: Iterable[int]) -> int:
        F = make_support(F)
        value = self._cache.get(F)
        if value is None:
            value = count_on(self.source, F)
            # dict.setdefault is atomic; duplicate work is harmless
            value = self._cache.setdefault(F, value)
        return value

    def __repr__(self) -> str:
        return f"CountingFunction({self.source!r})"


def count(X: PointSetExpr, F: Iterable[int]) -> int:
    return count_on(X, F)


def counting_sequence(X: PointSetExpr | CountingFunction, chain: Chain, K: int) -> list[int]:
    """``[|X_{H_0}|, ..., |X_{H_K}|]``."""
    f = X if isinstance(X, CountingFunction) else CountingFunction(X)
    return [f(H) for H in chain.elements(K)]


def sigma_transport(values: Mapping[frozenset[int], int]) -> list[int]:
    """Re-index values given on chain elements by cardinality: entry ``n`` sits at ``|H| = n+1``."""
    by_size: dict[int, frozenset[int]] = {}
    for H in values:
        if len(H) in by_size:
            raise ValueError("two chain elements share a cardinality")
        by_size[len(H)] = H
    sizes = sorted(by_size)
    if sizes != list(range(1, len(sizes) + 1)):
        raise ValueError("chain elements must have cardinalities 1, 2, ..., n")
    for a, b in zip(sizes, sizes[1:]):
        if not by_size[a] < by_size[b]:
            raise ValueError("values are not indexed by a chain")
    return [values[by_size[s]] for s in sizes]


def counting_csv(X: PointSetExpr, chain: Chain, K: int) -> str:
    """CSV with header ``k,H_k,count``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "H_k", "count"])
    seq = counting_sequence(X, chain, K)
    for k, (H, c) in enumerate(zip(chain.elements(K), seq)):
        w.writerow([k, render_support(H), c])
    return buf.getvalue()


def nondecreasing(seq: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(seq, seq[1:]))
