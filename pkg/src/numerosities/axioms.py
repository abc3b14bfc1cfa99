"""Executable checks of the Euclidean principles over a catalog of point sets.

Chain-level checks compare numerosities along ``H_0 .. H_K``.  Checks that
the theory states for every finite support (UP, TP/NP, copies) also run
exhaustively over all ``F`` inside ``{0..scale}``, recomputing restrictions
directly rather than through closed-form counts.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from itertools import product as cartesian
from pathlib import Path
from typing import Any, Callable

from .combinatorics import canonical, subsets_of
from .counting import Chain
from .dsl import parse_expr, parse_spec, to_text
from .numerosity import (
    DEFAULT_HORIZON,
    DEFAULT_WINDOW,
    Comparison,
    EventualSignOracle,
    Outcome,
    UltrafilterOracle,
    compare,
    difference,
    fap_check,
    get_oracle,
    numerosity,
    oscillates,
)
from .pointset import (
    Difference,
    Finite,
    Permute,
    PermSpec,
    PointSetExpr,
    Product,
    ShiftedCopy,
    Union,
    find_collision,
    restrict,
    structurally_multipliable,
    validate,
)

DEFAULT_SCALE = 8
PASS, FAIL, UNDECIDED = "pass", "fail", "undecided"


class PreconditionError(ValueError):
    def __init__(self, message: str, witness: Any):
        super().__init__(f"{message} (witness: {witness})")
        self.witness = witness


@dataclass
class AxiomReport:
    axiom: str
    operands: list[str]
    horizon: int
    verdict: str
    witness: Any = None
    millis: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "operands": self.operands,
            "verdict": self.verdict,
            "witness": self.witness,
            "millis": round(self.millis, 3),
        }


def _support(F) -> list[int]:
    return sorted(F)


def _timed(fn: Callable[..., AxiomReport]) -> Callable[..., AxiomReport]:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.millis = (time.perf_counter() - start) * 1000
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _text(e: PointSetExpr) -> str:
    try:
        return to_text(e)
    except (TypeError, ValueError):
        # user-defined nodes have no DSL form
        return repr(e)


def _texts(*exprs: PointSetExpr) -> list[str]:
    return [_text(e) for e in exprs]


def _cmp(X, Y, oracle, K, chain=None) -> tuple[Comparison, list[int]]:
    x, y = numerosity(X, chain, K), numerosity(Y, chain, K)
    return compare(x, y, oracle), difference(x, y)


def _oracle(oracle):
    return oracle if oracle is not None else EventualSignOracle()


def _top(K: int, chain: Chain | None = None) -> frozenset[int]:
    return (chain or Chain()).element(K)


# -- per-support predicates (also used to replay witnesses) -------------------


def up_holds_on(A: PointSetExpr, n: int, F) -> bool:
    lhs = len(restrict(Product(A, Finite([(n,)])), F))
    return lhs == (len(restrict(A, F)) if n in F else 0)


def tp_holds_on(X: PointSetExpr, spec: PermSpec, F) -> bool:
    image = restrict(Permute(X, spec), F)
    return len(image) == len(restrict(X, F)) and all(
        frozenset(t) == frozenset(spec.apply(t)) for t in restrict(X, F)
    )


def brute_restrict(X: PointSetExpr, F) -> frozenset:
    """``X_F`` by enumerating every tuple over ``F`` up to the certified length."""
    F = sorted(F)
    if not F:
        return frozenset()
    out = set()
    for length in range(1, X.bound(max(F)) + 1):
        out.update(t for t in cartesian(F, repeat=length) if t in X)
    return frozenset(out)


def copies_disjoint_on(A: PointSetExpr, copies: list[PointSetExpr], F) -> bool:
    seen = set(restrict(A, F))
    for c in copies:
        r = restrict(c, F)
        if seen & r:
            return False
        seen |= r
    return True


def _expect_equal(rep: AxiomReport, c: Comparison, K: int, **context) -> AxiomReport:
    """Chain-level follow-up to an exact check: EQUAL is expected along the chain."""
    if c.outcome is Outcome.UNDECIDED:
        rep.verdict = UNDECIDED
        rep.notes.append("chain comparison undecided within the horizon")
    elif c.outcome is not Outcome.EQUAL:
        rep.verdict, rep.witness = FAIL, {"k": K, **context, "outcome": c.outcome.value}
    return rep


# -- checks ------------------------------------------------------------------


@_timed
def check_AP(X, Y, oracle=None, K=DEFAULT_HORIZON) -> AxiomReport:
    """``X ~ Y`` iff ``X - Y ~ Y - X``."""
    oracle = _oracle(oracle)
    whole, d1 = _cmp(X, Y, oracle, K)
    parts, d2 = _cmp(Difference(X, Y), Difference(Y, X), oracle, K)
    rep = AxiomReport("AP", _texts(X, Y), K, PASS)
    for k, (a, b) in enumerate(zip(d1, d2)):
        if a != b:
            rep.verdict, rep.witness = FAIL, {"k": k}
            return rep
    if not (whole.outcome.decided and parts.outcome.decided):
        rep.verdict = UNDECIDED
        rep.notes.append("difference oscillates" if oscillates(d1, getattr(oracle, "window", DEFAULT_WINDOW)) else "oracle undecided")
    elif whole.outcome is not parts.outcome:
        rep.verdict, rep.witness = FAIL, {"k": whole.tail or 0, "outcomes": [whole.outcome.value, parts.outcome.value]}
    return rep


def _implication(rep, premises: list[Comparison], conclusion: Comparison, d_concl):
    if not all(p.outcome.decided for p in premises):
        rep.verdict = UNDECIDED
    elif all(p.outcome is Outcome.EQUAL for p in premises):
        if conclusion.outcome is not Outcome.EQUAL:
            k = next((i for i in range(len(d_concl) - 1, -1, -1) if d_concl[i]), 0)
            rep.verdict, rep.witness = FAIL, {"k": k}
    else:
        rep.notes.append("premises not both equal; implication holds vacuously")
    return rep


@_timed
def check_SP(A, A2, B, B2, oracle=None, K=DEFAULT_HORIZON) -> AxiomReport:
    """Disjoint ``A, B`` and ``A', B'`` with ``A ~ A'``, ``B ~ B'`` give ``A u B ~ A' u B'``."""
    oracle = _oracle(oracle)
    H = _top(K)
    for P, Q in ((A, B), (A2, B2)):
        common = restrict(P, H) & restrict(Q, H)
        if common:
            raise PreconditionError("SP operands overlap", {"F": _support(H), "tuple": list(canonical(common)[0])})
    p1, _ = _cmp(A, A2, oracle, K)
    p2, _ = _cmp(B, B2, oracle, K)
    concl, d = _cmp(Union(A, B), Union(A2, B2), oracle, K)
    rep = AxiomReport("SP", _texts(A, A2, B, B2), K, PASS)
    return _implication(rep, [p1, p2], concl, d)


@_timed
def check_DP(C, C2, A, A2, oracle=None, K=DEFAULT_HORIZON) -> AxiomReport:
    """``A`` in ``C``, ``A'`` in ``C'`` with ``A ~ A'``, ``C ~ C'`` give ``C - A ~ C' - A'``."""
    oracle = _oracle(oracle)
    H = _top(K)
    for sub, sup in ((A, C), (A2, C2)):
        extra = restrict(sub, H) - restrict(sup, H)
        if extra:
            raise PreconditionError("DP subset condition fails", {"F": _support(H), "tuple": list(canonical(extra)[0])})
    p1, _ = _cmp(C, C2, oracle, K)
    p2, _ = _cmp(A, A2, oracle, K)
    concl, d = _cmp(Difference(C, A), Difference(C2, A2), oracle, K)
    rep = AxiomReport("DP", _texts(C, C2, A, A2), K, PASS)
    return _implication(rep, [p1, p2], concl, d)


@_timed
def check_UP(A, n, K=DEFAULT_HORIZON, scale=DEFAULT_SCALE, oracle=None) -> AxiomReport:
    """``A x {n}`` has exactly the counts of ``A`` on every ``F`` containing ``n``."""
    rep = AxiomReport("UP", _texts(A) + [f"n={n}"], K, PASS)
    for F in subsets_of(range(scale + 1)):
        if not up_holds_on(A, n, F):
            rep.verdict, rep.witness = FAIL, {"F": _support(F)}
            return rep
    c, _ = _cmp(Product(A, Finite([(n,)])), A, _oracle(oracle), K)
    return _expect_equal(rep, c, K)


@_timed
def check_TP_NP(X, spec: PermSpec, K=DEFAULT_HORIZON, scale=DEFAULT_SCALE, oracle=None) -> AxiomReport:
    """Position permutations keep supports, hence every count ``|X_F|``."""
    T = Permute(X, spec)
    validate(T)
    rep = AxiomReport("TP_NP", [_text(T)], K, PASS)
    top = range(scale + 1)
    if brute_restrict(T, top) != restrict(T, top):
        rep.verdict, rep.witness = FAIL, {"F": list(top)}
        return rep
    for F in subsets_of(top):
        if not tp_holds_on(X, spec, F):
            rep.verdict, rep.witness = FAIL, {"F": _support(F)}
            return rep
    c, _ = _cmp(T, X, _oracle(oracle), K)
    return _expect_equal(rep, c, K)


def _require_multipliable(X, Y, H):
    if structurally_multipliable(X, Y):
        return
    hit = find_collision(X, Y, H)
    if hit is not None:
        raise PreconditionError(
            "operands are not multipliable",
            {"tuple": list(hit[0]), "pairs": [[list(a), list(b)] for a, b in hit[1]]},
        )


@_timed
def check_PP(X, X2, Y, Y2, oracle=None, K=DEFAULT_HORIZON) -> AxiomReport:
    """Multipliable pairs with ``X ~ X'``, ``Y ~ Y'`` give ``X x Y ~ X' x Y'``."""
    oracle = _oracle(oracle)
    H = _top(K)
    _require_multipliable(X, Y, H)
    _require_multipliable(X2, Y2, H)
    p1, _ = _cmp(X, X2, oracle, K)
    p2, _ = _cmp(Y, Y2, oracle, K)
    concl, d = _cmp(Product(X, Y), Product(X2, Y2), oracle, K)
    rep = AxiomReport("PP", _texts(X, X2, Y, Y2), K, PASS)
    return _implication(rep, [p1, p2], concl, d)


@_timed
def check_ZP(X, Y, oracle=None, K=DEFAULT_HORIZON) -> AxiomReport:
    """At most one of less/equal/greater; undecided only on oscillating differences."""
    oracle = _oracle(oracle)
    first, d = _cmp(X, Y, oracle, K)
    again, _ = _cmp(X, Y, oracle, K)
    mirror, _ = _cmp(Y, X, oracle, K)
    rep = AxiomReport("ZP", _texts(X, Y), K, PASS)
    if first != again or mirror.outcome is not first.outcome.flipped():
        rep.verdict, rep.witness = FAIL, {"outcomes": [first.outcome.value, again.outcome.value, mirror.outcome.value]}
    elif not first.outcome.decided:
        window = getattr(oracle, "window", DEFAULT_WINDOW)
        if oscillates(d, window):
            rep.verdict = UNDECIDED
            rep.notes.append("difference oscillates")
        else:
            rep.verdict, rep.witness = FAIL, {"k": len(d) - 1}
    else:
        rep.notes.append(str(first))
    return rep


def random_finite_set(rng: random.Random, size: int, max_entry: int = 9, max_len: int = 3) -> Finite:
    points: set[tuple[int, ...]] = set()
    while len(points) < size:
        length = rng.randint(1, max_len)
        points.add(tuple(rng.randint(0, max_entry) for _ in range(length)))
    return Finite(points)


INFINITE_SAMPLES = ("N^1", "N^2", "diag(2)", "evens", "odds", "squares", "N^1 * diag(2)")


@_timed
def check_finite_agreement(size=5, trials=40, seed=0, oracle=None, K=DEFAULT_HORIZON) -> AxiomReport:
    """Finite sets are equinumerous iff equicardinal, and smaller than infinite ones."""
    oracle = _oracle(oracle)
    rng = random.Random(seed)
    rep = AxiomReport("FIN", [f"size<={size}", f"trials={trials}", f"seed={seed}"], K, PASS)
    infinite = [parse_expr(t) for t in INFINITE_SAMPLES]
    short: set[str] = set()
    for _ in range(trials):
        A = random_finite_set(rng, rng.randint(0, size))
        B = random_finite_set(rng, rng.randint(0, size))
        c, _ = _cmp(A, B, oracle, K)
        expected = Outcome.EQUAL if len(A.points) == len(B.points) else (
            Outcome.LESS if len(A.points) < len(B.points) else Outcome.GREATER)
        if c.outcome is not expected:
            rep.verdict, rep.witness = FAIL, {"A": to_text(A), "B": to_text(B), "outcome": c.outcome.value}
            return rep
        for X in infinite:
            # the horizon must reach past |A| on the whole trailing window
            x = numerosity(X, None, K)
            if x.counts[max(0, K - getattr(oracle, "window", DEFAULT_WINDOW))] <= len(A.points):
                short.add(to_text(X))
                continue
            c, _ = _cmp(A, X, oracle, K)
            if c.outcome is not Outcome.LESS:
                rep.verdict, rep.witness = FAIL, {"A": to_text(A), "B": to_text(X), "outcome": c.outcome.value}
                return rep
    if short:
        rep.notes.append("horizon too short to separate: " + ", ".join(sorted(short)))
    return rep


@_timed
def check_copy(A, m, h, n, k, copies=2, K=DEFAULT_HORIZON, scale=DEFAULT_SCALE, oracle=None) -> AxiomReport:
    """Copies ``A x {m}^h x {n}^(k+i)`` are disjoint from ``A`` and each other, and equinumerous to ``A``.

    Disjointness is only asserted once ``h + k`` reaches the finitary bound
    of ``A`` over the largest support examined; below it a collision is
    reported as a note.
    """
    oracle = _oracle(oracle)
    rep = AxiomReport("COPY", _texts(A) + [f"m={m}", f"h={h}", f"n={n}", f"k={k}", f"copies={copies}"], K, PASS)
    family = [ShiftedCopy(A, m, h, n, k + i) for i in range(copies)]
    H = _top(K)
    top = max(max(H), scale)
    required = A.bound(top)
    hypothesis = h + k >= required and m != n and h >= 1
    for F in list(subsets_of(range(scale + 1))) + [H]:
        if not copies_disjoint_on(A, family, F):
            if hypothesis:
                rep.verdict, rep.witness = FAIL, {"F": _support(F)}
                return rep
            rep.notes.append(f"below the bound ({h}+{k} < {required}): collision on {_support(F)}")
            rep.witness = {"below_bound": True, "F": _support(F)}
            break
    for F in subsets_of(range(scale + 1)):
        if m in F and n in F:
            base = len(restrict(A, F))
            for c in family:
                if len(restrict(c, F)) != base:
                    rep.verdict, rep.witness = FAIL, {"F": _support(F), "copy": _text(c)}
                    return rep
    for c in family:
        cmp_, _ = _cmp(c, A, oracle, K)
        _expect_equal(rep, cmp_, K, copy=_text(c))
        if rep.verdict == FAIL:
            return rep
    return rep


@_timed
def check_FAP(X, Y, K=8) -> AxiomReport:
    """Counts dominated on every support inside ``{0..K}``."""
    res = fap_check(X, Y, K)
    rep = AxiomReport("FAP", _texts(X, Y), K, PASS)
    if not res.holds:
        rep.verdict, rep.witness = FAIL, {"F": _support(res.witness)}
    return rep


# -- catalog -----------------------------------------------------------------


def load_catalog(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("numerosities").joinpath("catalog.json").read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


def catalog_expressions(catalog: dict | None = None) -> dict[str, PointSetExpr]:
    catalog = catalog or load_catalog()
    return {name: parse_expr(text) for name, text in catalog["expressions"].items()}


def _resolve(text: str, named: dict[str, PointSetExpr]) -> PointSetExpr:
    return named[text] if text in named else parse_expr(text)


def run_check(entry: dict, named: dict, horizon: int, window: int, scale: int) -> AxiomReport:
    axiom = entry["axiom"]
    ops = [_resolve(t, named) for t in entry.get("operands", [])]
    oracle = get_oracle(entry.get("oracle", "eventual-sign"), window)
    if axiom == "AP":
        return check_AP(*ops, oracle=oracle, K=horizon)
    if axiom == "SP":
        return check_SP(*ops, oracle=oracle, K=horizon)
    if axiom == "DP":
        return check_DP(*ops, oracle=oracle, K=horizon)
    if axiom == "PP":
        return check_PP(*ops, oracle=oracle, K=horizon)
    if axiom == "ZP":
        return check_ZP(*ops, oracle=oracle, K=horizon)
    if axiom == "UP":
        return check_UP(ops[0], entry["n"], K=horizon, scale=scale, oracle=oracle)
    if axiom == "TP_NP":
        return check_TP_NP(ops[0], parse_spec(entry["spec"]), K=horizon, scale=scale, oracle=oracle)
    if axiom == "FIN":
        return check_finite_agreement(entry.get("size", 5), entry.get("trials", 40),
                                      entry.get("seed", 0), oracle=oracle, K=horizon)
    if axiom == "COPY":
        return check_copy(ops[0], entry["m"], entry["h"], entry["n"], entry["k"],
                          entry.get("copies", 2), K=horizon, scale=scale, oracle=oracle)
    if axiom == "FAP":
        return check_FAP(*ops, K=entry.get("K", 8))
    raise ValueError(f"unknown axiom {axiom!r}")


def run_catalog(path=None, horizon=DEFAULT_HORIZON, window=DEFAULT_WINDOW, scale=DEFAULT_SCALE) -> list[AxiomReport]:
    """Run every check of the catalog, in catalog order."""
    catalog = load_catalog(path)
    named = catalog_expressions(catalog)
    return [run_check(entry, named, horizon, window, scale) for entry in catalog["checks"]]


def report_table(reports: list[AxiomReport]) -> str:
    rows = [("axiom", "verdict", "millis", "operands")]
    for r in reports:
        rows.append((r.axiom, r.verdict, f"{r.millis:.1f}", "; ".join(r.operands)))
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row[:3], widths)) + "  " + row[3])
    return "\n".join(lines)
