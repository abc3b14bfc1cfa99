"""Text syntax for point-set expressions.

Grammar::

    expr  := term (('|' | '&' | '\\') term)*
    term  := atom ('*' atom)*
    atom  := '{' [tuple (',' tuple)*] '}' | 'N^' int | 'diag(' int ')'
           | 'evens' | 'odds' | 'squares' | 'affine(' int ',' int ')'
           | 'perm(' expr ',' spec ')' | 'copy(' expr ',' int ',' int ',' int ',' int ')'
           | '(' expr ')'
    tuple := '(' int (',' int)* ')'
    spec  := 'rev' | 'id' | ('[' int+ ']')+

Set operators share one precedence level and associate to the left;
``*`` (concatenation) binds tighter.  A permutation ``[p0 p1 ...]`` of
length ``d`` acts on tuples of arity ``d``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .combinatorics import canonical
from .pointset import (
    Affine,
    Diagonal,
    Difference,
    Finite,
    FullSpace,
    Intersection,
    MonotoneImage,
    PermSpec,
    Permute,
    PointSetExpr,
    Product,
    ShiftedCopy,
    Square,
    Union,
    validate,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}\n  {text}\n  {' ' * pos}^")
        self.message = message
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|(N\^)|([A-Za-z_]+)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "word" | "pow" | "sym" | "end"
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        kind = {1: "int", 2: "pow", 3: "word", 4: "sym"}[m.lastindex]
        tokens.append(Token(kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: Token | None = None):
        raise ParseError(message, self.text, (tok or self.tok).pos)

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, value: str) -> Token:
        if self.tok.value != value or self.tok.kind not in ("sym", "word"):
            shown = repr(self.tok.value) if self.tok.kind != "end" else "end of input"
            self.fail(f"expected {value!r}, found {shown}")
        return self.take()

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail("expected a natural number")
        return int(self.take().value)

    def expr(self) -> PointSetExpr:
        node = self.term()
        while self.tok.kind == "sym" and self.tok.value in ("|", "&", "\\"):
            op = self.take().value
            rhs = self.term()
            node = {"|": Union, "&": Intersection, "\\": Difference}[op](node, rhs)
        return node

    def term(self) -> PointSetExpr:
        node = self.atom()
        while self.tok.kind == "sym" and self.tok.value == "*":
            self.take()
            node = Product(node, self.atom())
        return node

    def atom(self) -> PointSetExpr:
        tok = self.tok
        if tok.kind == "pow":
            self.take()
            return FullSpace(self.integer())
        if tok.kind == "sym" and tok.value == "{":
            return self.finite()
        if tok.kind == "sym" and tok.value == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "word":
            word = self.take().value
            if word == "evens":
                return MonotoneImage(Affine(2, 0))
            if word == "odds":
                return MonotoneImage(Affine(2, 1))
            if word == "squares":
                return MonotoneImage(Square())
            if word == "diag":
                self.expect("(")
                d = self.integer()
                self.expect(")")
                return Diagonal(d)
            if word == "affine":
                self.expect("(")
                a = self.integer()
                self.expect(",")
                b = self.integer()
                self.expect(")")
                return MonotoneImage(Affine(a, b))
            if word == "perm":
                self.expect("(")
                inner = self.expr()
                self.expect(",")
                spec = self.spec()
                self.expect(")")
                return Permute(inner, spec)
            if word == "copy":
                self.expect("(")
                inner = self.expr()
                args = []
                for _ in range(4):
                    self.expect(",")
                    args.append(self.integer())
                self.expect(")")
                return ShiftedCopy(inner, *args)
            self.fail(f"unknown name {word!r}", tok)
        if tok.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {tok.value!r}")

    def finite(self) -> PointSetExpr:
        self.expect("{")
        points = []
        if self.tok.value != "}":
            points.append(self.point())
            while self.tok.value == ",":
                self.take()
                points.append(self.point())
        self.expect("}")
        return Finite(points)

    def point(self) -> tuple[int, ...]:
        self.expect("(")
        entries = [self.integer()]
        while self.tok.value == ",":
            self.take()
            entries.append(self.integer())
        self.expect(")")
        return tuple(entries)

    def spec(self) -> PermSpec:
        tok = self.tok
        if tok.kind == "word" and tok.value in ("rev", "id"):
            self.take()
            return PermSpec(reverse=True) if tok.value == "rev" else PermSpec()
        perms = []
        while self.tok.kind == "sym" and self.tok.value == "[":
            self.take()
            p = []
            while self.tok.kind == "int":
                p.append(int(self.take().value))
            self.expect("]")
            perms.append(p)
        if not perms:
            self.fail("expected a permutation spec ('rev', 'id' or '[...]')")
        spec = PermSpec.of(*perms)
        problem = spec.check()
        if problem:
            self.fail(problem, tok)
        return spec


def parse_expr(text: str, check: bool = True) -> PointSetExpr:
    """Parse ``text``; with ``check`` the result is also validated."""
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "end":
        p.fail(f"unexpected {p.tok.value!r}")
    if check:
        validate(node)
    return node


def parse_spec(text: str) -> PermSpec:
    """Parse a permutation spec on its own, e.g. ``rev`` or ``[1 0][2 0 1]``."""
    p = _Parser(text)
    spec = p.spec()
    if p.tok.kind != "end":
        p.fail(f"unexpected {p.tok.value!r}")
    return spec


# -- printing ----------------------------------------------------------------

_SETOPS = {Union: "|", Intersection: "&", Difference: "\\"}


def _spec_text(spec: PermSpec) -> str:
    if spec.reverse:
        return "rev"
    if not spec.perms:
        return "id"
    return "".join("[" + " ".join(map(str, p)) + "]" for _, p in spec.perms)


def to_text(X: PointSetExpr) -> str:
    """Canonical text; ``parse_expr(to_text(X)) == X``."""
    op = _SETOPS.get(type(X))
    if op is not None:
        right = to_text(X.right)
        if type(X.right) in _SETOPS:
            right = f"({right})"
        return f"{to_text(X.left)} {op} {right}"
    if isinstance(X, Product):
        left, right = to_text(X.left), to_text(X.right)
        if type(X.left) in _SETOPS:
            left = f"({left})"
        if type(X.right) in _SETOPS or isinstance(X.right, Product):
            right = f"({right})"
        return f"{left} * {right}"
    if isinstance(X, Finite):
        return "{" + ",".join("(" + ",".join(map(str, p)) + ")" for p in canonical(X.points)) + "}"
    if isinstance(X, FullSpace):
        return f"N^{X.d}"
    if isinstance(X, Diagonal):
        return f"diag({X.d})"
    if isinstance(X, MonotoneImage):
        f = X.f
        if f == Affine(2, 0):
            return "evens"
        if f == Affine(2, 1):
            return "odds"
        if isinstance(f, Square):
            return "squares"
        if isinstance(f, Affine):
            return f"affine({f.a},{f.b})"
        raise ValueError(f"no text form for monotone map {f!r}")
    if isinstance(X, Permute):
        return f"perm({to_text(X.inner)}, {_spec_text(X.spec)})"
    if isinstance(X, ShiftedCopy):
        return f"copy({to_text(X.inner)}, {X.m}, {X.h}, {X.n}, {X.k})"
    raise TypeError(f"cannot print {X!r}")
