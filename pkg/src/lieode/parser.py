"""Text front end: ``dy/dx = <expr>`` and bare expressions.

Grammar (no implicit multiplication; ``^`` is right-associative and binds
tighter than unary minus, which binds tighter than ``* /``)::

    ode     := "dy" "/" "dx" "=" expr
    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | NAME | ("exp" | "ln") "(" expr ")" | "(" expr ")"

NUMBER is an integer or a decimal literal; decimals are read exactly, so
``0.5`` is the rational 1/2.  Exponents must reduce to rational constants.
``ln`` denotes ln|.|.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import expr as E
from .expr import rational as R

FUNCTIONS = ("exp", "ln")
ODE_SYMBOLS = ("x", "y")

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class ExprSyntaxError(ParseError):
    pass


class UnknownSymbol(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "eof"
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    toks = []
    pos = 0
    raw = text.encode()
    # offsets are byte offsets into the UTF-8 encoding
    char_to_byte = {}
    b = 0
    for i, ch in enumerate(text):
        char_to_byte[i] = b
        b += len(ch.encode())
    char_to_byte[len(text)] = len(raw)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        tok_text = m.group(m.lastindex)
        if kind == "op" and tok_text not in "+-*/^(),=":
            raise ExprSyntaxError(f"unexpected character {tok_text!r}", char_to_byte[start])
        toks.append(Token(kind, tok_text, char_to_byte[start]))
        pos = m.end()
    toks.append(Token("eof", "", char_to_byte[len(text)]))
    return toks


_PRIMARY_START = {"number", "identifier", "(", "-"}


class _Parser:
    def __init__(self, text: str, symbols):
        self.toks = tokenize(text)
        self.i = 0
        self.symbols = set(symbols)
        self.open_parens: list[int] = []

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected, message=None):
        t = self.tok
        if t.kind == "eof":
            if self.open_parens:
                raise ExprSyntaxError("unexpected end of input inside '('", self.open_parens[-1], expected)
            raise ExprSyntaxError(message or "unexpected end of input", t.offset, expected)
        raise ExprSyntaxError(message or f"unexpected token {t.text!r}", t.offset, expected)

    def expect(self, text: str):
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        self.fail({text})

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse_expr(self) -> E.Expr:
        node = self.parse_term()
        while self.at_op("+", "-"):
            op = self.advance().text
            rhs = self.parse_term()
            node = E.Add((node, rhs if op == "+" else -rhs))
        return node

    def parse_term(self) -> E.Expr:
        node = self.parse_unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            rhs = self.parse_unary()
            node = node * rhs if op == "*" else node / rhs
        return node

    def parse_unary(self) -> E.Expr:
        if self.at_op("-"):
            self.advance()
            return -self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> E.Expr:
        base = self.parse_primary()
        if self.at_op("^"):
            caret = self.advance()
            ex = self.parse_unary()
            q = E.to_rf(ex)
            if not q.is_const():
                raise ExprSyntaxError("exponent must be a rational constant", caret.offset)
            return E.Pow(base, q.const_value())
        return base

    def parse_primary(self) -> E.Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return E.Num(Fraction(t.text))
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                self.open_parens.append(self.tok.offset)
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                self.open_parens.pop()
                return E.Exp(arg) if t.text == "exp" else E.Log(arg)
            if t.text not in self.symbols:
                raise UnknownSymbol(f"unknown symbol {t.text!r}", t.offset, self.symbols | set(FUNCTIONS))
            return E.Sym(t.text)
        if self.at_op("("):
            self.open_parens.append(t.offset)
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            self.open_parens.pop()
            return node
        self.fail(_PRIMARY_START)

    def finish(self):
        if self.tok.kind != "eof":
            self.fail({"+", "-", "*", "/", "^", "end of input"})


def parse_expr(text: str, symbols=ODE_SYMBOLS) -> E.Expr:
    """Parse and normalize an expression over the allowed symbol names."""
    p = _Parser(text, symbols)
    node = p.parse_expr()
    p.finish()
    return E.normalize(node)


@dataclass(frozen=True)
class Ode:
    """dy/dx = h(x, y) with the factors whose zero sets make h singular."""

    h: E.Expr
    denominators: tuple = field(default=())

    @classmethod
    def from_expr(cls, h) -> "Ode":
        h = E.normalize(E.as_expr(h))
        return cls(h, denominator_factors(h))

    def __str__(self):
        return f"dy/dx = {E.render(self.h)}"


def denominator_factors(e: E.Expr) -> tuple:
    rf = E.to_rf(e)
    factors = []
    seen = set()
    for m in rf.num.terms:
        for g, ex in m:
            if ex < 0 and isinstance(g, R.Var) and g.name not in seen:
                seen.add(g.name)
                factors.append(E.Sym(g.name))
    factors.sort(key=lambda s: R.Var(s.name).sort_key)
    if not rf.den.is_one():
        factors.append(E.from_rf(R.RatFunc(rf.den, R.ONE_POLY)))
    return tuple(factors)


def parse_ode(text: str) -> Ode:
    p = _Parser(text, ODE_SYMBOLS)
    head = [("name", "dy"), ("op", "/"), ("name", "dx"), ("op", "=")]
    for kind, txt in head:
        if p.tok.kind != kind or p.tok.text != txt:
            p.fail({txt}, f"expected {txt!r} in 'dy/dx = ...'")
        p.advance()
    node = p.parse_expr()
    p.finish()
    return Ode.from_expr(node)
