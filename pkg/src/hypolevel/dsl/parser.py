"""Recursive-descent parser for map expressions.

Grammar::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("-" | "+") unary | power
    power    := atom ("^" ["-"] INTEGER)?
    atom     := NUMBER | IMAG | "z" | "id" | call | "(" expr ")"
    call     := "blaschke" "(" const ";" const ("," const)* ")"
              | "aut" "(" const "," const ")"
              | "compose" "(" expr "," expr ")"
    NUMBER   := digits ["." digits] [("e"|"E") ["+"|"-"] digits]
    IMAG     := NUMBER "i"

``const`` is any expression free of ``z``.  A real literal followed by
``+``/``-`` and an imaginary literal (``0.3-0.2i``) is read as one complex
constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from hypolevel.dsl.ast import (
    Aut,
    BinOp,
    Blaschke,
    Compose,
    Const,
    Identity,
    MapExpr,
    Neg,
    Pow,
    Var,
    walk,
)


class ParseError(ValueError):
    """Base class for expression errors; carries position information."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        self.offset = len(text[:pos].encode("utf-8"))
        before = text[:pos]
        self.line = before.count("\n") + 1
        self.column = pos - (before.rfind("\n") + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")
        self.message = message


class MapSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass


class ArityError(ParseError):
    pass


class DomainError(ParseError):
    pass


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN_RE = re.compile(
    rf"(?P<ws>\s+)|(?P<imag>{_NUM}i(?![A-Za-z0-9_]))|(?P<num>{_NUM})"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),;])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise MapSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise MapSyntaxError(f"expected {text!r}, found {found!r}", self.text, self.tok.pos)
        return self.advance()

    def parse(self) -> MapExpr:
        node, _ = self.expr()
        if self.tok.kind != "eof":
            raise MapSyntaxError(f"unexpected {self.tok.text!r}", self.text, self.tok.pos)
        return node

    # each rule returns (node, bare); bare is "re" or "im" for an unparenthesized literal

    def expr(self):
        left, bare = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            right, rbare = self.term()
            if bare == "re" and rbare == "im":
                im = right.value.imag if op == "+" else -right.value.imag
                left, bare = Const(complex(left.value.real, im)), False
                continue
            left, bare = BinOp(op, left, right), False
        return left, bare

    def term(self):
        left, bare = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            right, _ = self.unary()
            left, bare = BinOp(op, left, right), False
        return left, bare

    def unary(self):
        if self.tok.text == "-":
            self.advance()
            node, bare = self.unary()
            if bare and isinstance(node, Const):
                return Const(-node.value), bare
            return Neg(node), False
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        node, bare = self.atom()
        if self.tok.text == "^":
            self.advance()
            sign = 1
            if self.tok.text == "-":
                self.advance()
                sign = -1
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                raise MapSyntaxError("exponent must be an integer literal", self.text, t.pos)
            self.advance()
            return Pow(node, sign * int(t.text)), False
        return node, bare

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Const(float(t.text)), "re"
        if t.kind == "imag":
            self.advance()
            return Const(complex(0.0, float(t.text[:-1]))), "im"
        if t.text == "(":
            self.advance()
            node, _ = self.expr()
            self.expect(")")
            return node, False
        if t.kind == "ident":
            self.advance()
            if t.text == "z":
                return Var(), False
            if t.text == "id":
                return Identity(), False
            if t.text in ("blaschke", "aut", "compose"):
                return getattr(self, "call_" + t.text)(t), False
            raise UnknownIdentifier(f"unknown identifier {t.text!r}", self.text, t.pos)
        found = t.text or "end of input"
        raise MapSyntaxError(f"unexpected {found!r}", self.text, t.pos)

    def _args(self, name: Token, seps: str):
        """Read ``( e1 s e2 s ... )``; returns the list of (node, pos, sep-before)."""
        self.expect("(")
        args = []
        sep = None
        if self.tok.text == ")":
            self.advance()
            return args
        while True:
            pos = self.tok.pos
            node, _ = self.expr()
            args.append((node, pos, sep))
            if self.tok.text in seps:
                sep = self.advance().text
                continue
            if self.tok.text == ")":
                self.advance()
                return args
            found = self.tok.text or "end of input"
            raise MapSyntaxError(f"expected ',' or ')' in {name.text}(...), found {found!r}",
                                 self.text, self.tok.pos)

    def _const(self, node: MapExpr, pos: int) -> complex:
        if any(isinstance(n, (Var, Identity)) for n in walk(node)):
            raise MapSyntaxError("built-in parameters must be constants", self.text, pos)
        try:
            return complex(node(0j))
        except ArithmeticError as exc:
            raise DomainError(f"cannot evaluate parameter: {exc}", self.text, pos) from exc

    def _real(self, node, pos) -> float:
        v = self._const(node, pos)
        if v.imag != 0:
            raise DomainError("angle must be real", self.text, pos)
        return v.real

    def _inside(self, node, pos) -> complex:
        v = self._const(node, pos)
        if not abs(v) < 1:
            raise DomainError(f"parameter {v} is not inside the unit disk", self.text, pos)
        return v

    def call_blaschke(self, name):
        args = self._args(name, ",;")
        if len(args) < 2 or args[1][2] != ";" or any(s == ";" for _, _, s in args[2:]):
            raise ArityError("blaschke expects (theta; a1, ..., an) with n >= 1",
                             self.text, name.pos)
        theta = self._real(*args[0][:2])
        zeros = tuple(self._inside(n, p) for n, p, _ in args[1:])
        return Blaschke(theta, zeros)

    def call_aut(self, name):
        args = self._args(name, ",")
        if len(args) != 2:
            raise ArityError("aut expects (a, theta)", self.text, name.pos)
        return Aut(self._inside(*args[0][:2]), self._real(*args[1][:2]))

    def call_compose(self, name):
        args = self._args(name, ",")
        if len(args) != 2:
            raise ArityError("compose expects (f, g)", self.text, name.pos)
        return Compose(args[0][0], args[1][0])


def parse(text: str) -> MapExpr:
    """Parse a map expression such as ``"compose(blaschke(0; 0.3, -0.2i), z^2)"``."""
    return _Parser(text).parse()
