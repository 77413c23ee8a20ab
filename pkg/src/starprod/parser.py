"""Tokenizer, AST and recursive-descent parser for the expression language.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '*C' | '*M3' | '*M4' | '*MC') factor)*
    factor := atom | '-' factor | atom '^' nat
    atom   := rational | 'i' | 'hb' | var | blade | call | '(' expr ')'
    call   := name '(' ... ')'        # comm/acomm take 'kind; a, b'

Precedence: '^' binds tighter than unary minus, products are left-associative
at one level, additive operators bind loosest.  Blade literals are ascending
concatenations ('g0g1g2g3'); any other generator order is a parse error, so a
sign can never appear silently.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ParseError

STAR_OPS = ("*C", "*M3", "*M4", "*MC", "*")
VAR_NAMES = frozenset(
    ["q0", "q1", "q2", "q3", "p0", "p1", "p2", "p3", "s"]
)
FUNCTION_NAMES = frozenset(["grade", "exp", "split", "eigencheck", "comm", "acomm", "pb"])
KIND_NAMES = frozenset(["C", "M3", "M4", "MC"])

_BLADE_RE = _re.compile(r"^(g[0-3])+$")


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER | NAME | OP | EOF
    text: str
    line: int
    column: int
    value: Fraction | None = None


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 0
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 0
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "/" and j + 1 < n and source[j + 1].isdigit():
                k = j + 1
                while k < n and source[k].isdigit():
                    k += 1
                text = source[i:k]
                tokens.append(Token("NUMBER", text, line, start_col, Fraction(text)))
                col += k - i
                i = k
            else:
                text = source[i:j]
                tokens.append(Token("NUMBER", text, line, start_col, Fraction(text)))
                col += j - i
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("NAME", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch == "*":
            matched = "*"
            for op in ("*MC", "*M3", "*M4", "*C"):
                if source.startswith(op, i):
                    matched = op
                    break
            tokens.append(Token("OP", matched, line, start_col))
            i += len(matched)
            col += len(matched)
            continue
        if ch in "+-^(),;":
            tokens.append(Token("OP", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class ImagUnit:
    pass


@dataclass(frozen=True)
class HbarSym:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BladeLit:
    indices: tuple[int, ...]


@dataclass(frozen=True)
class Neg:
    inner: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*', '*C', '*M3', '*M4', '*MC'
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Bracket:
    """comm / acomm with a product kind tag, or the Poisson bracket."""

    form: str  # 'comm' | 'acomm' | 'pb'
    kind: str | None
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str  # 'grade' | 'exp' | 'split' | 'eigencheck'
    args: tuple["Expr", ...]


Expr = Union[Num, ImagUnit, HbarSym, Var, BladeLit, Neg, Pow, BinOp, Bracket, Call]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == text:
            return self.advance()
        raise ParseError(f"got {tok.text or 'end of input'!r}", tok.line, tok.column, (text,))

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "OP" and self.peek().text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while self.peek().kind == "OP" and self.peek().text in STAR_OPS:
            op = self.advance().text
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.advance()
            return Neg(self.parse_factor())
        atom = self.parse_atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.advance()
            exp_tok = self.peek()
            if exp_tok.kind != "NUMBER" or exp_tok.value.denominator != 1 or exp_tok.value < 0:
                raise ParseError(
                    "exponent must be a natural number", exp_tok.line, exp_tok.column, ("nat",)
                )
            self.advance()
            return Pow(atom, int(exp_tok.value))
        return atom

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Num(tok.value)
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "NAME":
            self.advance()
            name = tok.text
            if name == "i":
                return ImagUnit()
            if name == "hb":
                return HbarSym()
            if name in VAR_NAMES:
                return Var(name)
            if _BLADE_RE.match(name):
                indices = tuple(int(c) for c in name[1::2])
                if list(indices) != sorted(set(indices)):
                    raise ParseError(
                        f"blade {name!r} is not in ascending canonical order",
                        tok.line,
                        tok.column,
                    )
                return BladeLit(indices)
            if name in ("comm", "acomm"):
                self.expect("(")
                kind_tok = self.peek()
                if kind_tok.kind != "NAME" or kind_tok.text not in KIND_NAMES:
                    raise ParseError(
                        "bracket needs a product kind", kind_tok.line, kind_tok.column,
                        tuple(sorted(KIND_NAMES)),
                    )
                self.advance()
                self.expect(";")
                left = self.parse_expr()
                self.expect(",")
                right = self.parse_expr()
                self.expect(")")
                return Bracket(name, kind_tok.text, left, right)
            if name == "pb":
                self.expect("(")
                left = self.parse_expr()
                self.expect(",")
                right = self.parse_expr()
                self.expect(")")
                return Bracket("pb", None, left, right)
            if name in FUNCTION_NAMES:
                self.expect("(")
                args = [self.parse_expr()]
                while self.peek().kind == "OP" and self.peek().text == ",":
                    self.advance()
                    args.append(self.parse_expr())
                self.expect(")")
                return Call(name, tuple(args))
            raise ParseError(f"unknown name {name!r}", tok.line, tok.column)
        raise ParseError(
            f"got {tok.text or 'end of input'!r}", tok.line, tok.column,
            ("number", "name", "("),
        )


def parse(source: str) -> Expr:
    parser = _Parser(tokenize(source))
    node = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "EOF":
        raise ParseError(f"trailing input {tail.text!r}", tail.line, tail.column)
    return node
