"""Integer arithmetic formulas over named variables, e.g. ``2*L+1``.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := INT | NAME | "(" expr ")"
"""

from __future__ import annotations

import re
from typing import Mapping

from ..errors import ParseError, UnboundVariableError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def tokenize(expr: str) -> list[str]:
    tokens = []
    for number, name, other in _TOKEN.findall(expr):
        if number or name:
            tokens.append(number or name)
        elif other.strip():
            if other not in "+-*()":
                raise ParseError(f"unexpected character {other!r} in {expr!r}")
            tokens.append(other)
    return tokens


class _Parser:
    def __init__(self, expr: str, env: Mapping[str, int] | None):
        self.expr = expr
        self.tokens = tokenize(expr)
        self.pos = 0
        self.env = env
        self.names: set[str] = set()

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of formula {self.expr!r}")
        self.pos += 1
        return tok

    def parse(self) -> int:
        value = self.expr_()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r} in {self.expr!r}")
        return value

    def expr_(self) -> int:
        value = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                value += self.term()
            else:
                value -= self.term()
        return value

    def term(self) -> int:
        value = self.factor()
        while self.peek() == "*":
            self.take()
            value *= self.factor()
        return value

    def factor(self) -> int:
        tok = self.take()
        if tok == "(":
            value = self.expr_()
            if self.take() != ")":
                raise ParseError(f"missing ')' in {self.expr!r}")
            return value
        if tok.isdigit():
            return int(tok)
        if tok[0].isalpha() or tok[0] == "_":
            self.names.add(tok)
            if self.env is None:
                return 0
            try:
                return int(self.env[tok])
            except KeyError:
                raise UnboundVariableError(f"variable {tok!r} is not bound") from None
        raise ParseError(f"unexpected {tok!r} in {self.expr!r}")


def eval_formula(expr: str, env: Mapping[str, int]) -> int:
    """Evaluate ``expr`` with variables looked up in ``env``."""
    return _Parser(expr, env).parse()


def formula_variables(expr: str) -> set[str]:
    parser = _Parser(expr, None)
    parser.parse()
    return parser.names
