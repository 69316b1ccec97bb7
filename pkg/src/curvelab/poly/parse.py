"""Text grammar for integer polynomials in ``x`` and ``y``.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' integer)?
    atom   := integer | 'x' | 'y' | '(' expr ')'

Juxtaposition such as ``2x`` or ``x y`` is rejected: every product needs ``*``.
"""

from __future__ import annotations

from .exact import IntPoly2

__all__ = ["PolySyntaxError", "parse_poly", "format_poly"]


class PolySyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.message = message


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, msg: str):
        raise PolySyntaxError(msg, self.pos)

    def parse(self) -> IntPoly2:
        if not self.peek():
            self.fail("empty polynomial")
        p = self.expr()
        if self.peek():
            ch = self.peek()
            if ch.isalnum() or ch == "(":
                self.fail("implicit multiplication is not allowed")
            self.fail(f"unexpected {ch!r}")
        return p

    def expr(self) -> IntPoly2:
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> IntPoly2:
        p = self.unary()
        while self.peek() == "*":
            self.pos += 1
            p = p * self.unary()
        return p

    def unary(self) -> IntPoly2:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.unary()
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def integer(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected integer")
        return int(self.text[start:self.pos])

    def power(self) -> IntPoly2:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            if not self.peek().isdigit():
                self.fail("expected exponent")
            base = base ** self.integer()
        return base

    def atom(self) -> IntPoly2:
        ch = self.peek()
        if ch.isdigit():
            return IntPoly2.const(self.integer())
        if ch == "x":
            self.pos += 1
            return IntPoly2.x()
        if ch == "y":
            self.pos += 1
            return IntPoly2.y()
        if ch == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return p
        if not ch:
            self.fail("unexpected end of input")
        self.fail(f"unexpected {ch!r}")


def parse_poly(text: str) -> IntPoly2:
    """Parse ``text`` into an :class:`IntPoly2`.

    >>> str(parse_poly("3*x^2*y - 7*y + 1"))
    '3*x^2*y - 7*y + 1'
    """
    return _Parser(text).parse()


def _mono(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def format_poly(terms: dict) -> str:
    """Canonical text: graded-lex descending, i.e. total degree then x-degree."""
    keys = sorted(terms, key=lambda k: (k[0] + k[1], k[0]), reverse=True)
    if not keys:
        return "0"
    out = []
    for n, (i, j) in enumerate(keys):
        c = terms[(i, j)]
        mono = _mono(i, j)
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if n == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
