"""Recursive-descent parser for coefficients, Puiseux series and polynomials in z.

Accepted syntax: numbers ``3``, ``3/4``; the constants ``i`` and ``sqrt(n)``;
the variables ``t`` and ``z``; ``+ - * /``, implicit multiplication,
integer powers ``x^k`` and rational powers of t such as ``t^(-1/2)``; and
the precision marker ``O(t^e)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .coefficients import Coeff
from .errors import SpecSyntaxError
from .polynomial import PolyOverK
from .puiseux import PuiseuxNumber

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\S))")


class _Tokens:
    def __init__(self, text, line, column):
        self.items = []
        self.line = line
        self.column = column
        self.text = text
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            start = m.start(m.lastindex)
            kind = ("num", "name", "op")[m.lastindex - 1]
            self.items.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise SpecSyntaxError(message, self.line, self.column + tok[2])

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            self.error(f"expected '{value}', found '{tok[1] or 'end of input'}'", tok)
        return tok


def _const(c):
    return PolyOverK([PuiseuxNumber.constant(c)])


def _parse_expr(tk):
    tok = tk.peek()
    neg = False
    if tok[1] in "+-" and tok[0] == "op":
        tk.take()
        neg = tok[1] == "-"
    value = _parse_term(tk)
    if neg:
        value = -value
    while tk.peek()[0] == "op" and tk.peek()[1] in "+-":
        op = tk.take()[1]
        rhs = _parse_term(tk)
        value = value + rhs if op == "+" else value - rhs
    return value


def _starts_primary(tok):
    return tok[0] in ("num", "name") or tok[1] == "("


def _parse_term(tk):
    value = _parse_unary(tk)
    while True:
        tok = tk.peek()
        if tok[0] == "op" and tok[1] == "*":
            tk.take()
            value = value * _parse_unary(tk)
        elif tok[0] == "op" and tok[1] == "/":
            tk.take()
            divisor = _parse_unary(tk)
            value = _divide(tk, value, divisor, tok)
        elif _starts_primary(tok):
            value = value * _parse_unary(tk)
        else:
            return value


def _divide(tk, value, divisor, tok):
    if divisor.degree > 0:
        tk.error("division by a polynomial in z is not supported", tok)
    if divisor.is_zero():
        tk.error("division by zero", tok)
    d = divisor.c[0]
    return PolyOverK([x / d for x in value.c])


def _parse_unary(tk):
    tok = tk.peek()
    if tok[0] == "op" and tok[1] == "-":
        tk.take()
        return -_parse_unary(tk)
    return _parse_power(tk)


def _parse_rational(tk, allow_paren=True):
    tok = tk.peek()
    if allow_paren and tok[1] == "(":
        tk.take()
        value = _parse_rational(tk, allow_paren=False)
        tk.expect(")")
        return value
    sign = 1
    if tok[0] == "op" and tok[1] in "+-":
        tk.take()
        sign = -1 if tok[1] == "-" else 1
    num = tk.take()
    if num[0] != "num":
        tk.error("expected an integer", num)
    value = Fraction(int(num[1]))
    if not allow_paren and tk.peek()[1] == "/":
        tk.take()
        den = tk.take()
        if den[0] != "num" or int(den[1]) == 0:
            tk.error("expected a nonzero integer denominator", den)
        value /= int(den[1])
    return sign * value


def _parse_power(tk):
    base = _parse_primary(tk)
    if tk.peek()[1] != "^":
        return base
    caret = tk.take()
    exp = _parse_rational(tk)
    if exp.denominator == 1 and exp >= 0:
        return base ** int(exp)
    if base.degree == 0 and base.c and base.c[0].is_monomial() and base.c[0].terms[0][1] == 1:
        e = base.c[0].terms[0][0]
        return PolyOverK([PuiseuxNumber.t_power(e * exp)])
    if exp.denominator == 1 and base.degree == 0 and not base.is_zero():
        return PolyOverK([base.c[0].inverse() ** int(-exp)])
    tk.error("only powers of t may have rational or negative exponents", caret)


def _parse_primary(tk):
    tok = tk.take()
    kind, text, _ = tok
    if kind == "num":
        return _const(int(text))
    if text == "(":
        value = _parse_expr(tk)
        tk.expect(")")
        return value
    if kind == "name":
        if text == "t":
            return PolyOverK([PuiseuxNumber.t_power(1)])
        if text == "z":
            return PolyOverK.z()
        if text == "i":
            return _const(Coeff.i())
        if text == "sqrt":
            tk.expect("(")
            r = _parse_rational(tk, allow_paren=False)
            tk.expect(")")
            return _const(Coeff.sqrt_of_rational(r))
        if text == "O":
            tk.expect("(")
            inner = _parse_expr(tk)
            tk.expect(")")
            if inner.degree != 0 or not inner.c[0].is_monomial() or inner.c[0].terms[0][1] != 1:
                tk.error("O(...) must enclose a power of t", tok)
            return PolyOverK([PuiseuxNumber.big_o(inner.c[0].terms[0][0])])
        tk.error(f"unknown name '{text}'", tok)
    tk.error(f"unexpected '{text or 'end of input'}'", tok)


def parse_polynomial(text: str, line: int = 1, column: int = 1) -> PolyOverK:
    tk = _Tokens(text, line, column)
    if not tk.items:
        tk.error("empty expression")
    value = _parse_expr(tk)
    if tk.peek()[0] != "end":
        tk.error(f"unexpected '{tk.peek()[1]}'")
    return value


def parse_puiseux(text: str, line: int = 1, column: int = 1) -> PuiseuxNumber:
    value = parse_polynomial(text, line, column)
    if value.degree > 0:
        raise SpecSyntaxError("a Puiseux series may not involve z", line, column)
    return value.c[0] if value.c else PuiseuxNumber()


def parse_coefficient(text: str, line: int = 1, column: int = 1) -> Coeff:
    x = parse_puiseux(text, line, column)
    if not x.is_constant():
        raise SpecSyntaxError("a coefficient may not involve t", line, column)
    return x.constant_value()


def parse_rational(text: str, line: int = 1, column: int = 1) -> Fraction:
    c = parse_coefficient(text, line, column)
    if not c.is_rational():
        raise SpecSyntaxError("expected a rational number", line, column)
    return c.to_fraction()
