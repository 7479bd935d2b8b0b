"""Polynomials and rational maps over the coefficient field (the residue field).

Tangent maps live here: a :class:`ResidueMap` is a reduced quotient of two
:class:`KPoly` objects, acting on the residue projective line.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .coefficients import Coeff
from .errors import ExtensionRequired

INFINITY = "inf"


class KPoly:
    """Dense polynomial with :class:`Coeff` coefficients, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        cs = [x if isinstance(x, Coeff) else Coeff(x) for x in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.c = tuple(cs)

    @classmethod
    def monomial(cls, coeff, k):
        return cls([Coeff(0)] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Coeff:
        return self.c[-1]

    def __add__(self, other):
        other = _kp(other)
        n = max(len(self.c), len(other.c))
        a = self.c + (Coeff(0),) * (n - len(self.c))
        b = other.c + (Coeff(0),) * (n - len(other.c))
        return KPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return KPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-_kp(other))

    def __rsub__(self, other):
        return _kp(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Coeff)):
            return KPoly([x * other for x in self.c])
        other = _kp(other)
        if not self.c or not other.c:
            return KPoly()
        out = [Coeff(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j, y in enumerate(other.c):
                if y:
                    out[i + j] = out[i + j] + x * y
        return KPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = KPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other):
        other = _kp(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        inv = other.lead().inverse()
        q = [Coeff(0)] * max(0, len(rem) - len(other.c) + 1)
        while len(rem) >= len(other.c) and rem:
            k = len(rem) - len(other.c)
            f = rem[-1] * inv
            q[k] = f
            for j, y in enumerate(other.c):
                rem[k + j] = rem[k + j] - f * y
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return KPoly(q), KPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        return self * self.lead().inverse()

    def derivative(self):
        return KPoly([x * i for i, x in enumerate(self.c)][1:])

    def __call__(self, w):
        acc = Coeff(0)
        for x in reversed(self.c):
            acc = acc * w + x
        return acc

    def compose_linear(self, a, b):
        """p(a*w + b)."""
        out = KPoly()
        lin = KPoly([b, a])
        power = KPoly([1])
        for x in self.c:
            out = out + power * x
            power = power * lin
        return out

    def reversed(self, n=None):
        """w^n p(1/w) with n = degree by default."""
        n = self.degree if n is None else n
        cs = list(self.c) + [Coeff(0)] * (n + 1 - len(self.c))
        return KPoly(cs[::-1])

    def order_at_zero(self) -> int:
        for i, x in enumerate(self.c):
            if x:
                return i
        raise ValueError("order of the zero polynomial")

    def order_at(self, w) -> int:
        if self.is_zero():
            raise ValueError("order of the zero polynomial")
        return self.compose_linear(Coeff(1), w).order_at_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Coeff)):
            other = KPoly([other])
        return isinstance(other, KPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            x = self.c[k]
            if not x:
                continue
            mono = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
            cs = str(x)
            if len(x.terms()) > 1:
                cs = f"({cs})"
            if mono:
                if cs == "1":
                    txt = mono
                elif cs == "-1":
                    txt = "-" + mono
                else:
                    txt = f"{cs}*{mono}"
            else:
                txt = cs
            parts.append(txt)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__


def _kp(x):
    if isinstance(x, KPoly):
        return x
    return KPoly([x])


def poly_gcd(a: KPoly, b: KPoly) -> KPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p: KPoly):
    """Yun's algorithm: list of (factor, multiplicity) with p = lead * prod f^k."""
    if p.degree < 1:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    k = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g.monic(), k))
        b = b // g
        c = d // g
        k += 1
    return out


def roots(p: KPoly):
    """All roots of p in the coefficient field with multiplicities, or ``ExtensionRequired``."""
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    found = []
    for f, k in squarefree_decomposition(p):
        for r in _squarefree_roots(f):
            found.append((r, k))
    found.sort(key=lambda rk: rk[0].sort_key())
    return found


def _squarefree_roots(f: KPoly):
    f = f.monic()
    n = f.degree
    if n == 0:
        return []
    if n == 1:
        return [-f.c[0]]
    low = f.order_at_zero()
    if low:
        return [Coeff(0)] + _squarefree_roots(KPoly(f.c[low:]))
    if n == 2:
        b, c = f.c[1], f.c[0]
        disc = (b * b - c * 4).sqrt()
        half = Fraction(1, 2)
        return [(-b + disc) * half, (-b - disc) * half]
    if all(not x for x in f.c[1:-1]):
        return (-f.c[0]).all_nth_roots(n)
    return _roots_via_sympy(f)


def _to_sympy(c: Coeff):
    expr = sympy.Integer(0)
    for m, q in c.terms():
        expr += sympy.Rational(q.numerator, q.denominator) * sympy.sqrt(sympy.Integer(m))
    return expr


def _from_sympy(expr) -> Coeff:
    expr = sympy.expand(sympy.sqrtdenest(sympy.nsimplify(expr)))
    out = Coeff(0)
    for term in sympy.Add.make_args(expr):
        q = Fraction(1)
        rad = Coeff(1)
        for f in sympy.Mul.make_args(term):
            if f.is_Rational:
                q *= Fraction(int(f.p), int(f.q))
            elif f is sympy.I:
                rad = rad * Coeff.i()
            elif f.is_Pow and f.exp == sympy.Rational(1, 2) and f.base.is_Rational:
                rad = rad * Coeff.sqrt_of_rational(Fraction(int(f.base.p), int(f.base.q)))
            elif f.is_Pow and f.exp == sympy.Rational(-1, 2) and f.base.is_Rational:
                rad = rad * Coeff.sqrt_of_rational(Fraction(int(f.base.q), int(f.base.p)))
            else:
                raise ExtensionRequired(f"root {expr} is not in the quadratic closure")
        out = out + rad * q
    return out


def _roots_via_sympy(f: KPoly):
    w = sympy.Symbol("w")
    expr = sum(_to_sympy(x) * w**i for i, x in enumerate(f.c))
    try:
        found = sympy.roots(sympy.Poly(expr, w, extension=True), multiple=True)
    except (NotImplementedError, sympy.polys.polyerrors.PolynomialError) as exc:
        raise ExtensionRequired(f"cannot solve {f} by radicals here") from exc
    if len(found) != f.degree:
        raise ExtensionRequired(f"roots of {f} are not expressible over the quadratic closure")
    out = []
    for r in found:
        c = _from_sympy(r)
        if f(c):
            raise ExtensionRequired(f"root of {f} did not reconstruct exactly")
        out.append(c)
    if len(set(out)) != len(out):
        raise ExtensionRequired(f"root extraction for {f} is ambiguous")
    return out


class ResidueMap:
    """A rational map A/B over the coefficient field in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num: KPoly, den: KPoly):
        if den.is_zero():
            raise ZeroDivisionError("denominator of a residue map is zero")
        if num.is_zero():
            self.num, self.den = KPoly(), KPoly([1])
            return
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        s = den.lead().inverse()
        self.num, self.den = num * s, den * s

    @classmethod
    def linear(cls, scale) -> "ResidueMap":
        return cls(KPoly([0, scale]), KPoly([1]))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def __call__(self, w):
        if w == INFINITY:
            if self.num.degree > self.den.degree:
                return INFINITY
            if self.num.degree < self.den.degree:
                return Coeff(0)
            return self.num.lead() / self.den.lead()
        b = self.den(w)
        if not b:
            return INFINITY
        return self.num(w) / b

    def multiplicity(self, w) -> int:
        """Ramification index at w (a coefficient or ``INFINITY``)."""
        if self.degree == 0:
            raise ValueError("constant map has no multiplicity")
        if w == INFINITY:
            return self._inverted_source().multiplicity(Coeff(0))
        y = self(w)
        if y == INFINITY:
            return self.den.order_at(w)
        return (self.num - self.den * y).order_at(w)

    def _inverted_source(self) -> "ResidueMap":
        d = self.degree
        return ResidueMap(self.num.reversed(d), self.den.reversed(d))

    def compose(self, inner: "ResidueMap") -> "ResidueMap":
        """self o inner."""
        d = self.degree
        a, b = inner.num, inner.den
        num, den = KPoly(), KPoly()
        for k in range(d + 1):
            piece = (a ** k) * (b ** (d - k))
            if k < len(self.num.c):
                num = num + piece * self.num.c[k]
            if k < len(self.den.c):
                den = den + piece * self.den.c[k]
        return ResidueMap(num, den)

    def wronskian(self) -> KPoly:
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def ramification_profile(self):
        """Multiset of ramification indices > 1, without locating the points.

        Returns a list of (index, number of points); works over any extension
        because it only needs the squarefree decomposition of the Wronskian.
        """
        d = self.degree
        if d <= 1:
            return []
        w = self.wronskian()
        profile = {}
        for f, k in squarefree_decomposition(w):
            profile[k + 1] = profile.get(k + 1, 0) + f.degree
        at_inf = 2 * d - 2 - max(w.degree, 0)
        if at_inf > 0:
            profile[at_inf + 1] = profile.get(at_inf + 1, 0) + 1
        return sorted(profile.items())

    def __eq__(self, other):
        if not isinstance(other, ResidueMap):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den == KPoly([1]):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__
