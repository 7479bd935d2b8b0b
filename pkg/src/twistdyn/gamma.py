"""Ordered value group Q + Q*alpha with alpha = sqrt(m) for a non-square m.

Rational values are kept as plain ``Fraction`` objects; a ``GammaElem`` only
appears when the irrational part is nonzero, which is exactly the type III
case.  ``INF`` is the valuation of zero and the log-radius of a classical point.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

_ALPHA_SQUARED = 2


def set_alpha_squared(m: int) -> None:
    """Choose alpha = sqrt(m); m must be a positive non-square integer."""
    global _ALPHA_SQUARED
    m = int(m)
    if m <= 1 or isqrt(m) ** 2 == m:
        raise ValueError("alpha must be the square root of a positive non-square integer")
    _ALPHA_SQUARED = m


def alpha_squared() -> int:
    return _ALPHA_SQUARED


def _sign_of(q: Fraction, r: Fraction) -> int:
    # sign of q + r*sqrt(m), decided with rationals only
    sq = (q > 0) - (q < 0)
    sr = (r > 0) - (r < 0)
    if sr == 0:
        return sq
    if sq == 0 or sq == sr:
        return sr
    diff = q * q - r * r * _ALPHA_SQUARED
    return sq if diff > 0 else sr


class _Infinity:
    """Greatest element; absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("twistdyn-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf")
        return self

    def __mul__(self, other):
        if other > 0:
            return self
        raise ArithmeticError("inf times a non-positive scalar")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.__mul__(1 / Fraction(other))

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class GammaElem:
    """q + r*alpha with r != 0 (use :func:`gamma` to build values)."""

    __slots__ = ("q", "r")

    def __init__(self, q, r):
        self.q = Fraction(q)
        self.r = Fraction(r)

    @staticmethod
    def parts(x):
        if isinstance(x, GammaElem):
            return x.q, x.r
        return Fraction(x), Fraction(0)

    def _cmp(self, other):
        if other is INF:
            return -1
        try:
            q, r = GammaElem.parts(other)
        except (TypeError, ValueError):
            return NotImplemented
        return _sign_of(self.q - q, self.r - r)

    def __eq__(self, other):
        if not isinstance(other, (GammaElem, Fraction, int)):
            return NotImplemented
        c = self._cmp(other)
        return c == 0

    def __hash__(self):
        return hash((self.q, self.r))

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __add__(self, other):
        if other is INF:
            return INF
        q, r = GammaElem.parts(other)
        return gamma(self.q + q, self.r + r)

    __radd__ = __add__

    def __neg__(self):
        return GammaElem(-self.q, -self.r)

    def __sub__(self, other):
        q, r = GammaElem.parts(other)
        return gamma(self.q - q, self.r - r)

    def __rsub__(self, other):
        q, r = GammaElem.parts(other)
        return gamma(q - self.q, r - self.r)

    def __mul__(self, k):
        if isinstance(k, GammaElem):
            raise TypeError("products of value-group elements are not in the group")
        k = Fraction(k)
        return gamma(self.q * k, self.r * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, GammaElem):
            raise TypeError("quotients of value-group elements are not in the group")
        k = Fraction(k)
        return gamma(self.q / k, self.r / k)

    def __repr__(self):
        return f"GammaElem({self.q}, {self.r})"

    def __str__(self):
        return format_gamma(self)


def gamma(q, r=0):
    """Build q + r*alpha, collapsing to ``Fraction`` when r == 0."""
    r = Fraction(r)
    if r == 0:
        return Fraction(q)
    return GammaElem(q, r)


def is_rational(x) -> bool:
    return not isinstance(x, GammaElem) and x is not INF


def rational_part(x) -> Fraction:
    return GammaElem.parts(x)[0]


def irrational_part(x) -> Fraction:
    return GammaElem.parts(x)[1]


def format_gamma(x) -> str:
    """Text form used by the point syntax: ``q`` or ``q + ra``."""
    if x is INF:
        return "inf"
    q, r = GammaElem.parts(x)
    if r == 0:
        return str(q)
    mag = "a" if abs(r) == 1 else f"{abs(r)}a"
    if q == 0:
        return mag if r > 0 else "-" + mag
    sign = "+" if r > 0 else "-"
    return f"{q} {sign} {mag}"


def parse_gamma(text: str):
    """Inverse of :func:`format_gamma`."""
    s = text.replace(" ", "")
    if s in ("inf", "+inf"):
        return INF
    if not s.endswith("a"):
        return Fraction(s)
    body = s[:-1]
    # split at the last sign that is not the leading one
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] not in "/":
            q = Fraction(body[:i])
            rtxt = body[i:]
            break
    else:
        q = Fraction(0)
        rtxt = body
    if rtxt in ("+", "-", ""):
        rtxt += "1"
    return gamma(q, Fraction(rtxt))
