"""Truncated Puiseux series with exact coefficients, and the twist automorphisms.

A :class:`PuiseuxNumber` is ``sum c_e t^e + O(t^prec)``; ``prec=None`` marks an
exact (terminating) series.  Precision is propagated conservatively through
every operation, and any decision that depends on hidden digits raises
``PrecisionLoss``.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor

from sympy import factorint

from .coefficients import Coeff, roots_of_unity
from .errors import ExtensionRequired, PrecisionLoss
from .gamma import INF

_RELATIVE_PRECISION = Fraction(24)


def set_relative_precision(p) -> None:
    """Number of valuation units kept beyond the leading term on inexact division."""
    global _RELATIVE_PRECISION
    p = Fraction(p)
    if p <= 0:
        raise ValueError("relative precision must be positive")
    _RELATIVE_PRECISION = p


def relative_precision() -> Fraction:
    return _RELATIVE_PRECISION


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _as_coeff(c) -> Coeff:
    return c if isinstance(c, Coeff) else Coeff(c)


class PuiseuxNumber:
    __slots__ = ("_terms", "_prec", "_hash")

    def __init__(self, terms=(), prec=None):
        prec = None if prec is None else Fraction(prec)
        parts = {}
        for e, c in terms:
            if type(e) is not Fraction:
                e = Fraction(e)
            parts.setdefault(e, []).append(c)
        items = []
        for e, cs in parts.items():
            c = _as_coeff(cs[0]) if len(cs) == 1 else Coeff._make([t for x in cs for t in _as_coeff(x).terms()])
            if c:
                items.append((e, c))
        items.sort(key=lambda ec: ec[0])
        if prec is not None:
            items = [(e, c) for e, c in items if e < prec]
        self._terms = tuple(items)
        self._prec = prec
        self._hash = None

    @classmethod
    def _raw(cls, terms, prec):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._prec = prec
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "PuiseuxNumber":
        c = _as_coeff(c)
        return cls._raw(((Fraction(0), c),) if c else (), None)

    @classmethod
    def monomial(cls, c, e) -> "PuiseuxNumber":
        c = _as_coeff(c)
        return cls._raw(((Fraction(e), c),) if c else (), None)

    @classmethod
    def t_power(cls, e) -> "PuiseuxNumber":
        return cls.monomial(1, e)

    @classmethod
    def big_o(cls, e) -> "PuiseuxNumber":
        """The unknown quantity O(t^e)."""
        return cls._raw((), Fraction(e))

    @classmethod
    def parse(cls, text: str) -> "PuiseuxNumber":
        from .parsing import parse_puiseux

        return parse_puiseux(text)

    @staticmethod
    def coerce(x) -> "PuiseuxNumber":
        if isinstance(x, PuiseuxNumber):
            return x
        if isinstance(x, (int, Fraction, Coeff)):
            return PuiseuxNumber.constant(x)
        raise TypeError(f"cannot use {type(x).__name__} as a Puiseux series")

    # -- inspection --------------------------------------------------------
    @property
    def terms(self):
        return self._terms

    @property
    def prec(self):
        return self._prec

    @property
    def is_exact(self) -> bool:
        return self._prec is None

    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return not self._terms and self._prec is None

    def has_terms(self) -> bool:
        return bool(self._terms)

    def valuation(self):
        if self._terms:
            return self._terms[0][0]
        if self._prec is None:
            return INF
        raise PrecisionLoss(f"valuation of O(t^{self._prec}) is undetermined")

    def valuation_lower_bound(self):
        """Least possible valuation: the leading exponent, or the precision when no term is known."""
        if self._terms:
            return self._terms[0][0]
        return INF if self._prec is None else self._prec

    def leading_coefficient(self) -> Coeff:
        if not self._terms:
            self.valuation()
            raise ZeroDivisionError("zero has no leading coefficient")
        return self._terms[0][1]

    def coefficient(self, e) -> Coeff:
        e = Fraction(e)
        if self._prec is not None and e >= self._prec:
            raise PrecisionLoss(f"coefficient of t^{e} lies beyond O(t^{self._prec})")
        for ex, c in self._terms:
            if ex == e:
                return c
        return Coeff(0)

    def is_constant(self) -> bool:
        return self.is_exact and all(e == 0 for e, _ in self._terms)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms[0][1] if self._terms else Coeff(0)

    def is_monomial(self) -> bool:
        return self.is_exact and len(self._terms) == 1

    def exponent_denominator(self) -> int:
        den = 1
        for e, _ in self._terms:
            den = den * e.denominator // _gcd(den, e.denominator)
        return den

    # -- truncations -------------------------------------------------------
    def truncate(self, e) -> "PuiseuxNumber":
        """Forget everything from t^e on."""
        e = Fraction(e)
        prec = _min_prec(self._prec, e)
        return PuiseuxNumber._raw(tuple(tm for tm in self._terms if tm[0] < prec), prec)

    def below(self, v) -> "PuiseuxNumber":
        """The exact series of terms with exponent < v (used as a canonical disk center)."""
        if v is INF:
            if self._prec is not None:
                raise PrecisionLoss("an inexact series cannot be an exact point")
            return self
        if self._prec is not None and self._prec < v:
            raise PrecisionLoss(f"center known only to O(t^{self._prec}), radius needs t^{v}")
        return PuiseuxNumber._raw(tuple(tm for tm in self._terms if tm[0] < v), None)

    def shift(self, e) -> "PuiseuxNumber":
        """Multiply by t^e."""
        e = Fraction(e)
        prec = None if self._prec is None else self._prec + e
        return PuiseuxNumber._raw(tuple((x + e, c) for x, c in self._terms), prec)

    def map_coefficients(self, fn) -> "PuiseuxNumber":
        return PuiseuxNumber([(e, fn(c)) for e, c in self._terms], self._prec)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            other = PuiseuxNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return PuiseuxNumber(self._terms + other._terms, _min_prec(self._prec, other._prec))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxNumber._raw(tuple((e, -c) for e, c in self._terms), self._prec)

    def __sub__(self, other):
        try:
            other = PuiseuxNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Coeff)):
            c = _as_coeff(other)
            if not c:
                return PuiseuxNumber()
            return PuiseuxNumber._raw(tuple((e, x * c) for e, x in self._terms), self._prec)
        if not isinstance(other, PuiseuxNumber):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PuiseuxNumber()
        va, vb = self.valuation_lower_bound(), other.valuation_lower_bound()
        prec = None
        if self._prec is not None:
            prec = self._prec + vb
        if other._prec is not None:
            prec = _min_prec(prec, other._prec + va)
        acc = {}
        for ea, ca in self._terms:
            for eb, cb in other._terms:
                e = ea + eb
                if prec is not None and e >= prec:
                    continue
                acc.setdefault(e, []).extend(ca._product_items(cb))
        items = []
        for e in sorted(acc):
            c = Coeff._make(acc[e])
            if c:
                items.append((e, c))
        return PuiseuxNumber._raw(tuple(items), prec)

    __rmul__ = __mul__

    def inverse(self, prec=None) -> "PuiseuxNumber":
        return PuiseuxNumber.constant(1).divide(self, prec)

    def divide(self, other, prec=None) -> "PuiseuxNumber":
        """self / other, known to O(t^prec) (default: relative precision past the quotient's valuation)."""
        other = PuiseuxNumber.coerce(other)
        if not other._terms:
            if other._prec is None:
                raise ZeroDivisionError("division by exact zero")
            raise PrecisionLoss("division by O(t^e)")
        e0 = other._terms[0][0]
        c0 = other._terms[0][1]
        if self.is_zero():
            return PuiseuxNumber()
        if other.is_monomial():
            inv = c0.inverse()
            out = PuiseuxNumber._raw(tuple((e - e0, c * inv) for e, c in self._terms),
                                     None if self._prec is None else self._prec - e0)
            return out if prec is None else out.truncate(prec)
        vx = self.valuation_lower_bound()
        target = None
        if self._prec is not None:
            target = self._prec - e0
        if other._prec is not None:
            target = _min_prec(target, other._prec + vx - 2 * e0)
        if prec is not None:
            target = _min_prec(target, Fraction(prec))
        if target is None:
            target = vx - e0 + _RELATIVE_PRECISION
        inv0 = c0.inverse()
        quotient = []
        remainder = self.truncate(target + e0)
        guard = 0
        while remainder._terms and remainder._terms[0][0] - e0 < target:
            e, c = remainder._terms[0]
            q = (e - e0, c * inv0)
            quotient.append(q)
            step = PuiseuxNumber._raw(tuple((x + q[0], y * q[1]) for x, y in other._terms), None)
            remainder = (remainder - step).truncate(target + e0)
            guard += 1
            if guard > 100000:
                raise PrecisionLoss("series division did not converge")
        return PuiseuxNumber(quotient, target)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Coeff)):
            return self * _as_coeff(other).inverse()
        if not isinstance(other, PuiseuxNumber):
            return NotImplemented
        return self.divide(other)

    def __rtruediv__(self, other):
        return PuiseuxNumber.coerce(other).divide(self)

    def exact_div(self, other) -> "PuiseuxNumber":
        """Division known in advance to be exact (fraction-free elimination)."""
        other = PuiseuxNumber.coerce(other)
        if not (self.is_exact and other.is_exact) or other.is_monomial():
            return self.divide(other)
        if not other._terms:
            raise ZeroDivisionError("division by exact zero")
        e0, c0 = other._terms[0]
        inv0 = c0.inverse()
        remainder = self
        quotient = []
        budget = 4 * (len(self._terms) + 1) * (len(other._terms) + 1)
        while remainder._terms:
            if len(quotient) > budget:
                return self.divide(other)
            e, c = remainder._terms[0]
            q = (e - e0, c * inv0)
            quotient.append(q)
            remainder = remainder - PuiseuxNumber._raw(tuple((x + q[0], y * q[1]) for x, y in other._terms), None)
        return PuiseuxNumber(quotient, None)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers")
        if n < 0:
            return self.inverse() ** (-n)
        result = PuiseuxNumber.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Coeff)):
            other = PuiseuxNumber.constant(other)
        if not isinstance(other, PuiseuxNumber):
            return NotImplemented
        return self._terms == other._terms and self._prec == other._prec

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._terms, self._prec))
        return self._hash

    def sort_key(self):
        return (tuple((e, c.sort_key()) for e, c in self._terms), self._prec is not None, self._prec or 0)

    def __reduce__(self):
        return (PuiseuxNumber, (self._terms, self._prec))

    def __str__(self):
        return format_puiseux(self)

    def __repr__(self):
        return f"PuiseuxNumber({format_puiseux(self)!r})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return f"t^{e.numerator}" if e != 1 else "t"
    return f"t^({e})"


def format_puiseux(x: PuiseuxNumber) -> str:
    """Canonical text, e.g. ``-i*t^(-1/2) + 1/2 + O(t^(1/2))``."""
    pieces = []
    for e, c in x.terms:
        neg = False
        if len(c.terms()) == 1:
            neg = c.terms()[0][1] < 0
            body = str(-c if neg else c)
        else:
            body = f"({c})"
        if e == 0:
            text = body
        elif body == "1":
            text = format_exponent(e)
        else:
            text = f"{body}*{format_exponent(e)}"
        pieces.append((neg, text))
    if x.prec is not None:
        pieces.append((False, f"O({format_exponent(x.prec)})"))
    if not pieces:
        return "0"
    neg, first = pieces[0]
    out = ("-" if neg else "") + first
    for neg, text in pieces[1:]:
        out += (" - " if neg else " + ") + text
    return out


class Tau:
    """The automorphism sum a_e t^e -> sum a_e u^e t^(lambda e).

    The unit is stored as a positive radius (a product of primes with
    rational exponents) times exp(2 pi i angle), so that u^e is a
    consistent choice of roots for every rational e.
    """

    __slots__ = ("lam", "radius", "angle")

    def __init__(self, lam=1, unit=1):
        lam = Fraction(lam)
        if lam <= 0:
            raise ValueError("lambda must be a positive rational")
        self.lam = lam
        if isinstance(unit, str):
            unit = _unit_from_text(unit)
        self.radius, self.angle = _polar_unit(_as_coeff(unit))

    @classmethod
    def _from_parts(cls, lam, radius, angle):
        obj = cls.__new__(cls)
        obj.lam = Fraction(lam)
        obj.radius = tuple(sorted((p, a) for p, a in radius if a != 0))
        obj.angle = Fraction(angle)
        return obj

    @classmethod
    def identity(cls) -> "Tau":
        return cls._from_parts(1, (), 0)

    def is_identity(self) -> bool:
        return self.lam == 1 and not self.radius and self.angle == 0

    def fixes_unit(self) -> bool:
        return not self.radius and self.angle == 0

    def unit_power(self, e) -> Coeff:
        """u^e for rational e."""
        e = Fraction(e)
        value = Coeff(1)
        rational = Fraction(1)
        under_root = 1
        for p, a in self.radius:
            x = a * e
            if x.denominator not in (1, 2):
                raise ExtensionRequired(f"{p}^({x}) is not in the quadratic closure")
            n = floor(x)
            rational *= Fraction(p) ** n
            if x != n:
                under_root *= p
        if under_root != 1:
            value = Coeff.sqrt_of_rational(under_root)
        value = value * rational
        turns = self.angle * e
        turns -= floor(turns)
        if turns:
            if 24 % turns.denominator:
                raise ExtensionRequired(f"exp(2 pi i {turns}) is not in the quadratic closure")
            value = value * roots_of_unity(turns.denominator)[turns.numerator]
        return value

    @property
    def unit(self) -> Coeff:
        return self.unit_power(1)

    def apply(self, x) -> PuiseuxNumber:
        x = PuiseuxNumber.coerce(x)
        if self.is_identity():
            return x
        prec = None if x.prec is None else x.prec * self.lam
        if self.fixes_unit():
            return PuiseuxNumber._raw(tuple((e * self.lam, c) for e, c in x.terms), prec)
        return PuiseuxNumber([(e * self.lam, c * self.unit_power(e)) for e, c in x.terms], prec)

    __call__ = apply

    def inverse(self) -> "Tau":
        return Tau._from_parts(1 / self.lam, [(p, -a / self.lam) for p, a in self.radius], -self.angle / self.lam)

    def after(self, first: "Tau") -> "Tau":
        """The automorphism ``self o first`` (apply ``first``, then ``self``)."""
        lam = first.lam
        radius = dict(first.radius)
        for p, a in self.radius:
            radius[p] = radius.get(p, 0) + lam * a
        return Tau._from_parts(first.lam * self.lam, radius.items(), first.angle + lam * self.angle)

    def residue_scale(self, v) -> Coeff:
        """Tangent action at a disk of log-radius v: residues are multiplied by u^v."""
        return self.unit_power(v)

    def __eq__(self, other):
        if not isinstance(other, Tau):
            return NotImplemented
        return (self.lam, self.radius, self.angle) == (other.lam, other.radius, other.angle)

    def __hash__(self):
        return hash((self.lam, self.radius, self.angle))

    def __reduce__(self):
        return (Tau._from_parts, (self.lam, self.radius, self.angle))

    def unit_text(self) -> str:
        try:
            return str(self.unit)
        except ExtensionRequired:
            rad = "*".join(f"{p}^({a})" for p, a in self.radius) or "1"
            return f"{rad}*exp(2*pi*i*{self.angle})"

    def __repr__(self):
        return f"Tau(lambda={self.lam}, unit={self.unit_text()})"


def _unit_from_text(text: str) -> Coeff:
    from .parsing import parse_coefficient

    return parse_coefficient(text)


def _polar_unit(u: Coeff):
    """Split a single-radical unit q*sqrt(m) into (radius exponents, angle in turns)."""
    if not u:
        raise ValueError("the unit of an automorphism must be nonzero")
    terms = u.terms()
    if len(terms) != 1:
        raise ExtensionRequired(f"unit {u} must be a single radical term q*sqrt(m)")
    m, q = terms[0]
    radius = {}
    for p, k in factorint(abs(q.numerator)).items():
        radius[p] = radius.get(p, 0) + Fraction(k)
    for p, k in factorint(q.denominator).items():
        radius[p] = radius.get(p, 0) - Fraction(k)
    for p, k in factorint(abs(m)).items():
        radius[p] = radius.get(p, 0) + Fraction(k, 2)
    if q > 0:
        angle = Fraction(0) if m > 0 else Fraction(1, 4)
    else:
        angle = Fraction(1, 2) if m > 0 else Fraction(-1, 4)
    return tuple(sorted((p, a) for p, a in radius.items() if a)), angle
