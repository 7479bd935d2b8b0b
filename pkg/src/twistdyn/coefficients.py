"""Coefficient field: the compositum of all quadratic extensions of Q.

An element is a finite sum ``sum q_m * sqrt(m)`` over signed squarefree
integers ``m`` (``sqrt(1) = 1``, ``sqrt(-1) = i``, ``sqrt(-m) = i*sqrt(m)``).
These square roots are linearly independent over Q, so equality and zero
tests are syntactic.  The field contains i, every sqrt of a rational, and the
roots of unity of order dividing 24; roots outside it raise
``ExtensionRequired`` instead of being approximated.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from sympy import factorint, integer_nthroot

from .errors import ExtensionRequired


@lru_cache(maxsize=4096)
def _squarefree_split(n: int):
    """n = s^2 * m with m squarefree (sign carried by m)."""
    if n == 0:
        raise ValueError("zero has no squarefree part")
    sign = -1 if n < 0 else 1
    s, m = 1, 1
    for p, e in factorint(abs(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, sign * m


@lru_cache(maxsize=4096)
def _generators(m: int):
    """Prime generators of sqrt(m); -1 stands for i."""
    gens = [p for p in factorint(abs(m))]
    if m < 0:
        gens.append(-1)
    return tuple(sorted(gens))


def _basis_product(a: int, b: int):
    """sqrt(a)*sqrt(b) = factor * sqrt(m) for squarefree a, b."""
    g = gcd(a, b)
    m = (a * b) // (g * g)
    factor = g
    if a < 0 and b < 0:
        factor = -factor
    return factor, m


def _basis_key(t):
    return (abs(t[0]), t[0] < 0)


def _norm_terms(items):
    out = {}
    for m, q in items:
        if q:
            out[m] = out.get(m, 0) + q
    kept = [(m, q if type(q) is Fraction else Fraction(q)) for m, q in out.items() if q]
    if len(kept) > 1:
        kept.sort(key=_basis_key)
    return tuple(kept)


class Coeff:
    __slots__ = ("_terms", "_hash")

    def __init__(self, value=0, _terms=None):
        if _terms is not None:
            self._terms = _terms
        elif isinstance(value, Coeff):
            self._terms = value._terms
        else:
            value = Fraction(value)
            self._terms = ((1, value),) if value else ()
        self._hash = None

    @classmethod
    def _make(cls, items):
        return cls(_terms=_norm_terms(items))

    @classmethod
    def sqrt_of_rational(cls, r) -> "Coeff":
        r = Fraction(r)
        if r == 0:
            return cls(0)
        s1, m1 = _squarefree_split(r.numerator * r.denominator)
        return cls._make([(m1, Fraction(s1, r.denominator))])

    @classmethod
    def i(cls) -> "Coeff":
        return cls._make([(-1, 1)])

    # -- structure -------------------------------------------------------
    def terms(self):
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == 1)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms[0][1] if self._terms else Fraction(0)

    def generators(self):
        gens = set()
        for m, _ in self._terms:
            gens.update(_generators(m))
        return tuple(sorted(gens))

    def sort_key(self):
        # positive rational parts sort before negative ones at equal magnitude
        return tuple((abs(m), m < 0, q < 0, abs(q)) for m, q in self._terms)

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, Coeff):
            return x
        if isinstance(x, (int, Fraction)):
            return Coeff(x)
        return NotImplemented

    def __add__(self, other):
        other = Coeff._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if not a:
            return other
        if not b:
            return self
        if len(a) == 1 and len(b) == 1 and a[0][0] == b[0][0]:
            q = a[0][1] + b[0][1]
            return Coeff(_terms=((a[0][0], q),) if q else ())
        return Coeff._make(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Coeff(_terms=tuple((m, -q) for m, q in self._terms))

    def __sub__(self, other):
        other = Coeff._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Coeff(0)
            return Coeff(_terms=tuple((m, q * other) for m, q in self._terms))
        other = Coeff._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_rational():
            return other * self.to_fraction()
        if other.is_rational():
            return self * other.to_fraction()
        return Coeff._make(self._product_items(other))

    def _product_items(self, other):
        """Unnormalized (basis, coefficient) pairs of self * other."""
        items = []
        for a, qa in self._terms:
            for b, qb in other._terms:
                if a == 1:
                    items.append((b, qa * qb))
                elif b == 1:
                    items.append((a, qa * qb))
                else:
                    f, m = _basis_product(a, b)
                    items.append((m, qa * qb * f))
        return items

    __rmul__ = __mul__

    def conjugate(self, gen: int) -> "Coeff":
        """Flip the sign of sqrt(gen) (gen a prime or -1)."""
        def has(m):
            return m < 0 if gen == -1 else m % gen == 0
        return Coeff(_terms=tuple((m, -q if has(m) else q) for m, q in self._terms))

    def inverse(self) -> "Coeff":
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        num = Coeff(1)
        den = self
        while not den.is_rational():
            g = den.generators()[-1]
            c = den.conjugate(g)
            num = num * c
            den = den * c
        return num * (1 / den.to_fraction())

    def __truediv__(self, other):
        other = Coeff._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self * (1 / other.to_fraction())
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Coeff(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are exact in the coefficient field")
        if n < 0:
            return self.inverse() ** (-n)
        result = Coeff(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Coeff):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Coeff(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __reduce__(self):
        return (Coeff, (0, self._terms))

    # -- radicals ----------------------------------------------------------
    def sqrt(self) -> "Coeff":
        """A square root inside the field, or ``ExtensionRequired``."""
        if not self._terms:
            return Coeff(0)
        if self.is_rational():
            return Coeff.sqrt_of_rational(self.to_fraction())
        gens = self.generators()
        root = _sqrt_within(self, gens)
        if root is not None:
            return root
        for q in _candidate_twists(self):
            root = _sqrt_within(self / q, gens)
            if root is not None:
                return root * Coeff.sqrt_of_rational(q)
        raise ExtensionRequired(f"square root of {self} is not in the quadratic closure")

    def nth_root(self, n: int) -> "Coeff":
        """One n-th root (n >= 1) inside the field."""
        if n == 1 or not self._terms:
            return self
        if n % 2 == 0:
            return self.sqrt().nth_root(n // 2)
        if self.is_rational():
            r = self.to_fraction()
            sign = -1 if r < 0 else 1
            a, ea = integer_nthroot(abs(r.numerator), n)
            b, eb = integer_nthroot(r.denominator, n)
            if ea and eb:
                return Coeff(sign * Fraction(a, b))
            raise ExtensionRequired(f"{n}-th root of {r} is not in the quadratic closure")
        if len(self._terms) == 1:
            m, q = self._terms[0]
            # (r sqrt m)^n = r^n m^((n-1)/2) sqrt m for odd n
            base = Fraction(q) / Fraction(m) ** ((n - 1) // 2)
            r = Coeff(base).nth_root(n)
            cand = r * Coeff._make([(m, 1)])
            if cand ** n == self:
                return cand
        raise ExtensionRequired(f"{n}-th root of {self} is not in the quadratic closure")

    def all_nth_roots(self, n: int):
        """All n roots of y^n = self (self nonzero)."""
        r = self.nth_root(n)
        return [r * z for z in roots_of_unity(n)]

    # -- text ------------------------------------------------------------
    def __str__(self):
        return format_coeff(self)

    def __repr__(self):
        return f"Coeff({format_coeff(self)!r})"


def _sqrt_within(x: Coeff, gens):
    """sqrt of x inside Q(sqrt g : g in gens), or None."""
    if not gens:
        if not x.is_rational():
            return None
        r = x.to_fraction()
        if r < 0:
            return None
        a, ea = integer_nthroot(r.numerator, 2)
        b, eb = integer_nthroot(r.denominator, 2)
        return Coeff(Fraction(a, b)) if ea and eb else None
    p = gens[-1]
    rest = gens[:-1]
    a_items, b_items = [], []
    for m, q in x.terms():
        if p in _generators(m):
            b_items.append((m // p if p != -1 else -m, q))
        else:
            a_items.append((m, q))
    a = Coeff._make(a_items)
    b = Coeff._make(b_items)
    root_p = Coeff._make([(p, 1)])
    if b.is_zero():
        c = _sqrt_within(a, rest)
        if c is not None:
            return c
        e = _sqrt_within(a / p, rest)
        return None if e is None else e * root_p
    disc = a * a - b * b * p
    n = _sqrt_within(disc, rest)
    if n is None:
        return None
    for s in (1, -1):
        c2 = (a + n * s) * Fraction(1, 2)
        if c2.is_zero():
            continue
        c = _sqrt_within(c2, rest)
        if c is not None:
            e = b / (c * 2)
            return c + e * root_p
    return None


def _candidate_twists(x: Coeff):
    primes = {2}
    for m, q in x.terms():
        primes.update(p for p in _generators(m) if p != -1)
        primes.update(factorint(abs(q.numerator)).keys())
        primes.update(factorint(q.denominator).keys())
    primes.discard(1)
    primes = sorted(primes)[:8]
    seen = []
    for k in range(0, 4):
        for combo in combinations(primes, k):
            base = 1
            for p in combo:
                base *= p
            for sign in (1, -1):
                q = sign * base
                if q != 1 and q not in seen:
                    seen.append(q)
    return seen


@lru_cache(maxsize=64)
def _primitive_root_of_unity(n: int) -> Coeff:
    half = Fraction(1, 2)
    table = {
        1: Coeff(1),
        2: Coeff(-1),
        4: Coeff.i(),
        3: Coeff(-half) + Coeff.sqrt_of_rational(-3) * half,
        6: Coeff(half) + Coeff.sqrt_of_rational(-3) * half,
        8: (Coeff.sqrt_of_rational(2) + Coeff.sqrt_of_rational(-2)) * half,
        12: (Coeff.sqrt_of_rational(3) + Coeff.i()) * half,
        24: (Coeff.sqrt_of_rational(6) + Coeff.sqrt_of_rational(2)) * Fraction(1, 4)
        + (Coeff.sqrt_of_rational(-6) - Coeff.sqrt_of_rational(-2)) * Fraction(1, 4),
    }
    if n not in table:
        raise ExtensionRequired(f"primitive {n}-th roots of unity are not in the quadratic closure")
    return table[n]


def roots_of_unity(n: int):
    z = _primitive_root_of_unity(n)
    out = [Coeff(1)]
    for _ in range(n - 1):
        out.append(out[-1] * z)
    return out


def format_coeff(c: Coeff) -> str:
    """Canonical text: ``3/2``, ``-i``, ``sqrt(2)``, ``1 + i*sqrt(3)``."""
    if c.is_zero():
        return "0"
    parts = []
    for m, q in c.terms():
        mag = abs(q)
        if m == 1:
            body = str(mag)
        else:
            rad = []
            if m < 0:
                rad.append("i")
            if abs(m) != 1:
                rad.append(f"sqrt({abs(m)})")
            rad = "*".join(rad)
            body = rad if mag == 1 else f"{mag}*{rad}"
        parts.append(("-" if q < 0 else "+", body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
