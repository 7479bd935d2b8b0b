"""Polynomials over the Puiseux field: Taylor shifts, Newton polygons, root counts
and Newton-Puiseux root lifting."""

from __future__ import annotations

from fractions import Fraction

from .coefficients import Coeff
from .errors import PrecisionLoss
from .gamma import INF
from .puiseux import PuiseuxNumber, Tau, relative_precision
from .residue import KPoly, roots as residue_roots


class PolyOverK:
    """Dense polynomial in z with PuiseuxNumber coefficients, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        cs = [PuiseuxNumber.coerce(x) for x in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.c = tuple(cs)

    @classmethod
    def monomial(cls, coeff, k):
        return cls([0] * k + [coeff])

    @classmethod
    def z(cls):
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, k) -> PuiseuxNumber:
        return self.c[k] if 0 <= k < len(self.c) else PuiseuxNumber()

    def is_exact(self) -> bool:
        return all(x.is_exact for x in self.c)

    def is_constant(self) -> bool:
        return self.degree <= 0

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        other = _pk(other)
        n = max(len(self.c), len(other.c))
        return PolyOverK([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return PolyOverK([-x for x in self.c])

    def __sub__(self, other):
        return self + (-_pk(other))

    def __rsub__(self, other):
        return _pk(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Coeff, PuiseuxNumber)):
            other = PuiseuxNumber.coerce(other)
            if other.is_zero():
                return PolyOverK()
            return PolyOverK([x * other for x in self.c])
        other = _pk(other)
        if not self.c or not other.c:
            return PolyOverK()
        out = [PuiseuxNumber()] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x.is_zero():
                continue
            for j, y in enumerate(other.c):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return PolyOverK(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = PolyOverK([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Coeff, PuiseuxNumber)):
            other = PolyOverK([other])
        return isinstance(other, PolyOverK) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __call__(self, x) -> PuiseuxNumber:
        x = PuiseuxNumber.coerce(x)
        acc = PuiseuxNumber()
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def evaluate_to(self, x, cap) -> PuiseuxNumber:
        """p(x) correct below t^cap, with intermediate truncation."""
        x = PuiseuxNumber.coerce(x)
        vx = x.valuation_lower_bound() if not x.is_zero() else 0
        low = min([c.valuation_lower_bound() for c in self.c if not c.is_zero()] + [0])
        inner = Fraction(cap) - self.degree * min(0, vx) - min(0, low)
        xs = x.truncate(inner)
        acc = PuiseuxNumber()
        for a in reversed(self.c):
            acc = (acc * xs + a).truncate(inner)
        return acc.truncate(cap)

    def derivative(self) -> "PolyOverK":
        return PolyOverK([x * k for k, x in enumerate(self.c)][1:])

    def taylor_shift(self, center) -> "PolyOverK":
        """The polynomial w -> p(center + w)."""
        center = PuiseuxNumber.coerce(center)
        if center.is_zero():
            return self
        lin = PolyOverK([center, 1])
        acc = PolyOverK()
        for a in reversed(self.c):
            acc = acc * lin + PolyOverK([a])
        return acc

    def reversed(self, n) -> "PolyOverK":
        """z^n p(1/z)."""
        cs = [self.coeff(k) for k in range(n + 1)]
        return PolyOverK(cs[::-1])

    def map_coefficients(self, fn) -> "PolyOverK":
        return PolyOverK([fn(x) for x in self.c])

    def apply_tau(self, tau: Tau) -> "PolyOverK":
        return self.map_coefficients(tau.apply)

    def truncate(self, e) -> "PolyOverK":
        return self.map_coefficients(lambda x: x.truncate(e))

    # -- valuation data ----------------------------------------------------
    def gauss_data(self, v):
        """min_k val(p_k) + k*v and the indices attaining it."""
        best = None
        dominant = []
        for k, x in enumerate(self.c):
            if not x.has_terms():
                continue
            val = x.valuation() + k * v
            if best is None or val < best:
                best, dominant = val, [k]
            elif val == best:
                dominant.append(k)
        if best is None:
            if self.is_zero():
                return INF, []
            raise PrecisionLoss("every coefficient is hidden behind O(t^e)")
        for k, x in enumerate(self.c):
            if not x.has_terms() and not x.is_zero():
                if x.prec + k * v <= best:
                    raise PrecisionLoss(f"coefficient of z^{k} is too imprecise at log-radius {v}")
        return best, dominant

    def gauss_valuation(self, v):
        return self.gauss_data(v)[0]

    def reduction(self, v):
        """(min, dominant indices, reduced polynomial) for rational v."""
        best, dominant = self.gauss_data(v)
        cs = [Coeff(0)] * (max(dominant) + 1 if dominant else 0)
        for k in dominant:
            cs[k] = self.c[k].leading_coefficient()
        return best, dominant, KPoly(cs)

    def newton_polygon(self):
        """Lower convex hull vertices (index, valuation) of the known coefficients."""
        pts = [(k, x.valuation()) for k, x in enumerate(self.c) if x.has_terms()]
        hull = []
        for p in pts:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
                hull.pop()
            hull.append(p)
        self._check_hidden(hull)
        return hull

    def _check_hidden(self, hull):
        if not hull:
            raise PrecisionLoss("no coefficient is known")
        lo, hi = hull[0][0], hull[-1][0]
        for k, x in enumerate(self.c):
            if x.has_terms() or x.is_zero():
                continue
            if k < lo or k > hi:
                raise PrecisionLoss(f"Newton polygon vertex at z^{k} is hidden behind O(t^{x.prec})")
            if x.prec < _hull_value(hull, k):
                raise PrecisionLoss(f"coefficient of z^{k} may lie below the Newton polygon")

    def root_valuations(self):
        """Valuations of all roots with multiplicity, increasing; zero roots as (INF, k)."""
        if self.degree < 1:
            raise ValueError("root valuations need degree >= 1")
        if not self.c[-1].has_terms():
            raise PrecisionLoss("leading coefficient is hidden behind O(t^e)")
        hull = self.newton_polygon()
        out = []
        for a, b in zip(reversed(hull[:-1]), reversed(hull[1:])):
            (i1, v1), (i2, v2) = a, b
            out.append(((v1 - v2) / (i2 - i1), i2 - i1))
        out.sort(key=lambda rv: rv[0])
        if hull[0][0] > 0:
            out.append((INF, hull[0][0]))
        return out

    def count_roots_in_disk(self, center, v, strict=False) -> int:
        """Roots in the closed disk {val(z - center) >= v} (open disk with ``strict``)."""
        q = self.taylor_shift(center)
        if q.is_zero():
            raise ValueError("the zero polynomial has no finite root count")
        if v is INF:
            for k, x in enumerate(q.c):
                if x.has_terms():
                    lowest_known = k
                    break
            else:
                raise PrecisionLoss("no coefficient is known")
            if any(not x.is_zero() for x in q.c[:lowest_known]):
                raise PrecisionLoss("vanishing order hidden behind O(t^e)")
            return lowest_known
        best, dominant = q.gauss_data(v)
        return min(dominant) if strict else max(dominant)

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k, x in enumerate(self.c):
            if x.is_zero():
                continue
            zs = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            xs = str(x)
            if not zs:
                parts.append(xs)
            elif xs == "1":
                parts.append(zs)
            else:
                parts.append(f"({xs})*{zs}")
        return " + ".join(parts)

    __repr__ = __str__

    def __reduce__(self):
        return (PolyOverK, (self.c,))


def _pk(x):
    if isinstance(x, PolyOverK):
        return x
    return PolyOverK([x])


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_value(hull, k):
    for (i1, v1), (i2, v2) in zip(hull, hull[1:]):
        if i1 <= k <= i2:
            return v1 + (v2 - v1) * Fraction(k - i1, i2 - i1)
    return hull[0][1]


def newton_root_valuations(p: PolyOverK):
    return p.root_valuations()


def count_roots_in_disk(p: PolyOverK, center, v, strict=False) -> int:
    return p.count_roots_in_disk(center, v, strict)


# -- Newton-Puiseux ---------------------------------------------------------

def find_roots(p: PolyOverK, precision=None):
    """All roots of p in K, each known at least to O(t^precision), with multiplicities.

    Exact roots are returned exact.  Root clusters that cannot be separated
    within an extra margin raise ``PrecisionLoss``; residual equations whose
    roots leave the coefficient field raise ``ExtensionRequired``.
    """
    if p.degree < 1:
        return []
    if not p.c[-1].has_terms():
        raise PrecisionLoss("leading coefficient is hidden behind O(t^e)")
    target = Fraction(precision) if precision is not None else relative_precision()
    cap = target + 4 * relative_precision()
    found = []
    _lift(p, PuiseuxNumber(), None, p.degree, target, cap, found)
    found.sort(key=lambda rm: rm[0].sort_key())
    return found


def _lift(q, center, above, count, target, cap, out):
    cs = q.c
    lows = 0
    while lows < count and cs[lows].is_zero():
        lows += 1
    if lows:
        out.append((center, lows))
    rest = count - lows
    if rest == 0:
        return
    pivot = count
    pts = [(k, cs[k].valuation()) for k in range(lows, pivot + 1) if cs[k].has_terms()]
    if not pts or pts[-1][0] != pivot:
        raise PrecisionLoss("root cluster pivot coefficient is unknown")
    hull = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    i0 = hull[0][0]
    bound = None
    for k in range(lows, pivot + 1):
        x = cs[k]
        if x.has_terms() or x.is_zero():
            continue
        if k < i0:
            b = (x.prec - hull[0][1]) / (i0 - k)
            bound = b if bound is None else min(bound, b)
        elif x.prec < _hull_value(hull, k):
            raise PrecisionLoss(f"coefficient of w^{k} may lie below the Newton polygon")
    if i0 > lows:
        # i0 - lows roots sit below every known slope; only a valuation bound is available
        if bound is None:
            raise PrecisionLoss("hidden low coefficients")
        if i0 - lows > 1 or bound < target:
            raise PrecisionLoss(f"root known only to O(t^{bound}), need O(t^{target})")
        out.append((center.truncate(bound) if center.is_exact else center, 1))
    for (i1, v1), (i2, v2) in zip(hull, hull[1:]):
        r = (v1 - v2) / (i2 - i1)
        if above is not None and r <= above:
            raise PrecisionLoss("inconsistent root cluster")
        mult = i2 - i1
        if r >= target and (mult == 1 or r >= cap):
            if mult > 1:
                raise PrecisionLoss(f"{mult} roots agree beyond O(t^{cap}) and are not exact")
            out.append((center.truncate(r), 1))
            continue
        residual = KPoly([cs[k].leading_coefficient() if cs[k].has_terms() and cs[k].valuation() + k * r == v1 + i1 * r else Coeff(0)
                          for k in range(i1, i2 + 1)])
        for y, mu in residue_roots(residual):
            step = PuiseuxNumber.monomial(y, r)
            if mu == 1:
                w = _hensel(q, step, target)
                if w is not None:
                    out.append((center + w, 1))
                    continue
            shifted = q.taylor_shift(step)
            _lift(shifted, center + step, r, mu, target, cap, out)


def _hensel(q, w, target):
    """Newton iteration from an exact approximation w of a simple root of q.

    Returns the root (exact if hit exactly, else known past t^target), or
    None when the Hensel condition val q(w) > 2 val q'(w) fails.
    """
    dq = q.derivative()
    work = target + 2
    for _ in range(64):
        if w.is_exact and len(w.terms) <= 8 and q(w).is_zero():
            return w
        g = dq.evaluate_to(w, work)
        if not g.has_terms():
            return None
        vg = g.valuation()
        cap = work + vg + 1
        f = q.evaluate_to(w, cap)
        if not f.has_terms():
            return w.truncate(cap - vg) if cap - vg >= target else None
        vf = f.valuation()
        if vf <= 2 * vg:
            return None
        gap = vf - vg
        if gap >= target:
            return w.truncate(gap)
        step = min(work, 2 * gap + 2 + 2 * abs(vg))
        w = w - f.divide(g, step).below(step)
    return None


def resultant(n: PolyOverK, d: PolyOverK, degree: int) -> PuiseuxNumber:
    """Res_{degree,degree}(n, d): determinant of the Sylvester matrix (fraction-free elimination)."""
    size = 2 * degree
    rows = []
    for shift in range(degree):
        row = [PuiseuxNumber()] * size
        for k in range(degree + 1):
            row[size - 1 - (shift + k)] = n.coeff(k)
        rows.append(row)
    for shift in range(degree):
        row = [PuiseuxNumber()] * size
        for k in range(degree + 1):
            row[size - 1 - (shift + k)] = d.coeff(k)
        rows.append(row)
    return _bareiss(rows)


def _bareiss(m):
    n = len(m)
    m = [list(r) for r in m]
    sign = 1
    prev = PuiseuxNumber.constant(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return PuiseuxNumber()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det
