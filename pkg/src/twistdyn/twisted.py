"""Twisted rational maps z -> N(tau z) / D(tau z) and their local theory."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .berkovich import (
    BerkPoint,
    Direction,
    FiniteTree,
    convex_hull,
    dominates,
    hyp_distance,
    tau_apply_point,
)
from .coefficients import Coeff
from .errors import (
    InvariantViolation,
    PoleOnBoundary,
    PrecisionLoss,
    SpecSemanticError,
    WeierstrassMismatch,
)
from .gamma import INF, GammaElem, is_rational
from .polynomial import PolyOverK, find_roots, resultant
from .puiseux import PuiseuxNumber, Tau
from .residue import INFINITY, ResidueMap

_IMAGE_STEP_CAP = 4096


@dataclass(frozen=True)
class Annulus:
    """{z : outer_v < val(z - center) < inner_v}."""

    center: PuiseuxNumber
    inner_v: object
    outer_v: object

    def __post_init__(self):
        if not self.inner_v > self.outer_v:
            raise ValueError("an annulus needs inner_v > outer_v")


@dataclass(frozen=True)
class DirectionalData:
    direction: Direction
    image_direction: Direction
    m: int
    s: int
    good: bool
    effective_length: Fraction


@dataclass
class RamificationReport:
    critical_points: list
    hull: FiniteTree
    tame: bool = True


@dataclass
class BallImage:
    """Image of a ball under the untwisted map, with the data behind it."""

    point: BerkPoint
    tangent: ResidueMap | None
    degree: int


class TwistedMap:
    """phi o tau with phi = num/den over the Puiseux field."""

    def __init__(self, num, den=None, tau: Tau | None = None, check=True):
        num = num if isinstance(num, PolyOverK) else PolyOverK([num])
        den = PolyOverK([1]) if den is None else (den if isinstance(den, PolyOverK) else PolyOverK([den]))
        if den.is_zero():
            raise SpecSemanticError("denominator is identically zero")
        self.num = num
        self.den = den
        self.tau = tau or Tau.identity()
        self.degree = max(num.degree, den.degree)
        if self.degree < 1:
            raise SpecSemanticError("the map is constant")
        if check:
            res = resultant(num, den, self.degree)
            if not res.has_terms():
                if res.is_zero():
                    raise SpecSemanticError("numerator and denominator share a root")
                raise PrecisionLoss("coprimality is hidden behind O(t^e)")

    # -- structure -----------------------------------------------------------
    @classmethod
    def parse(cls, num: str, den: str = "1", lam="1", unit="1") -> "TwistedMap":
        from .parsing import parse_polynomial

        return cls(parse_polynomial(num), parse_polynomial(den), Tau(Fraction(lam), unit))

    @property
    def lam(self) -> Fraction:
        return self.tau.lam

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def untwisted(self) -> "TwistedMap":
        return TwistedMap(self.num, self.den, Tau.identity(), check=False)

    def with_tau(self, tau: Tau) -> "TwistedMap":
        return TwistedMap(self.num, self.den, tau, check=False)

    def hat(self, tau: Tau) -> "TwistedMap":
        """Apply tau to every coefficient; the twist is kept."""
        return TwistedMap(self.num.apply_tau(tau), self.den.apply_tau(tau), self.tau, check=False)

    def compose(self, inner: "TwistedMap") -> "TwistedMap":
        """self o inner, as a single twisted map."""
        phi = inner.hat(self.tau)
        e = self.degree
        a, b = phi.num, phi.den
        num, den = PolyOverK(), PolyOverK()
        for k in range(e + 1):
            piece = (a ** k) * (b ** (e - k))
            num = num + piece * self.num.coeff(k)
            den = den + piece * self.den.coeff(k)
        return TwistedMap(num, den, self.tau.after(inner.tau), check=False)

    def __repr__(self):
        return f"TwistedMap(num={self.num}, den={self.den}, {self.tau!r})"

    # -- classical points ----------------------------------------------------
    def phi_value(self, y: BerkPoint) -> BerkPoint:
        """The untwisted map at a classical point."""
        if y.is_infinity:
            if self.num.degree > self.den.degree:
                return BerkPoint.infinity()
            if self.num.degree < self.den.degree:
                return BerkPoint.classical(0)
            return BerkPoint.classical(self.num.c[-1] / self.den.c[-1])
        nv, dv = self.num(y.center), self.den(y.center)
        if dv.is_zero():
            return BerkPoint.infinity()
        if not dv.has_terms():
            raise PrecisionLoss(f"cannot decide whether {y} is a pole")
        return BerkPoint.classical(nv / dv)

    def eval_classical(self, x: BerkPoint) -> BerkPoint:
        return self.phi_value(tau_apply_point(self.tau, x))

    def projective_value(self, x: BerkPoint):
        """(N(tau x), D(tau x)) with the chart at infinity as leading coefficients."""
        if x.is_infinity:
            d = self.degree
            return self.num.coeff(d), self.den.coeff(d)
        y = self.tau.apply(x.center)
        return self.num(y), self.den(y)

    # -- balls ---------------------------------------------------------------
    def ball_image(self, center: PuiseuxNumber, v) -> BallImage:
        """Image of [center; v] under the untwisted map."""
        ns = self.num.taylor_shift(center)
        ds = self.den.taylor_shift(center)
        rational = is_rational(v)
        g_den, dom_den = ds.gauss_data(v)
        den_red = ds.reduction(v)[2] if rational else None
        a = PuiseuxNumber()
        p = ns
        for _ in range(_IMAGE_STEP_CAP):
            g_p, dom_p = p.gauss_data(v)
            if g_p is INF:
                raise InvariantViolation("numerator vanished while locating an image")
            if rational:
                p_red = p.reduction(v)[2]
                ratio = p_red.lead() / den_red.lead()
                proportional = p_red.degree == den_red.degree and p_red == den_red * ratio
            else:
                proportional = dom_p == dom_den
                if proportional:
                    ratio = p.c[dom_p[0]].leading_coefficient() / ds.c[dom_den[0]].leading_coefficient()
            if not proportional:
                s = g_p - g_den
                point = BerkPoint.ball(a, s)
                if rational:
                    shift = Coeff(0)
                    for e, c in a.terms:
                        if e == s:
                            shift = c
                    tangent = ResidueMap(p_red + den_red * shift, den_red)
                    return BallImage(point, tangent, tangent.degree)
                return BallImage(point, None, abs(dom_p[0] - dom_den[0]))
            e = g_p - g_den
            mono = PuiseuxNumber.monomial(ratio, e)
            a = a + mono
            p = p - ds * mono
        raise PrecisionLoss("image center did not stabilise")

    def _twisted_ball(self, xi: BerkPoint) -> BallImage:
        y = tau_apply_point(self.tau, xi)
        return self.ball_image(y.center, y.v)

    def image_point(self, xi: BerkPoint) -> BerkPoint:
        if xi.is_classical:
            return self.eval_classical(xi)
        return self._twisted_ball(xi).point

    __call__ = image_point

    def tangent_map(self, xi: BerkPoint) -> ResidueMap:
        if not xi.is_type_ii:
            raise ValueError("tangent maps are defined at type II points")
        data = self._twisted_ball(xi)
        scale = self.tau.residue_scale(xi.v)
        if scale == 1:
            return data.tangent
        return data.tangent.compose(ResidueMap.linear(scale))

    def local_degree(self, xi: BerkPoint) -> int:
        if not xi.is_classical:
            return self._twisted_ball(xi).degree
        y = tau_apply_point(self.tau, xi)
        return self._phi_classical_degree(y)

    def _phi_classical_degree(self, y: BerkPoint) -> int:
        if y.is_infinity:
            d = self.degree
            chart = TwistedMap(self.num.reversed(d), self.den.reversed(d), check=False)
            return chart._phi_classical_degree(BerkPoint.classical(0))
        x = y.center
        nv, dv = self.num(x), self.den(x)
        if dv.is_zero():
            g = self.den
        else:
            g = self.num * dv - self.den * nv
        return _vanishing_order(g, x)

    # -- directions ------------------------------------------------------------
    def directional_data(self, xi: BerkPoint, direction: Direction) -> DirectionalData:
        if direction.at != xi:
            raise ValueError("direction is not based at the given point")
        tau = self.tau
        y = tau_apply_point(tau, xi)
        data = self.ball_image(y.center, y.v)
        zeta = data.point
        tangent = data.tangent
        if direction.residue is None:
            r_y = INFINITY
        else:
            r_y = direction.residue * tau.residue_scale(xi.v)
        image_res = tangent(r_y)
        image_dir = Direction(zeta, None if image_res == INFINITY else image_res)
        m = tangent.multiplicity(r_y)
        d = self.degree
        if image_res == INFINITY:
            poly = self.num - self.den * zeta.center
        else:
            poly = self.den
        s = _count_in_direction(poly, d, y, r_y)
        length = self._effective_length(y, r_y, zeta, image_res) / tau.lam
        self._check_expansion(xi, direction, zeta, m, length)
        return DirectionalData(direction, image_dir, m, s, s == 0, length)

    def _effective_length(self, y, r_y, zeta, image_res):
        polys = [self.den, self.num - self.den * zeta.center]
        if image_res != INFINITY:
            b2 = zeta.center + PuiseuxNumber.monomial(image_res, zeta.v)
            polys.append(self.num - self.den * b2)
        best = None
        for poly in polys:
            if poly.degree < 1:
                continue
            if r_y == INFINITY:
                shifted = poly.taylor_shift(y.center)
                vals = [r for r, _ in _known_root_valuations(shifted) if r is not INF and r < y.v]
                gaps = [y.v - r for r in vals]
            else:
                x = y.center + PuiseuxNumber.monomial(r_y, y.v)
                shifted = poly.taylor_shift(x)
                vals = [r for r, _ in _known_root_valuations(shifted) if r is not INF and r > y.v]
                gaps = [r - y.v for r in vals]
            for g in gaps:
                best = g if best is None else min(best, g)
        return Fraction(1) if best is None else min(Fraction(best), Fraction(1))

    def _check_expansion(self, xi, direction, zeta, m, length):
        eps = length / 2
        expected_factor = self.lam * m
        for _ in range(8):
            sample = direction.sample_point(eps)
            image = self.image_point(sample)
            if hyp_distance(zeta, image) == expected_factor * eps:
                half = self.image_point(direction.sample_point(eps / 2))
                if hyp_distance(zeta, half) == expected_factor * eps / 2:
                    return
            eps /= 2
        raise InvariantViolation(f"directional multiplicity {m} not confirmed metrically at {xi}")

    # -- fibres ------------------------------------------------------------------
    def preimages(self, xi: BerkPoint):
        if xi.is_classical:
            found = self._classical_fibre(xi)
        else:
            found = self._ball_fibre(xi)
        inv = self.tau.inverse()
        out = [(tau_apply_point(inv, p), k) for p, k in found]
        merged = {}
        for p, k in out:
            merged[p] = merged.get(p, 0) + k
        result = sorted(merged.items(), key=lambda pk: pk[0].sort_key())
        total = sum(k for _, k in result)
        if total != self.degree:
            raise PrecisionLoss(f"fibre degrees sum to {total}, expected {self.degree}")
        return result

    def _classical_fibre(self, target: BerkPoint, precision=None):
        d = self.degree
        poly = self.den if target.is_infinity else self.num - self.den * target.center
        out = []
        if poly.degree >= 1:
            for root, k in find_roots(poly, precision):
                out.append((BerkPoint.classical(root), k))
        if poly.degree < d:
            out.append((BerkPoint.infinity(), d - max(poly.degree, 0)))
        return out

    def _ball_fibre(self, target: BerkPoint):
        b, s = target.center, target.v
        precision = _as_fraction_ceiling(s) + 2
        for _ in range(6):
            found, complete = self._ball_fibre_at(b, s, target, precision)
            if complete:
                return found
            precision *= 2
        raise PrecisionLoss(f"fibre of {target} could not be completed")

    def _ball_fibre_at(self, b, s, target, precision):
        # centers from preimages of b usually suffice; poles and preimages of
        # a second point of the ball are only tried for what is still missing
        d = self.degree
        polys = [self.num - self.den * b, self.den]
        if is_rational(s):
            polys.append(self.num - self.den * (b + PuiseuxNumber.t_power(s)))
        base = polys[0]
        found = {}
        for poly in polys:
            if poly.degree < 1:
                continue
            for x, _ in find_roots(poly, precision):
                for w in _solve_level(base.taylor_shift(x), self.den.taylor_shift(x), s):
                    if not x.is_exact and w > x.prec:
                        continue
                    cand = BerkPoint.ball(x, w)
                    if cand in found:
                        continue
                    image = self.ball_image(cand.center, cand.v)
                    if image.point == target:
                        found[cand] = image.degree
            total = sum(found.values())
            if total > d:
                raise InvariantViolation(f"fibre of {target} has degree {total} > {d}")
            if total == d:
                return list(found.items()), True
        return list(found.items()), False

    # -- ramification ------------------------------------------------------------
    def critical_points(self):
        """Classical critical points with multiplicity (e - 1), counted on P^1."""
        w = self.num.derivative() * self.den - self.num * self.den.derivative()
        d = self.degree
        pts = []
        if w.degree >= 1:
            pts = [(BerkPoint.classical(r), k) for r, k in find_roots(w)]
        at_inf = 2 * d - 2 - max(w.degree, 0)
        if at_inf > 0:
            pts.append((BerkPoint.infinity(), at_inf))
        inv = self.tau.inverse()
        return [(tau_apply_point(inv, p), k) for p, k in pts]

    def ramification(self) -> RamificationReport:
        crit = self.critical_points()
        if sum(k for _, k in crit) != 2 * self.degree - 2:
            raise InvariantViolation("critical multiplicities do not sum to 2d - 2")
        hull = convex_hull([p for p, _ in crit]) if crit else None
        return RamificationReport(crit, hull, True)

    # -- annuli --------------------------------------------------------------------
    def image_annulus(self, ann: Annulus) -> Annulus:
        lam = self.lam
        c = self.tau.apply(ann.center)
        inner, outer = ann.inner_v * lam, ann.outer_v * lam
        img_in = self.ball_image(c.below(inner), inner).point
        img_out = self.ball_image(c.below(outer), outer).point
        for r, _ in _known_root_valuations(self.den.taylor_shift(c)):
            if r == inner or r == outer:
                raise PoleOnBoundary("a pole lies on a boundary sphere of the annulus")
            if outer < r < inner:
                raise WeierstrassMismatch("a pole lies inside the annulus")
        for anchor in (img_in, img_out):
            zeros = self.num - self.den * anchor.center
            for r, _ in _known_root_valuations(zeros.taylor_shift(c)):
                if r is not INF and outer < r < inner:
                    raise WeierstrassMismatch("inner and outer Weierstrass degrees differ")
        if dominates(img_out, img_in) and img_in.v > img_out.v:
            return Annulus(img_in.center, img_in.v, img_out.v)
        if dominates(img_in, img_out) and img_out.v > img_in.v:
            return Annulus(img_out.center, img_out.v, img_in.v)
        raise WeierstrassMismatch("boundary images are not nested")

    # -- metric estimates ------------------------------------------------------------
    def holder_log_constant(self):
        """log C with sigma(F x, F y) <= C sigma(x, y)^lambda (additive units)."""
        d = self.degree
        vals = [x.valuation() for x in self.num.c + self.den.c if x.has_terms()]
        mu = min(vals)
        res = resultant(self.num, self.den, d)
        return res.valuation() - 2 * d * mu


def projective_logdist(p, q):
    """-log sigma between projective points (p0 : p1) and (q0 : q1)."""
    cross = p[0] * q[1] - p[1] * q[0]
    low = lambda a, b: min(a.valuation(), b.valuation())
    return cross.valuation() - low(*p) - low(*q)


def _as_fraction_ceiling(v):
    q = v.q if isinstance(v, GammaElem) else Fraction(v)
    r = v.r if isinstance(v, GammaElem) else Fraction(0)
    bound = abs(q) + 2 * abs(r)
    return Fraction(int(bound) + 1)


def _vanishing_order(g: PolyOverK, x: PuiseuxNumber) -> int:
    if g.is_zero():
        raise InvariantViolation("local degree of a constant map")
    if x.is_exact:
        return g.count_roots_in_disk(x, INF)
    return g.count_roots_in_disk(x, x.prec)


def _known_root_valuations(p: PolyOverK):
    """Newton slopes from the known coefficients only (no precision verdict)."""
    pts = [(k, c.valuation()) for k, c in enumerate(p.c) if c.has_terms()]
    if len(pts) < 1:
        return []
    hull = []
    for pt in pts:
        while len(hull) >= 2 and (hull[-1][0] - hull[-2][0]) * (pt[1] - hull[-2][1]) - (hull[-1][1] - hull[-2][1]) * (pt[0] - hull[-2][0]) <= 0:
            hull.pop()
        hull.append(pt)
    out = [((v1 - v2) / (i2 - i1), i2 - i1) for (i1, v1), (i2, v2) in zip(hull, hull[1:])]
    if hull[0][0] > 0:
        out.append((INF, hull[0][0]))
    return out


def _count_in_direction(poly: PolyOverK, d: int, y: BerkPoint, r_y) -> int:
    """Roots of poly (plus roots at infinity up to degree d) in a direction at y."""
    if poly.degree < 0:
        raise InvariantViolation("counting roots of the zero polynomial")
    if r_y == INFINITY:
        inside = poly.count_roots_in_disk(y.center, y.v) if poly.degree >= 1 else 0
        return max(poly.degree, 0) - inside + (d - max(poly.degree, 0))
    if poly.degree < 1:
        return 0
    x = y.center + PuiseuxNumber.monomial(r_y, y.v)
    return poly.count_roots_in_disk(x, y.v, strict=True)


def _solve_level(num: PolyOverK, den: PolyOverK, target):
    """All w with gv_w(num) - gv_w(den) = target (piecewise-linear in w)."""
    breaks = set()
    for p in (num, den):
        for r, _ in _known_root_valuations(p):
            if r is not INF:
                breaks.add(r)
    breaks = sorted(breaks)
    samples = []
    if not breaks:
        samples.append((None, None, Fraction(0)))
    else:
        samples.append((None, breaks[0], breaks[0] - 1))
        for lo, hi in zip(breaks, breaks[1:]):
            samples.append((lo, hi, (lo + hi) / 2))
        samples.append((breaks[-1], None, breaks[-1] + 1))
    out = []
    for lo, hi, w0 in samples:
        try:
            g_n, dom_n = num.gauss_data(w0)
            g_d, dom_d = den.gauss_data(w0)
        except PrecisionLoss:
            continue
        slope = dom_n[0] - dom_d[0]
        offset = (g_n - g_d) - slope * w0
        if slope == 0:
            if offset == target:
                out.extend(x for x in (lo, hi) if x is not None)
            continue
        w = (target - offset) / slope
        if (lo is None or w >= lo) and (hi is None or w <= hi):
            out.append(w)
    return list(dict.fromkeys(out))
