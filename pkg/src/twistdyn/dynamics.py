"""Orbits, fixed-point classification, segment dynamics and exceptional points."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .berkovich import BerkPoint, format_point
from .errors import ExtensionRequired, NotFixed, PrecisionLoss, SegmentNotInvariant
from .gamma import INF, format_gamma
from .residue import INFINITY, roots
from .twisted import TwistedMap, _known_root_valuations

INDIFFERENT = "Indifferent"
ATTRACTING = "Attracting"
REPELLING = "Repelling"
SADDLE = "Saddle"


@dataclass
class FixedPointClass:
    """Class of a fixed point plus the data that decided it.

    For ball points ``witness`` holds ``directions``: one entry per
    non-indifferent direction class, each a dict with the direction label,
    its multiplicity and ``lam_m``.  For classical points it holds
    ``lam_m`` and, when that equals 1, ``valuation_b`` of the leading
    coefficient of the local expansion.
    """

    variant: str
    witness: dict = field(default_factory=dict)

    def to_json(self):
        return {"class": self.variant, "witness": _jsonable(self.witness)}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return format_gamma(x)
    if x is INF:
        return "inf"
    if isinstance(x, BerkPoint):
        return format_point(x)
    return x


def _class_of(value: Fraction) -> str:
    if value == 1:
        return INDIFFERENT
    return ATTRACTING if value < 1 else REPELLING


def orbit(F: TwistedMap, xi: BerkPoint, n: int):
    out = [xi]
    for _ in range(n):
        out.append(F.image_point(out[-1]))
    return out


def iterate(F: TwistedMap, k: int) -> TwistedMap:
    """F composed with itself k times (k >= 1)."""
    if k < 1:
        raise ValueError("iterate needs k >= 1")
    G = F
    for _ in range(k - 1):
        G = F.compose(G)
    return G


def same_point(a: BerkPoint, b: BerkPoint) -> bool:
    """Equality that tolerates truncated centers of classical points."""
    if a.is_infinity or b.is_infinity:
        return a.is_infinity and b.is_infinity
    if a.v != b.v:
        return False
    if a.is_classical:
        return not (a.center - b.center).has_terms()
    return a == b


# -- classification --------------------------------------------------------------
def classify_fixed(F: TwistedMap, xi: BerkPoint) -> FixedPointClass:
    image = F.image_point(xi)
    if not same_point(image, xi):
        raise NotFixed(f"{xi} maps to {image}")
    if xi.is_classical:
        return _classify_classical(F, xi)
    if xi.is_type_iii:
        m = F.local_degree(xi)
        value = F.lam * m
        variant = _class_of(value)
        dirs = [] if variant == INDIFFERENT else [
            {"direction": label, "m": m, "lam_m": value} for label in ("toward 0-side", "toward inf-side")
        ]
        return FixedPointClass(variant, {"directions": dirs})
    return _classify_ball(F, xi)


def _classify_classical(F: TwistedMap, xi: BerkPoint) -> FixedPointClass:
    if xi.is_infinity:
        d = F.degree
        chart = TwistedMap(F.den.reversed(d), F.num.reversed(d), F.tau, check=False)
        return _classify_classical(chart, BerkPoint.classical(0))
    y = F.tau.apply(xi.center)
    dy, ny = F.den(y), F.num(y)
    g = F.num * dy - F.den * ny
    shifted = g.taylor_shift(y)
    m = F._phi_classical_degree(BerkPoint.classical(y))
    g_m = shifted.coeff(m)
    if not g_m.has_terms() or not dy.has_terms():
        raise PrecisionLoss(f"leading local coefficient at {xi} is not known")
    val_b = g_m.valuation() - 2 * dy.valuation()
    lam_m = F.lam * m
    witness = {"m": m, "lam_m": lam_m}
    if lam_m != 1:
        return FixedPointClass(REPELLING if lam_m < 1 else ATTRACTING, witness)
    witness["valuation_b"] = val_b
    if val_b > 0:
        return FixedPointClass(ATTRACTING, witness)
    if val_b < 0:
        return FixedPointClass(REPELLING, witness)
    return FixedPointClass(INDIFFERENT, witness)


def _critical_directions(tangent):
    """(label, multiplicity) for each ramified residue direction of the tangent map."""
    w = tangent.wronskian()
    out = []
    try:
        located = roots(w) if w.degree >= 1 else []
        for r, k in located:
            out.append((str(r), k + 1))
    except ExtensionRequired:
        profile = tangent.ramification_profile()
        at_inf = tangent.multiplicity(INFINITY)
        for m, count in profile:
            count -= 1 if m == at_inf else 0
            out.extend(("unresolved", m) for _ in range(count))
        if at_inf > 1:
            out.append(("inf", at_inf))
        return out
    at_inf = tangent.multiplicity(INFINITY)
    if at_inf > 1:
        out.append(("inf", at_inf))
    return out


def _classify_ball(F: TwistedMap, xi: BerkPoint) -> FixedPointClass:
    tangent = F.tangent_map(xi)
    lam = F.lam
    classes = set()
    dirs = []
    generic = _class_of(lam)
    classes.add(generic)
    if generic != INDIFFERENT:
        dirs.append({"direction": "generic", "m": 1, "lam_m": lam})
    for label, m in _critical_directions(tangent):
        value = lam * m
        cls = _class_of(value)
        classes.add(cls)
        if cls != INDIFFERENT:
            dirs.append({"direction": label, "m": m, "lam_m": value})
    classes.discard(INDIFFERENT)
    if not classes:
        variant = INDIFFERENT
    elif classes == {ATTRACTING}:
        variant = ATTRACTING
    elif classes == {REPELLING}:
        variant = REPELLING
    else:
        variant = SADDLE
    return FixedPointClass(variant, {"directions": dirs})


# -- dynamics on the segment [0, inf] ------------------------------------------------
@dataclass(frozen=True)
class SegmentPiece:
    """v -> offset + orientation * slope * v for lo <= v <= hi (None = unbounded)."""

    lo: Fraction | None
    hi: Fraction | None
    slope: Fraction
    offset: Fraction

    def contains(self, v) -> bool:
        return (self.lo is None or v >= self.lo) and (self.hi is None or v <= self.hi)


@dataclass
class SegmentMapModel:
    breakpoints: list
    pieces: list
    orientation: int

    def __call__(self, v):
        for piece in self.pieces:
            if piece.contains(v):
                return piece.offset + self.orientation * piece.slope * v
        raise ValueError(f"{v} is outside every piece")


@dataclass
class SegmentFixedPoint:
    """A fixed point, or with ``interval`` set, a whole arc of fixed points.

    ``interval`` is (lo, hi) in log-radius, None meaning unbounded; ``point``
    is then a representative interior point.
    """

    point: BerkPoint
    fixed_class: FixedPointClass
    interval: tuple | None = None


def segment_model(F: TwistedMap) -> SegmentMapModel:
    """Piecewise-affine model of F on [0, inf], or SegmentNotInvariant."""
    lam = F.lam
    breaks_w = set()
    for p in (F.num, F.den):
        for r, _ in _known_root_valuations(p):
            if r is not INF:
                breaks_w.add(Fraction(r))
    breaks = sorted(w / lam for w in breaks_w)
    bounds = [None] + breaks + [None]
    pieces = []
    signs = set()
    for lo, hi in zip(bounds, bounds[1:]):
        if lo is None and hi is None:
            v0 = Fraction(0)
        elif lo is None:
            v0 = hi - 1
        elif hi is None:
            v0 = lo + 1
        else:
            v0 = (lo + hi) / 2
        w0 = lam * v0
        g_n, dom_n = F.num.gauss_data(w0)
        g_d, dom_d = F.den.gauss_data(w0)
        k = dom_n[0] - dom_d[0]
        if k == 0:
            raise SegmentNotInvariant(f"the arc near [0; {v0}] is not mapped along the segment")
        sign = 1 if k > 0 else -1
        signs.add(sign)
        slope = lam * abs(k)
        offset = (g_n - g_d) - k * w0
        pieces.append(SegmentPiece(lo, hi, slope, Fraction(offset)))
    if len(signs) != 1:
        raise SegmentNotInvariant("the map folds the segment back on itself")
    model = SegmentMapModel(breaks, pieces, signs.pop())
    for v in breaks + [piece_sample(p) for p in pieces]:
        expected = BerkPoint.ball(0, model(v))
        if F.image_point(BerkPoint.ball(0, v)) != expected:
            raise SegmentNotInvariant(f"[0; {v}] leaves the segment")
    ends = {F.image_point(BerkPoint.classical(0)), F.image_point(BerkPoint.infinity())}
    if ends != {BerkPoint.classical(0), BerkPoint.infinity()}:
        raise SegmentNotInvariant("0 and inf are not fixed or swapped")
    return model


def piece_sample(piece: SegmentPiece) -> Fraction:
    if piece.lo is None and piece.hi is None:
        return Fraction(0)
    if piece.lo is None:
        return piece.hi - 1
    if piece.hi is None:
        return piece.lo + 1
    return (piece.lo + piece.hi) / 2


def fixed_points_on_invariant_segment(F: TwistedMap):
    model = segment_model(F)
    isolated = []
    arcs = []
    for piece in model.pieces:
        rate = model.orientation * piece.slope
        if rate == 1:
            if piece.offset == 0:
                arcs.append(piece)
            continue
        v = piece.offset / (1 - rate)
        if piece.contains(v):
            isolated.append(v)
    inside_arc = lambda v: any(
        (a.lo is None or v > a.lo) and (a.hi is None or v < a.hi) for a in arcs
    )
    out = []
    if model.orientation == 1:
        zero = BerkPoint.classical(0)
        out.append((INF, SegmentFixedPoint(zero, classify_fixed(F, zero))))
    for v in dict.fromkeys(isolated):
        if inside_arc(v):
            continue
        p = BerkPoint.ball(0, v)
        out.append((v, SegmentFixedPoint(p, classify_fixed(F, p))))
    for arc in arcs:
        rep = piece_sample(arc)
        p = BerkPoint.ball(0, rep)
        out.append((rep, SegmentFixedPoint(p, classify_fixed(F, p), (arc.lo, arc.hi))))
    if model.orientation == 1:
        inf = BerkPoint.infinity()
        out.append((None, SegmentFixedPoint(inf, classify_fixed(F, inf))))
    # from 0 upward to infinity
    order = lambda item: (0, 0) if item[0] is INF else ((2, 0) if item[0] is None else (1, -item[0]))
    return [rec for _, rec in sorted(out, key=order)]


# -- exceptional points -----------------------------------------------------------------
@dataclass
class ExceptionalReport:
    point: BerkPoint
    is_exceptional: bool | None
    orbit_found: list
    bound: int


def is_exceptional(F: TwistedMap, x: BerkPoint, bound: int = 8) -> ExceptionalReport:
    """Breadth-first search of the grand orbit of a classical point.

    A closed grand orbit has at most two points, so finding a third point
    settles the question negatively.
    """
    if not x.is_classical:
        raise ValueError("exceptional points are classical")
    seen = [x]
    queue = deque([x])
    budget = bound
    while queue:
        if budget <= 0:
            return ExceptionalReport(x, None, seen, bound)
        budget -= 1
        p = queue.popleft()
        try:
            nbrs = [F.eval_classical(p)] + [q for q, _ in F.preimages(p)]
        except ExtensionRequired:
            return ExceptionalReport(x, None, seen, bound)
        for q in nbrs:
            if not any(same_point(q, s) for s in seen):
                seen.append(q)
                queue.append(q)
                if len(seen) > 2:
                    return ExceptionalReport(x, False, seen, bound)
    return ExceptionalReport(x, True, seen, bound)
