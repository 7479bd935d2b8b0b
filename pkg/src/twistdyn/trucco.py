"""Base points, level sets and shift coding for twisted polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .berkovich import (
    BerkPoint,
    FiniteTree,
    convex_hull,
    direction_of,
    dominates,
    format_point,
    hyp_distance,
    tau_apply_point,
)
from .errors import ExtensionRequired, HypothesisViolated, SimpleMap
from .parallel import fibres
from .polynomial import PolyOverK
from .twisted import TwistedMap


@dataclass(frozen=True)
class BasePoint:
    point: BerkPoint
    image: BerkPoint
    step: Fraction


@dataclass(frozen=True)
class LevelPoint:
    point: BerkPoint
    degree: int
    parent: int | None
    label: int


@dataclass
class TruccoTree:
    base: BasePoint
    levels: list
    hull: FiniteTree
    critical_escape: dict = field(default_factory=dict)
    unramified_level: int | None = None
    depth_reached: int = 0

    def word(self, n: int, index: int) -> tuple:
        """Itinerary (chi(x), chi(F x), ..., chi(F^(n-1) x)) of the index-th point of level n."""
        out = []
        level, i = n, index
        while level > 0:
            pt = self.levels[level][i]
            out.append(pt.label)
            i = pt.parent
            level -= 1
        return tuple(out)

    def to_json(self):
        return {
            "base_point": format_point(self.base.point),
            "image": format_point(self.base.image),
            "step": str(self.base.step),
            "levels": [
                [
                    {
                        "point": format_point(p.point),
                        "degree": p.degree,
                        "parent": p.parent,
                        "label": p.label,
                        "word": list(self.word(n, i)),
                    }
                    for i, p in enumerate(level)
                ]
                for n, level in enumerate(self.levels)
            ],
            "unramified_level": self.unramified_level,
            "critical_escape": {format_point(k): v for k, v in self.critical_escape.items()},
            "hull": self.hull.to_json(),
        }

    def to_dot(self, name="trucco") -> str:
        palette = ["black", "red", "blue", "darkgreen", "orange", "purple", "brown"]
        colors = {}
        for n, level in enumerate(self.levels):
            for p in level:
                colors.setdefault(self.hull.index[p.point], palette[n % len(palette)])
        return self.hull.to_dot(name, colors)


def _require_polynomial(F: TwistedMap):
    if not F.is_polynomial:
        raise HypothesisViolated("base points are defined for twisted polynomials")
    if F.degree < 2:
        raise HypothesisViolated("base points need degree at least 2")


def untwisted_base_point(F: TwistedMap) -> BerkPoint:
    """Smallest disk around the barycenter outside which the polynomial escapes."""
    d = F.degree
    P = F.num * F.den.c[0].inverse()
    lead = P.c[d]
    c = -P.c[d - 1] / (lead * d)
    b = (P - PolyOverK([c])).taylor_shift(c)
    vd = b.c[d].valuation()
    v_expand = -vd / (d - 1)
    v_spread = None
    for k in range(d):
        if b.c[k].has_terms():
            cand = (b.c[k].valuation() - vd) / (d - k)
            v_spread = cand if v_spread is None else min(v_spread, cand)
    if v_spread is None or v_spread >= v_expand:
        raise SimpleMap("the polynomial has a totally invariant disk: its Julia set is one point")
    return BerkPoint.ball(c, v_spread)


def base_point(F: TwistedMap) -> BasePoint:
    _require_polynomial(F)
    zeta_p = untwisted_base_point(F)
    zeta = tau_apply_point(F.tau.inverse(), zeta_p)
    image = F.image_point(zeta)
    if image == zeta:
        raise SimpleMap(f"{zeta} is totally invariant")
    if not dominates(image, zeta):
        raise HypothesisViolated(f"the image {image} of {zeta} does not lie above it")
    if F.local_degree(zeta) != F.degree:
        raise HypothesisViolated(f"local degree at {zeta} is not {F.degree}")
    fibre = F.preimages(image)
    if [p for p, _ in fibre] != [zeta]:
        raise HypothesisViolated(f"the fibre of {image} is not the single point {zeta}")
    first = [p for p, _ in F.preimages(zeta)]
    if len(first) < 2:
        raise HypothesisViolated("the first level has a single point")
    if len({direction_of(zeta, p) for p in first}) < 2:
        raise HypothesisViolated("the first level lies in a single direction")
    for p in first:
        for q in first:
            if p != q and dominates(zeta, q) and dominates(q, p) and q != zeta:
                raise HypothesisViolated("first-level points are nested")
    return BasePoint(zeta, image, hyp_distance(zeta, image))


def critical_escape_times(F: TwistedMap, zeta: BerkPoint, cap: int = 32):
    """First iterate at which each finite critical point leaves the disk of zeta (None if not by cap)."""
    out = {}
    for crit, _ in F.critical_points():
        if crit.is_infinity:
            continue
        x = crit
        escaped = None
        for k in range(cap + 1):
            if x.is_infinity or not dominates(zeta, x):
                escaped = k
                break
            x = F.eval_classical(x)
        out[crit] = escaped
    return out


def levels(F: TwistedMap, N: int, escape_cap: int = 32, jobs: int = 1) -> TruccoTree:
    """Level sets L_0..L_N of preimages of the base point.

    If a fibre needs a field extension the tree is returned up to the last
    complete level and the exception carries it in ``partial``.
    """
    base = base_point(F)
    zeta = base.point
    levels_out = [[LevelPoint(zeta, F.degree, None, 1)]]
    unramified = None
    for n in range(1, N + 1):
        current = []
        ramified = False
        try:
            found = fibres(F, [parent.point for parent in levels_out[-1]], jobs)
            for i, fibre in enumerate(found):
                for label, (p, k) in enumerate(fibre, start=1):
                    current.append(LevelPoint(p, k, i, label))
                    ramified |= k > 1
        except ExtensionRequired as exc:
            tree = _assemble(F, base, levels_out, unramified, escape_cap)
            exc.partial = tree
            exc.depth = n - 1
            raise
        levels_out.append(current)
        if unramified is None and not ramified:
            unramified = n
    return _assemble(F, base, levels_out, unramified, escape_cap)


def _assemble(F, base, levels_out, unramified, escape_cap):
    pts = list(dict.fromkeys(p.point for level in levels_out for p in level))
    hull = convex_hull(pts)
    escape = critical_escape_times(F, base.point, escape_cap)
    return TruccoTree(base, levels_out, hull, escape, unramified, len(levels_out) - 1)


def shift_code(tree: TruccoTree, depth: int):
    """{point: word} for every point of the given level."""
    if depth > tree.depth_reached:
        raise ValueError(f"levels are only known to depth {tree.depth_reached}")
    return {p.point: tree.word(depth, i) for i, p in enumerate(tree.levels[depth])}


def is_full_shift(table: dict, d: int, depth: int) -> bool:
    words = list(table.values())
    return len(set(words)) == len(words) and set(words) == set(product(range(1, d + 1), repeat=depth))


def escape_distance(F: TwistedMap, base: BasePoint, n: int):
    """rho(zeta, F^n zeta) predicted from the first step."""
    rate = F.lam * F.degree
    return sum(rate ** j for j in range(n)) * base.step
