"""Points of the Berkovich projective line, tree order, metric, directions and hulls.

Ball points are ``[center; v]`` where ``v`` is minus the log of the radius,
so larger ``v`` means a smaller disk.  Centers are canonical: every term at
or beyond t^v is dropped, which makes equality syntactic.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coefficients import Coeff
from .errors import InfiniteDistance, PrecisionLoss, SamePoint, SpecSyntaxError
from .gamma import INF, GammaElem, format_gamma, is_rational, parse_gamma
from .puiseux import PuiseuxNumber, Tau


class BerkPoint:
    """A point of type I (``v is INF``), II (rational v) or III (irrational v)."""

    __slots__ = ("center", "v", "_hash")

    def __init__(self, center, v):
        self.center = center
        self.v = v
        self._hash = None

    # -- constructors --------------------------------------------------------
    @classmethod
    def classical(cls, x) -> "BerkPoint":
        if isinstance(x, str) and x == "inf":
            return cls(None, INF)
        return cls(PuiseuxNumber.coerce(x), INF)

    @classmethod
    def infinity(cls) -> "BerkPoint":
        return cls(None, INF)

    @classmethod
    def ball(cls, center, v) -> "BerkPoint":
        if v is INF:
            return cls.classical(center)
        if not isinstance(v, GammaElem):
            v = Fraction(v)
        return cls(PuiseuxNumber.coerce(center).below(v), v)

    @classmethod
    def gauss(cls) -> "BerkPoint":
        return cls.ball(0, 0)

    @classmethod
    def parse(cls, text: str) -> "BerkPoint":
        return parse_point(text)

    # -- predicates --------------------------------------------------------
    @property
    def is_classical(self) -> bool:
        return self.v is INF

    @property
    def is_infinity(self) -> bool:
        return self.center is None

    @property
    def is_type_ii(self) -> bool:
        return self.v is not INF and is_rational(self.v)

    @property
    def is_type_iii(self) -> bool:
        return isinstance(self.v, GammaElem)

    @property
    def kind(self) -> str:
        if self.is_classical:
            return "I"
        return "II" if self.is_type_ii else "III"

    def __eq__(self, other):
        if not isinstance(other, BerkPoint):
            return NotImplemented
        return self.center == other.center and self.v == other.v

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.center, self.v))
        return self._hash

    def __reduce__(self):
        return (BerkPoint, (self.center, self.v))

    def dfs_key(self):
        """Sort key placing every subtree contiguously, ancestors first."""
        if self.is_infinity:
            return ((), 0, 0)
        seq = tuple((-e, c.sort_key()) for e, c in self.center.terms)
        v = self.v
        vkey = (1, 0, 0) if v is INF else (0,) + GammaElem.parts(v)
        return (1, seq, vkey)

    def sort_key(self):
        """Label order: center terms lexicographically, then v."""
        if self.is_infinity:
            return (1, (), (0,))
        terms = tuple((e, c.sort_key()) for e, c in self.center.terms)
        vkey = (1,) if self.v is INF else (0,) + GammaElem.parts(self.v)
        return (0, terms, vkey)

    def __str__(self):
        return format_point(self)

    def __repr__(self):
        return f"BerkPoint({format_point(self)!r})"


def format_point(p: BerkPoint) -> str:
    if p.is_infinity:
        return "[inf]"
    if p.is_classical:
        return f"[{p.center}]"
    return f"[{p.center}; {format_gamma(p.v)}]"


def parse_point(text: str) -> BerkPoint:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise SpecSyntaxError("a point must be written in brackets", 1, 1)
    body = s[1:-1]
    if ";" in body:
        center, v = body.split(";", 1)
        try:
            gv = parse_gamma(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecSyntaxError(f"bad log-radius '{v.strip()}'", 1, body.index(";") + 3) from exc
        return BerkPoint.ball(PuiseuxNumber.parse(center), gv)
    if body.strip() == "inf":
        return BerkPoint.infinity()
    return BerkPoint.classical(PuiseuxNumber.parse(body))


# -- order and metric ---------------------------------------------------------

def _valuation_capped(x: PuiseuxNumber, cap):
    """min(val(x), cap), decided with the available precision."""
    if x.has_terms():
        e = x.terms[0][0]
        if e < cap:
            return e
    if x.is_exact or (cap is not INF and x.prec >= cap):
        return cap
    raise PrecisionLoss(f"cannot compare valuation of {x} with {cap}")


def dominates(a: BerkPoint, b: BerkPoint) -> bool:
    """a >= b in the tree order (b lies in the closed disk of a)."""
    if a.is_infinity:
        return True
    if b.is_infinity:
        return False
    if a.is_classical:
        return b == a if b.is_classical else False
    if b.v < a.v:
        return False
    return _valuation_capped(b.center - a.center, a.v) >= a.v


def join(a: BerkPoint, b: BerkPoint) -> BerkPoint:
    if a.is_infinity or b.is_infinity:
        return BerkPoint.infinity()
    cap = min(a.v, b.v)
    v = _valuation_capped(a.center - b.center, cap)
    if v is INF:
        return a
    return BerkPoint.ball(a.center, v)


def hyp_distance(a: BerkPoint, b: BerkPoint):
    if a.is_classical or b.is_classical:
        raise InfiniteDistance("classical points are at infinite distance")
    return a.v + b.v - 2 * join(a, b).v


def spherical_logdist(x: BerkPoint, y: BerkPoint):
    """-log of the spherical distance between classical points."""
    if not (x.is_classical and y.is_classical):
        raise ValueError("spherical distance is defined on classical points")
    if x == y:
        raise SamePoint("spherical distance of a point to itself")
    if x.is_infinity:
        x, y = y, x
    vx = x.center.valuation()
    if y.is_infinity:
        return -min(Fraction(0), vx) if vx is not INF else Fraction(0)
    vy = y.center.valuation()
    diff = (x.center - y.center).valuation()
    if diff is INF:
        raise SamePoint("spherical distance of a point to itself")
    low = lambda val: Fraction(0) if val is INF else min(Fraction(0), val)
    return diff - low(vx) - low(vy)


def tau_apply_point(tau: Tau, p: BerkPoint) -> BerkPoint:
    if p.is_infinity:
        return p
    c = tau.apply(p.center)
    if p.is_classical:
        return BerkPoint.classical(c)
    return BerkPoint.ball(c, p.v * tau.lam)


# -- directions ---------------------------------------------------------------

class Direction:
    """A tangent direction at a type II point: toward infinity or a residue class."""

    __slots__ = ("at", "residue")

    def __init__(self, at: BerkPoint, residue=None):
        if not at.is_type_ii:
            raise ValueError("residue directions exist only at type II points")
        self.at = at
        self.residue = None if residue is None else (residue if isinstance(residue, Coeff) else Coeff(residue))

    @property
    def toward_infinity(self) -> bool:
        return self.residue is None

    def sample_point(self, eps) -> BerkPoint:
        """The point at distance eps from ``at`` inside this direction."""
        if self.residue is None:
            return BerkPoint.ball(self.at.center, self.at.v - eps)
        c = self.at.center + PuiseuxNumber.monomial(self.residue, self.at.v)
        return BerkPoint.ball(c, self.at.v + eps)

    def center(self) -> PuiseuxNumber:
        """A classical point of this direction (None toward infinity)."""
        if self.residue is None:
            return None
        return self.at.center + PuiseuxNumber.monomial(self.residue, self.at.v)

    def contains(self, p: BerkPoint) -> bool:
        if p == self.at:
            return False
        try:
            return direction_of(self.at, p) == self
        except SamePoint:
            return False

    def __eq__(self, other):
        return isinstance(other, Direction) and self.at == other.at and self.residue == other.residue

    def __hash__(self):
        return hash((self.at, self.residue))

    def label(self) -> str:
        return "inf" if self.residue is None else str(self.residue)

    def __repr__(self):
        return f"Direction({self.at}, {self.label()})"


def direction_of(xi: BerkPoint, target: BerkPoint) -> Direction:
    if not xi.is_type_ii:
        raise ValueError("direction_of needs a type II base point")
    if target == xi:
        raise SamePoint("target coincides with the base point")
    if not dominates(xi, target):
        return Direction(xi, None)
    diff = target.center - xi.center
    return Direction(xi, diff.coefficient(xi.v))


# -- finite trees -----------------------------------------------------------

class FiniteTree:
    """A finite rooted subtree; ``parent[i]`` is the index of the vertex above i."""

    def __init__(self, vertices, parent):
        self.vertices = list(vertices)
        self.parent = list(parent)
        self.index = {p: i for i, p in enumerate(self.vertices)}

    @property
    def root(self) -> int:
        return self.parent.index(None)

    def edges(self):
        out = []
        for i, j in enumerate(self.parent):
            if j is not None:
                out.append((j, i, edge_length(self.vertices[j], self.vertices[i])))
        return out

    def children(self, i):
        return [k for k, j in enumerate(self.parent) if j == i]

    def neighbors(self, i):
        out = self.children(i)
        if self.parent[i] is not None:
            out.append(self.parent[i])
        return out

    def ideal(self, i) -> bool:
        return self.vertices[i].is_classical

    def contains_point(self, p: BerkPoint) -> bool:
        return self.locate(p) is not None

    def locate(self, p: BerkPoint):
        """(child, parent) of the edge carrying p, (i, None) for a vertex, or None."""
        if p in self.index:
            return (self.index[p], None)
        for i, j in enumerate(self.parent):
            if j is None:
                continue
            lo, hi = self.vertices[i], self.vertices[j]
            if dominates(hi, p) and dominates(p, lo):
                return (i, j)
        return None

    def projection(self, p: BerkPoint) -> BerkPoint:
        """The retraction of p onto the tree."""
        root = self.vertices[self.root]
        if not dominates(root, p):
            return root
        best = root
        for i, j in enumerate(self.parent):
            if j is None or not dominates(self.vertices[j], p):
                continue
            cand = join(p, self.vertices[i])
            if _vkey(cand) > _vkey(best):
                best = cand
        return best

    def to_json(self):
        return {
            "vertices": [format_point(p) for p in self.vertices],
            "edges": [
                {"from": format_point(self.vertices[a]), "to": format_point(self.vertices[b]),
                 "length": format_gamma(length)}
                for a, b, length in self.edges()
            ],
        }

    def to_dot(self, name="tree", colors=None) -> str:
        lines = [f"graph {name} {{"]
        for i, p in enumerate(self.vertices):
            attrs = [f"label={json.dumps(format_point(p))}"]
            if colors and i in colors:
                attrs.append(f"color={json.dumps(colors[i])}")
            if p.is_classical:
                attrs.append("shape=point")
            lines.append(f"  v{i} [{', '.join(attrs)}];")
        for a, b, length in self.edges():
            lines.append(f"  v{a} -- v{b} [label={json.dumps(format_gamma(length))}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _vkey(p):
    if p.is_infinity:
        return (0, 0)
    return (1, p.v)


def edge_length(upper: BerkPoint, lower: BerkPoint):
    if upper.is_infinity or lower.is_classical:
        return INF
    return lower.v - upper.v


def convex_hull(points) -> FiniteTree:
    """Hull of the given points, closed under joins, as a rooted tree."""
    pts = list(dict.fromkeys(points))
    if not pts:
        raise ValueError("hull of an empty set")
    has_inf = any(p.is_infinity for p in pts)
    finite = sorted((p for p in pts if not p.is_infinity), key=BerkPoint.dfs_key)
    extra = [join(a, b) for a, b in zip(finite, finite[1:])]
    allpts = list(dict.fromkeys(finite + [p for p in extra if not p.is_infinity]))
    allpts.sort(key=BerkPoint.dfs_key)
    vertices, parent = [], []
    if has_inf:
        vertices.append(BerkPoint.infinity())
        parent.append(None)
    stack = []
    for p in allpts:
        while stack and not dominates(vertices[stack[-1]], p):
            stack.pop()
        idx = len(vertices)
        vertices.append(p)
        if stack:
            parent.append(stack[-1])
        else:
            parent.append(0 if has_inf else None)
        stack.append(idx)
    tree = FiniteTree(vertices, parent)
    if sum(1 for j in parent if j is None) != 1:
        raise AssertionError("hull construction produced a forest")
    return tree
