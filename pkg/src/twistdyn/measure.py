"""Atomic measures, tree functions, Laplacians, pullbacks and equidistribution."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .berkovich import (
    BerkPoint,
    FiniteTree,
    convex_hull,
    direction_of,
    format_point,
    hyp_distance,
)
from .dynamics import is_exceptional
from .errors import ExceptionalStart, ExtensionRequired, HypothesisViolated
from .gamma import format_gamma
from .parallel import fibres
from .twisted import TwistedMap


class AtomicMeasure:
    """Finitely many weighted points; zero weights are dropped."""

    __slots__ = ("atoms",)

    def __init__(self, atoms=()):
        merged = {}
        items = atoms.items() if isinstance(atoms, dict) else atoms
        for p, w in items:
            merged[p] = merged.get(p, Fraction(0)) + Fraction(w)
        self.atoms = {p: w for p, w in merged.items() if w}

    @classmethod
    def dirac(cls, p: BerkPoint, weight=1) -> "AtomicMeasure":
        return cls([(p, weight)])

    def total_mass(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def support(self):
        return sorted(self.atoms, key=BerkPoint.sort_key)

    def is_positive(self) -> bool:
        return all(w > 0 for w in self.atoms.values())

    def __add__(self, other):
        return AtomicMeasure(list(self.atoms.items()) + list(other.atoms.items()))

    def __neg__(self):
        return AtomicMeasure({p: -w for p, w in self.atoms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "AtomicMeasure":
        return AtomicMeasure({p: w * c for p, w in self.atoms.items()})

    def integrate(self, h) -> Fraction:
        return sum((w * h(p) for p, w in self.atoms.items()), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, AtomicMeasure) and self.atoms == other.atoms

    def __len__(self):
        return len(self.atoms)

    def to_json(self):
        return [{"point": format_point(p), "weight": str(self.atoms[p])} for p in self.support()]

    def __repr__(self):
        body = ", ".join(f"{self.atoms[p]}*{p}" for p in self.support())
        return f"AtomicMeasure({body})"


class TreeFunction:
    """A function on a finite tree, affine on each edge between vertex values."""

    def __init__(self, tree: FiniteTree, values):
        self.tree = tree
        if isinstance(values, dict):
            self.values = [Fraction(values[p]) for p in tree.vertices]
        else:
            self.values = [Fraction(x) for x in values]
        if len(self.values) != len(tree.vertices):
            raise ValueError("one value per vertex is required")
        for i in range(len(self.values)):
            if tree.vertices[i].is_classical:
                raise ValueError("tree functions live on trees with type II/III vertices")

    @classmethod
    def from_callable(cls, tree: FiniteTree, fn) -> "TreeFunction":
        return cls(tree, [fn(p) for p in tree.vertices])

    def value_at_vertex(self, p: BerkPoint) -> Fraction:
        return self.values[self.tree.index[p]]

    def __call__(self, p: BerkPoint) -> Fraction:
        """Value at p, through the retraction onto the tree when p is off it."""
        q = p if not p.is_classical and self.tree.contains_point(p) else self.tree.projection(p)
        i, j = self.tree.locate(q)
        if j is None:
            return self.values[i]
        lo, hi = self.tree.vertices[i], self.tree.vertices[j]
        total = hyp_distance(lo, hi)
        part = hyp_distance(q, hi)
        return self.values[j] + (self.values[i] - self.values[j]) * part / total

    def slope(self, i: int, k: int) -> Fraction:
        """Derivative at vertex i toward the adjacent vertex k."""
        a, b = self.tree.vertices[i], self.tree.vertices[k]
        return (self.values[k] - self.values[i]) / hyp_distance(a, b)

    def sup_norm(self) -> Fraction:
        return max(abs(x) for x in self.values)

    def __sub__(self, other):
        if other.tree.vertices != self.tree.vertices:
            raise ValueError("functions live on different trees")
        return TreeFunction(self.tree, [a - b for a, b in zip(self.values, other.values)])

    def to_json(self):
        return {format_point(p): format_gamma(v) for p, v in zip(self.tree.vertices, self.values)}


def tree_laplacian(f: TreeFunction) -> AtomicMeasure:
    tree = f.tree
    out = []
    for i, p in enumerate(tree.vertices):
        out.append((p, sum((f.slope(i, k) for k in tree.neighbors(i)), Fraction(0))))
    return AtomicMeasure(out)


def pullback_measure(F: TwistedMap, mu: AtomicMeasure, jobs: int = 1) -> AtomicMeasure:
    out = []
    support = mu.support()
    for p, fibre in zip(support, fibres(F, support, jobs)):
        for q, k in fibre:
            out.append((q, mu.atoms[p] * k))
    return AtomicMeasure(out)


@dataclass
class PushforwardValue:
    target: BerkPoint
    value: Fraction
    projected: list = field(default_factory=list)


def pushforward_function(F: TwistedMap, H, targets):
    """Weighted fibre sums of H; fibre points off H's tree are recorded as projected."""
    out = []
    for target in targets:
        total = Fraction(0)
        projected = []
        for q, k in F.preimages(target):
            if isinstance(H, TreeFunction) and (q.is_classical or not H.tree.contains_point(q)):
                projected.append(q)
            total += k * H(q)
        out.append(PushforwardValue(target, total, projected))
    return out


def pulled_back_function(F: TwistedMap, f: TreeFunction):
    """f o F on the hull of the preimages of f's vertices."""
    fibre_pts = []
    for p in f.tree.vertices:
        fibre_pts.extend(q for q, _ in F.preimages(p))
    tree = convex_hull(fibre_pts)
    return TreeFunction.from_callable(tree, lambda x: f(F.image_point(x)))


@dataclass
class LaplacianCheck:
    holds: bool
    discrepancy: AtomicMeasure
    left: AtomicMeasure
    right: AtomicMeasure


def laplacian_pullback_check(F: TwistedMap, f: TreeFunction) -> LaplacianCheck:
    """Compare the Laplacian of f o F with lambda times the pullback of the Laplacian of f."""
    left = tree_laplacian(pulled_back_function(F, f))
    right = pullback_measure(F, tree_laplacian(f)).scaled(F.lam)
    diff = left - right
    return LaplacianCheck(len(diff) == 0, diff, left, right)


# -- potentials -------------------------------------------------------------------
def solve_potential(tree: FiniteTree, root: int, rhs: AtomicMeasure) -> TreeFunction:
    """u on the tree with Laplacian rhs (mass 0, supported on vertices) and u(root) = 0.

    Two passes: subtree masses from the leaves up, then integration from the
    root down along D u = -(mass below) on each edge.
    """
    if rhs.total_mass() != 0:
        raise ValueError("a Laplacian has total mass zero")
    n = len(tree.vertices)
    adj = {i: tree.neighbors(i) for i in range(n)}
    order, up = [root], {root: None}
    for i in order:
        for k in adj[i]:
            if k not in up:
                up[k] = i
                order.append(k)
    mass = [rhs.atoms.get(p, Fraction(0)) for p in tree.vertices]
    below = list(mass)
    for i in reversed(order[1:]):
        below[up[i]] += below[i]
    values = [Fraction(0)] * n
    for i in order[1:]:
        j = up[i]
        values[i] = values[j] - below[i] * hyp_distance(tree.vertices[i], tree.vertices[j])
    return TreeFunction(tree, values)


@dataclass
class PotentialData:
    base: TreeFunction
    sequence: list
    tails: list


def potential_sequence(F: TwistedMap, zeta: BerkPoint, n: int) -> PotentialData:
    """u_1..u_n with u_n = sum_j (d lambda)^-j u o F^j on the accumulated tree."""
    d, lam = F.degree, F.lam
    rate = d * lam
    if rate <= 1:
        raise HypothesisViolated(f"potential iteration needs d*lambda > 1, got {rate}")
    if not zeta.is_type_ii:
        raise ValueError("potentials are based at a type II point")
    nu = pullback_measure(F, AtomicMeasure.dirac(zeta)).scaled(Fraction(1, d))
    base_tree = convex_hull([zeta] + nu.support())
    u = solve_potential(base_tree, base_tree.index[zeta], nu - AtomicMeasure.dirac(zeta))
    layer = list(base_tree.vertices)
    pts = list(layer)
    for _ in range(n - 1):
        nxt = []
        for p in layer:
            nxt.extend(q for q, _ in F.preimages(p))
        layer = list(dict.fromkeys(nxt))
        pts.extend(layer)
    tree = convex_hull(pts)
    iterates = [list(tree.vertices)]
    for _ in range(n - 1):
        iterates.append([F.image_point(p) for p in iterates[-1]])
    seq = []
    acc = [Fraction(0)] * len(tree.vertices)
    for j in range(n):
        w = rate ** -j
        acc = [a + w * u(p) for a, p in zip(acc, iterates[j])]
        seq.append(TreeFunction(tree, list(acc)))
    tails = [(seq[k + 1] - seq[k]).sup_norm() for k in range(n - 1)]
    return PotentialData(u, seq, tails)


# -- equidistribution -----------------------------------------------------------------
@dataclass
class LevelReport:
    n: int
    measure: AtomicMeasure
    total_mass: Fraction
    support_tree: FiniteTree | None
    direction_masses: dict


@dataclass
class EquidistributionReport:
    start: BerkPoint
    levels: list
    reference: BerkPoint
    potential_tails: list | None
    note: str = ""

    def to_json(self):
        return {
            "start": format_point(self.start),
            "reference": format_point(self.reference),
            "levels": [
                {
                    "n": lv.n,
                    "total_mass": str(lv.total_mass),
                    "atoms": lv.measure.to_json(),
                    "support_tree": None if lv.support_tree is None else lv.support_tree.to_json(),
                    "direction_masses": {k: str(v) for k, v in lv.direction_masses.items()},
                }
                for lv in self.levels
            ],
            "potential_tails": None if self.potential_tails is None else [format_gamma(x) for x in self.potential_tails],
            "note": self.note,
        }


def direction_masses(mu: AtomicMeasure, at: BerkPoint) -> dict:
    """Mass at the point itself and in each tangent direction there."""
    out = {}
    for p, w in mu.atoms.items():
        if p == at:
            key = "at"
        else:
            key = direction_of(at, p).label()
        out[key] = out.get(key, Fraction(0)) + w
    return dict(sorted(out.items()))


def equidistribution_run(F: TwistedMap, zeta: BerkPoint, N: int, exceptional_bound: int = 16, jobs: int = 1):
    if zeta.is_classical:
        report = is_exceptional(F, zeta, exceptional_bound)
        if report.is_exceptional:
            raise ExceptionalStart(f"{zeta} is exceptional")
    reference = zeta if zeta.is_type_ii else BerkPoint.gauss()
    d = F.degree
    nu = AtomicMeasure.dirac(zeta)
    levels = []
    for n in range(N + 1):
        if n:
            try:
                nu = pullback_measure(F, nu, jobs).scaled(Fraction(1, d))
            except ExtensionRequired as exc:
                exc.depth = n - 1
                exc.partial = levels
                raise
        support = nu.support()
        tree = convex_hull(support) if support else None
        levels.append(LevelReport(n, nu, nu.total_mass(), tree, direction_masses(nu, reference)))
    tails = None
    note = ""
    if zeta.is_type_ii and d * F.lam > 1 and N >= 1:
        tails = potential_sequence(F, zeta, N + 1).tails
    elif d * F.lam <= 1:
        note = "d*lambda <= 1: potentials are not iterated"
    return EquidistributionReport(zeta, levels, reference, tails, note)
