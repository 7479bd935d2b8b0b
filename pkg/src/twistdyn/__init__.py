"""Dynamics of twisted rational maps on the Berkovich projective line over Puiseux series."""

from .berkovich import BerkPoint, Direction, FiniteTree, convex_hull, format_point, hyp_distance, join, parse_point
from .coefficients import Coeff
from .dynamics import classify_fixed, fixed_points_on_invariant_segment, is_exceptional, orbit
from .gamma import GammaElem, gamma
from .mapspec import MapSpec, parse_spec
from .measure import AtomicMeasure, TreeFunction, equidistribution_run, tree_laplacian
from .polynomial import PolyOverK
from .puiseux import PuiseuxNumber, Tau
from .trucco import base_point, levels, shift_code
from .twisted import TwistedMap

__all__ = [
    "AtomicMeasure",
    "BerkPoint",
    "Coeff",
    "Direction",
    "FiniteTree",
    "GammaElem",
    "MapSpec",
    "PolyOverK",
    "PuiseuxNumber",
    "Tau",
    "TreeFunction",
    "TwistedMap",
    "base_point",
    "classify_fixed",
    "convex_hull",
    "equidistribution_run",
    "fixed_points_on_invariant_segment",
    "format_point",
    "gamma",
    "hyp_distance",
    "is_exceptional",
    "join",
    "levels",
    "orbit",
    "parse_point",
    "parse_spec",
    "shift_code",
    "tree_laplacian",
]
