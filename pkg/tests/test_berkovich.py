from fractions import Fraction

import pytest
from hypothesis import assume, given

from twistdyn.berkovich import (
    BerkPoint,
    Direction,
    convex_hull,
    direction_of,
    dominates,
    format_point,
    hyp_distance,
    join,
    spherical_logdist,
    tau_apply_point,
)
from twistdyn.errors import InfiniteDistance, SamePoint
from twistdyn.gamma import gamma
from twistdyn.puiseux import Tau

from conftest import ball_points, pt, taus

GAUSS = BerkPoint.gauss()


@pytest.mark.parametrize(
    "a, b, expected",
    [("[0;1]", "[t^-1;3]", "[0;-1]"), ("[0;1]", "[t;2]", "[0;1]"), ("[0;0]", "[0;0]", "[0;0]")],
)
def test_join(a, b, expected):
    assert join(pt(a), pt(b)) == pt(expected)


@pytest.mark.parametrize(
    "a, b, expected",
    [("[0;0]", "[0;1]", 1), ("[0;1]", "[t;2]", 1), ("[i*t^(-1/2);0]", "[-i*t^(-1/2);0]", 1)],
)
def test_hyp_distance(a, b, expected):
    assert hyp_distance(pt(a), pt(b)) == expected


def test_hyp_distance_rejects_classical_points():
    with pytest.raises(InfiniteDistance):
        hyp_distance(pt("[0]"), GAUSS)


def test_ball_equality_is_canonical():
    assert pt("[t;1]") == pt("[0;1]")
    assert pt("[t;2]") != pt("[0;2]")
    assert pt("[1 + t^3; 2]") == pt("[1; 2]")


def test_type_three_points():
    p = BerkPoint.ball(0, gamma(0, 1))
    assert p.is_type_iii and not p.is_type_ii
    assert format_point(p) == "[0; a]"
    assert pt("[0; 1 + 1/2a]").v == gamma(1, Fraction(1, 2))


@pytest.mark.parametrize(
    "target, residue",
    [("[0]", 0), ("[inf]", None), ("[1+t]", 1)],
)
def test_direction_of(target, residue):
    assert direction_of(GAUSS, pt(target)) == Direction(GAUSS, residue)


def test_direction_of_same_point():
    with pytest.raises(SamePoint):
        direction_of(GAUSS, GAUSS)


def test_spherical_logdist():
    assert spherical_logdist(pt("[t]"), pt("[2*t]")) == 1
    # sigma(t^-1, 0) = 1: the points lie in different residue classes of P^1
    assert spherical_logdist(pt("[t^-1]"), pt("[0]")) == 0
    with pytest.raises(SamePoint):
        spherical_logdist(pt("[1]"), pt("[1]"))


@pytest.mark.parametrize(
    "lam, before, after",
    [(2, "[t;1]", "[t^2;2]"), (Fraction(1, 3), "[0;0]", "[0;0]"), (Fraction(1, 2), "[0;4]", "[0;2]")],
)
def test_tau_apply_point(lam, before, after):
    assert tau_apply_point(Tau(Fraction(lam), "1"), pt(before)) == pt(after)


def test_hull_of_segment_flags_ideal_ends():
    tree = convex_hull([pt("[0]"), pt("[inf]")])
    assert len(tree.vertices) == 2
    assert all(tree.ideal(i) for i in range(2))


def test_hull_adds_join():
    a, b = pt("[i*t^(-1/2);0]"), pt("[-i*t^(-1/2);0]")
    tree = convex_hull([a, b])
    assert set(tree.vertices) == {a, b, pt("[0;-1/2]")}
    assert sorted(length for _, _, length in tree.edges()) == [Fraction(1, 2), Fraction(1, 2)]


def test_single_vertex_hull_and_dot_export():
    tree = convex_hull([GAUSS])
    assert tree.vertices == [GAUSS]
    assert "[0; 0]" in tree.to_dot()


# -- properties -----------------------------------------------------------------------
@given(ball_points(), ball_points())
def test_join_commutes_and_dominates(a, b):
    j = join(a, b)
    assert j == join(b, a)
    assert dominates(j, a) and dominates(j, b)
    assert join(a, a) == a


@given(ball_points(), ball_points(), ball_points())
def test_hyp_distance_metric(a, b, c):
    assert hyp_distance(a, b) == hyp_distance(b, a) >= 0
    assert hyp_distance(a, c) <= hyp_distance(a, b) + hyp_distance(b, c)


@given(ball_points(), ball_points())
def test_distance_additive_through_join(a, b):
    j = join(a, b)
    assert hyp_distance(a, b) == hyp_distance(a, j) + hyp_distance(j, b)


@given(taus, ball_points(), ball_points())
def test_tau_scales_distance(tau, a, b):
    assert hyp_distance(tau_apply_point(tau, a), tau_apply_point(tau, b)) == tau.lam * hyp_distance(a, b)


@given(taus, ball_points())
def test_tau_keeps_the_zero_infinity_segment(tau, a):
    on_segment = BerkPoint.ball(0, a.v)
    assert tau_apply_point(tau, on_segment).center.is_zero()


@given(taus, ball_points(), ball_points())
def test_tau_scales_spherical_distance(tau, a, b):
    x, y = BerkPoint.classical(a.center), BerkPoint.classical(b.center)
    assume(x != y)
    lhs = spherical_logdist(tau_apply_point(tau, x), tau_apply_point(tau, y))
    assert lhs == tau.lam * spherical_logdist(x, y)
