from fractions import Fraction
from itertools import product

import pytest

from twistdyn.berkovich import dominates, hyp_distance
from twistdyn.dynamics import orbit
from twistdyn.errors import HypothesisViolated, SimpleMap
from twistdyn.trucco import base_point, escape_distance, is_full_shift, levels, shift_code

from conftest import pt, twisted

QUADRATIC = ("z^2 + t^-1",)


def test_base_point_of_quadratic():
    base = base_point(twisted(*QUADRATIC))
    assert (base.point, base.image, base.step) == (pt("[0;-1/2]"), pt("[0;-1]"), Fraction(1, 2))


def test_base_point_pulled_back_by_the_twist():
    base = base_point(twisted("z^2 + t^-1", lam=Fraction(3, 4)))
    assert base.point == pt("[0;-2/3]")
    assert base.image == pt("[0;-1]")


def test_base_point_recentred_at_barycenter():
    # (z - 1)^2 + t^-1 is the quadratic above conjugated by a unit translation
    base = base_point(twisted("z^2 - 2*z + 1 + t^-1"))
    assert base.point == pt("[1;-1/2]")


@pytest.mark.parametrize("num", ["z^2", "z^2 + z", "t*z^2"])
def test_simple_maps(num):
    with pytest.raises(SimpleMap):
        base_point(twisted(num))


def test_rational_maps_rejected():
    with pytest.raises(HypothesisViolated):
        base_point(twisted("z^2", "z + 1"))


def test_first_levels():
    tree = levels(twisted(*QUADRATIC), 3)
    assert [len(level) for level in tree.levels] == [1, 2, 4, 8]
    assert [p.point for p in tree.levels[1]] == [pt("[i*t^(-1/2);0]"), pt("[-i*t^(-1/2);0]")]
    assert [p.label for p in tree.levels[1]] == [1, 2]
    assert tree.unramified_level == 1
    assert tree.critical_escape == {pt("[0]"): 1}


def test_levels_of_simple_map():
    with pytest.raises(SimpleMap):
        levels(twisted("z^2"), 2)


def test_shift_code_depths():
    tree = levels(twisted(*QUADRATIC), 3)
    assert shift_code(tree, 0) == {pt("[0;-1/2]"): ()}
    assert shift_code(tree, 1) == {pt("[i*t^(-1/2);0]"): (1,), pt("[-i*t^(-1/2);0]"): (2,)}
    words = shift_code(tree, 3)
    assert sorted(words.values()) == sorted(product((1, 2), repeat=3))
    assert is_full_shift(words, 2, 3)


def test_words_shift_under_the_map():
    F = twisted(*QUADRATIC)
    tree = levels(F, 3)
    by_point = {}
    for n in range(4):
        by_point.update(shift_code(tree, n))
    for n in range(1, 4):
        for i, lp in enumerate(tree.levels[n]):
            word = tree.word(n, i)
            assert by_point[F(lp.point)] == word[1:]


def test_level_invariants():
    F = twisted(*QUADRATIC)
    tree = levels(F, 4)
    zeta = tree.base.point
    for n in range(1, 5):
        per_parent = {}
        for lp in tree.levels[n]:
            assert dominates(zeta, lp.point)
            assert F(lp.point) == tree.levels[n - 1][lp.parent].point
            per_parent[lp.parent] = per_parent.get(lp.parent, 0) + lp.degree
        assert set(per_parent.values()) == {2}
    for p in tree.hull.vertices:
        assert tree.hull.contains_point(p)


def test_escape_rate_formula():
    F = twisted(*QUADRATIC)
    base = base_point(F)
    points = orbit(F, base.point, 10)
    for n, p in enumerate(points):
        assert hyp_distance(base.point, p) == escape_distance(F, base, n) == Fraction(2 ** n - 1, 2)


def test_dot_and_json_exports():
    tree = levels(twisted(*QUADRATIC), 2)
    data = tree.to_json()
    assert data["base_point"] == "[0; -1/2]"
    assert [len(level) for level in data["levels"]] == [1, 2, 4]
    assert data["levels"][2][0]["word"] == [1, 1]
    dot = tree.to_dot()
    assert dot.startswith("graph trucco {") and "1/2" in dot
