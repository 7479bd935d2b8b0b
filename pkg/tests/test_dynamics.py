from fractions import Fraction

import pytest

from twistdyn.berkovich import BerkPoint, hyp_distance
from twistdyn.dynamics import (
    ATTRACTING,
    INDIFFERENT,
    REPELLING,
    SADDLE,
    classify_fixed,
    fixed_points_on_invariant_segment,
    is_exceptional,
    iterate,
    orbit,
    segment_model,
)
from twistdyn.errors import NotFixed, SegmentNotInvariant

from conftest import pt, twisted

GAUSS = BerkPoint.gauss()


def test_orbit_examples():
    assert orbit(twisted("z^2", lam=2), pt("[0;1]"), 2) == [pt("[0;1]"), pt("[0;4]"), pt("[0;16]")]
    assert orbit(twisted("z^2", lam=Fraction(1, 2)), pt("[0;1]"), 3) == [pt("[0;1]")] * 4
    assert orbit(twisted("z"), GAUSS, 5) == [GAUSS] * 6


@pytest.mark.parametrize(
    "lam, xi, expected",
    [
        (Fraction(1, 4), "[0]", REPELLING),
        (Fraction(1, 4), "[0;0]", ATTRACTING),
        (Fraction(3, 4), "[0;0]", SADDLE),
        (Fraction(1, 2), "[0]", INDIFFERENT),
        (1, "[0;0]", REPELLING),
        (1, "[inf]", ATTRACTING),
        (2, "[0;0]", REPELLING),
    ],
)
def test_classify_square_map(lam, xi, expected):
    assert classify_fixed(twisted("z^2", lam=lam), pt(xi)).variant == expected


def test_saddle_witness_lists_directions():
    witness = classify_fixed(twisted("z^2", lam=Fraction(3, 4)), GAUSS).witness["directions"]
    assert {(w["direction"], w["m"], w["lam_m"]) for w in witness} == {
        ("generic", 1, Fraction(3, 4)),
        ("0", 2, Fraction(3, 2)),
        ("inf", 2, Fraction(3, 2)),
    }


def test_classical_indifferent_decided_by_next_coefficient():
    # lambda * m = 1 at 0, so the valuation of the multiplier decides
    cls = classify_fixed(twisted("2*z"), pt("[0]"))
    assert cls.variant == INDIFFERENT and cls.witness["valuation_b"] == 0
    assert classify_fixed(twisted("t^-1*z + z^2"), pt("[0]")).variant == REPELLING
    assert classify_fixed(twisted("t*z + z^2"), pt("[0]")).variant == ATTRACTING


def test_classify_rejects_moving_point():
    with pytest.raises(NotFixed):
        classify_fixed(twisted("z^2"), pt("[0;1]"))


def test_iterate_classifies_period_two():
    F = twisted("t", "z")
    xi = pt("[0;-1]")
    assert F(xi) != xi
    assert classify_fixed(iterate(F, 2), xi).variant == INDIFFERENT


def test_cubic_ramified_directions():
    cls = classify_fixed(twisted("z^3 + z^2"), GAUSS)
    assert cls.variant == REPELLING
    assert sorted(w["m"] for w in cls.witness["directions"]) == [2, 2, 3]


def test_segment_table_square_map():
    rows = {}
    for lam in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1, 2):
        found = fixed_points_on_invariant_segment(twisted("z^2", lam=lam))
        rows[lam] = [(f.point, f.fixed_class.variant, f.interval) for f in found]
    assert rows[Fraction(1, 4)] == [
        (pt("[0]"), REPELLING, None),
        (GAUSS, ATTRACTING, None),
        (pt("[inf]"), REPELLING, None),
    ]
    # lambda = 1/2: the whole open segment is fixed; its interior points attract along the
    # off-segment directions
    assert rows[Fraction(1, 2)] == [
        (pt("[0]"), INDIFFERENT, None),
        (GAUSS, ATTRACTING, (None, None)),
        (pt("[inf]"), INDIFFERENT, None),
    ]
    assert [r[1] for r in rows[Fraction(3, 4)]] == [ATTRACTING, SADDLE, ATTRACTING]
    assert [r[1] for r in rows[1]] == [ATTRACTING, REPELLING, ATTRACTING]
    assert [r[1] for r in rows[2]] == [ATTRACTING, REPELLING, ATTRACTING]


def test_segment_fixed_point_of_scaled_square():
    found = fixed_points_on_invariant_segment(twisted("t*z^2"))
    balls = [f for f in found if not f.point.is_classical]
    assert [(f.point, f.fixed_class.variant) for f in balls] == [(pt("[0;-1]"), REPELLING)]
    assert twisted("t*z^2")(pt("[0;-1]")) == pt("[0;-1]")


def test_segment_model_pieces():
    model = segment_model(twisted("z^2 + t^2*z"))
    assert model.breakpoints == [Fraction(2)]
    assert model(Fraction(0)) == 0
    assert model(Fraction(3)) == 5
    assert [p.slope for p in model.pieces] == [2, 1]


def test_segment_not_invariant():
    with pytest.raises(SegmentNotInvariant):
        segment_model(twisted("z^2 + 1"))


def test_exceptional_points():
    rep = is_exceptional(twisted("z^2"), pt("[0]"))
    assert rep.is_exceptional is True and rep.orbit_found == [pt("[0]")]
    rep = is_exceptional(twisted("z^2"), pt("[1]"))
    assert rep.is_exceptional is False and len(rep.orbit_found) == 3
    assert is_exceptional(twisted("z^2 + t^-1"), pt("[inf]")).is_exceptional is True


def test_exceptional_budget_exhausted_is_inconclusive():
    assert is_exceptional(twisted("z^2"), pt("[1]"), bound=1).is_exceptional is None


# -- properties -------------------------------------------------------------------------
def test_classical_class_matches_disk_images():
    cases = [("t*z + z^2", 1), ("z^2", 1), ("2*z", 1), ("t^-1*z + z^2", 1), ("z^2", Fraction(1, 4))]
    for num, lam in cases:
        F = twisted(num, lam=lam)
        zero = pt("[0]")
        cls = classify_fixed(F, zero).variant
        for v in (Fraction(20), Fraction(40)):
            out = F(BerkPoint.ball(0, v)).v
            assert {ATTRACTING: out > v, REPELLING: out < v, INDIFFERENT: out == v}[cls]


def test_no_attracting_balls_when_lambda_at_least_one():
    for num in ("z^2", "t*z^2", "t^-1*z^3", "z^3 + t^2*z", "z^2 + t^3*z"):
        for lam in (1, Fraction(3, 2), 2):
            for rec in fixed_points_on_invariant_segment(twisted(num, lam=lam)):
                if not rec.point.is_classical:
                    assert rec.fixed_class.variant in (INDIFFERENT, REPELLING)


def test_distance_growth_is_geometric():
    F = twisted("z^2 + t^-1")
    points = orbit(F, GAUSS, 12)
    A = hyp_distance(points[1], GAUSS) / 2
    for n, p in enumerate(points):
        assert hyp_distance(p, GAUSS) <= A * 2 ** n
