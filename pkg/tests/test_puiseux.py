from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistdyn.coefficients import Coeff
from twistdyn.errors import PrecisionLoss
from twistdyn.gamma import INF, GammaElem, gamma
from twistdyn.polynomial import PolyOverK, count_roots_in_disk, find_roots, newton_root_valuations
from twistdyn.puiseux import PuiseuxNumber, Tau, format_puiseux

from conftest import exact_series, poly, series, taus, twisted


@pytest.mark.parametrize(
    "text, expected",
    [("t^-1 + 2", Fraction(-1)), ("3", Fraction(0))],
)
def test_valuation_is_least_exponent(text, expected):
    assert series(text).valuation() == expected


def test_exact_zero_has_infinite_valuation():
    assert PuiseuxNumber().valuation() is INF


def test_unknown_tail_has_no_valuation():
    with pytest.raises(PrecisionLoss):
        PuiseuxNumber.big_o(3).valuation()


@pytest.mark.parametrize(
    "lam, unit, before, after",
    [
        (2, "1", "t + t^2", "t^2 + t^4"),
        (1, "2", "t", "2*t"),
        (Fraction(1, 2), "1", "t^4", "t^2"),
    ],
)
def test_tau_apply(lam, unit, before, after):
    assert Tau(Fraction(lam), unit).apply(series(before)) == series(after)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("z^2 - t", [(Fraction(1, 2), 2)]),
        ("z^2 - 1", [(Fraction(0), 2)]),
        ("z", [(INF, 1)]),
    ],
)
def test_newton_root_valuations(text, expected):
    assert newton_root_valuations(poly(text)) == expected


@pytest.mark.parametrize(
    "text, v, expected",
    [("z^2 - t", 0, 2), ("z^2 - t", 1, 0), ("z", 5, 1)],
)
def test_count_roots_in_disk(text, v, expected):
    assert count_roots_in_disk(poly(text), PuiseuxNumber(), Fraction(v)) == expected


@pytest.mark.parametrize(
    "num, lam, expected",
    [("z^2 + t", 2, "z^2 + t^2"), ("t^2*z", Fraction(1, 2), "t*z"), ("z^3 - t*z + 5", 1, "z^3 - t*z + 5")],
)
def test_hat_transform(num, lam, expected):
    assert twisted(num).hat(Tau(Fraction(lam), "1")).num == poly(expected)


def test_parse_print_round_trip_with_big_o():
    x = series("-3/2*t^(-1/3) + i*t + sqrt(2)*t^(5/2) + O(t^4)")
    assert series(format_puiseux(x)) == x
    assert x.prec == 4


def test_roots_are_exact_when_possible():
    roots = find_roots(poly("z^2 + t^-1"))
    assert [r for r, _ in roots] == sorted([series("i*t^(-1/2)"), series("-i*t^(-1/2)")], key=PuiseuxNumber.sort_key)
    double = find_roots(poly("(z - t)^2 * (z + 1)"))
    assert sorted(k for _, k in double) == [1, 2]


def test_simple_root_lifted_past_requested_precision():
    (root, k), = [rk for rk in find_roots(poly("z^2 - z - t"), precision=6) if rk[0].valuation() > 0]
    assert k == 1
    # the root of w^2 - w - t near 0 is -t + t^2 - 2t^3 + 5t^4 - 14t^5 + ...
    assert root.truncate(6) == series("-t + t^2 - 2*t^3 + 5*t^4 - 14*t^5").truncate(6)


def test_coefficient_field_products_of_square_roots():
    s2, s3 = Coeff.sqrt_of_rational(2), Coeff.sqrt_of_rational(3)
    assert s2 * s2 == Coeff(2)
    assert (s2 * s3) * (s2 * s3) == Coeff(6)
    assert Coeff.i() * Coeff.i() == Coeff(-1)
    assert (s2 + s3).inverse() * (s2 + s3) == Coeff(1)


def test_gamma_order_with_irrational_part():
    alpha = gamma(0, 1)
    assert gamma(Fraction(7, 5)) < alpha < gamma(Fraction(3, 2))
    assert isinstance(alpha, GammaElem)
    assert gamma(3, 0) == Fraction(3)


# -- properties -----------------------------------------------------------------------
@given(exact_series(), exact_series())
def test_valuation_is_multiplicative(x, y):
    assert (x * y).valuation() == x.valuation() + y.valuation()


@given(exact_series(), exact_series())
def test_valuation_ultrametric(x, y):
    s = x + y
    if s.is_zero():
        return
    assert s.valuation() >= min(x.valuation(), y.valuation())
    if x.valuation() != y.valuation():
        assert s.valuation() == min(x.valuation(), y.valuation())


@given(taus, exact_series(), exact_series())
def test_tau_is_a_ring_homomorphism(tau, x, y):
    assert tau.apply(x + y) == tau.apply(x) + tau.apply(y)
    assert tau.apply(x * y) == tau.apply(x) * tau.apply(y)


@given(taus, exact_series())
def test_tau_scales_valuation(tau, x):
    assert tau.apply(x).valuation() == tau.lam * x.valuation()


@given(st.lists(exact_series(max_terms=2), min_size=2, max_size=4))
def test_root_multiplicities_sum_to_degree(coeffs):
    p = PolyOverK(coeffs)
    if p.degree < 1:
        return
    assert sum(k for _, k in newton_root_valuations(p)) == p.degree


@given(st.lists(exact_series(max_terms=1), min_size=1, max_size=3), st.integers(-2, 4))
def test_count_roots_matches_enumeration(roots, v):
    p = PolyOverK([1])
    for r in roots:
        p = p * PolyOverK([-r, 1])
    expected = sum(1 for r in roots if r.valuation() >= v)
    assert count_roots_in_disk(p, PuiseuxNumber(), Fraction(v)) == expected
