import sys
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from twistdyn.berkovich import BerkPoint, parse_point
from twistdyn.gamma import set_alpha_squared
from twistdyn.parsing import parse_polynomial, parse_puiseux
from twistdyn.puiseux import PuiseuxNumber, Tau, set_relative_precision
from twistdyn.twisted import TwistedMap

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _default_precision():
    set_relative_precision(24)
    set_alpha_squared(2)
    yield
    set_relative_precision(24)
    set_alpha_squared(2)


def pt(text: str) -> BerkPoint:
    return parse_point(text)


def series(text: str) -> PuiseuxNumber:
    return parse_puiseux(text)


def poly(text: str):
    return parse_polynomial(text)


def twisted(num: str, den: str = "1", lam="1", unit="1") -> TwistedMap:
    return TwistedMap.parse(num, den, lam, unit)


small_rationals = st.builds(
    Fraction, st.integers(-4, 4).filter(bool), st.sampled_from([1, 2, 3])
)
half_exponents = st.builds(Fraction, st.integers(-4, 6), st.just(2))


@st.composite
def exact_series(draw, max_terms=3):
    n = draw(st.integers(1, max_terms))
    terms = [(draw(half_exponents), draw(small_rationals)) for _ in range(n)]
    x = PuiseuxNumber(terms)
    if x.is_zero():
        x = PuiseuxNumber.constant(1)
    return x


@st.composite
def ball_points(draw):
    center = draw(exact_series())
    v = Fraction(draw(st.integers(-4, 8)), draw(st.sampled_from([1, 2, 3])))
    return BerkPoint.ball(center, v)


taus = st.builds(
    Tau,
    st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5, 2)]),
    st.just("1"),
)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
