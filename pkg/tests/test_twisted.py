import random
from fractions import Fraction

import pytest

from twistdyn.berkovich import BerkPoint, Direction, direction_of, hyp_distance, spherical_logdist, tau_apply_point
from twistdyn.errors import ExtensionRequired
from twistdyn.polynomial import PolyOverK
from twistdyn.puiseux import PuiseuxNumber
from twistdyn.residue import KPoly, ResidueMap
from twistdyn.twisted import Annulus, TwistedMap, projective_logdist

from conftest import poly, pt, twisted
from sampling import random_ball, random_classical, random_map

GAUSS = BerkPoint.gauss()


def residue_map(num_coeffs, den_coeffs=(1,)):
    return ResidueMap(KPoly(list(num_coeffs)), KPoly(list(den_coeffs)))


@pytest.mark.parametrize(
    "F, x, expected",
    [
        (("z^2 + t", "1", 2), "[t]", "[t^4 + t]"),
        (("z^2", "1", 1), "[t^-1]", "[t^-2]"),
        (("1", "z", 1), "[0]", "[inf]"),
    ],
)
def test_eval_classical(F, x, expected):
    num, den, lam = F
    assert twisted(num, den, lam).eval_classical(pt(x)) == pt(expected)


@pytest.mark.parametrize(
    "F, xi, expected",
    [
        (("z^2", Fraction(1, 4)), "[0;0]", "[0;0]"),
        (("z^2 + t", 2), "[0;1]", "[t;4]"),
        (("z^2", 1), "[0;1]", "[0;2]"),
    ],
)
def test_image_point(F, xi, expected):
    num, lam = F
    assert twisted(num, lam=lam).image_point(pt(xi)) == pt(expected)


@pytest.mark.parametrize(
    "F, expected",
    [
        (("z^2", "1", 1), (4, 2)),
        (("1", "z", 1), (-1, -2)),
        (("z^2", "1", Fraction(1, 2)), (2, 1)),
    ],
)
def test_image_annulus(F, expected):
    num, den, lam = F
    out = twisted(num, den, lam).image_annulus(Annulus(PuiseuxNumber(), Fraction(2), Fraction(1)))
    assert (out.inner_v, out.outer_v) == expected
    assert out.center.is_zero()


@pytest.mark.parametrize(
    "F, xi, expected",
    [(("z^2", 1), "[0;0]", 2), (("z^2", 1), "[0]", 2), (("z^2 + t", 2), "[t;5]", 1), (("z^3", 1), "[inf]", 3)],
)
def test_local_degree(F, xi, expected):
    num, lam = F
    assert twisted(num, lam=lam).local_degree(pt(xi)) == expected


@pytest.mark.parametrize(
    "residue, image_residue, m",
    [(0, 0, 2), (1, 1, 1), (None, None, 2)],
)
def test_directional_data_of_square_map(residue, image_residue, m):
    data = twisted("z^2").directional_data(GAUSS, Direction(GAUSS, residue))
    assert data.image_direction == Direction(GAUSS, image_residue)
    assert (data.m, data.s, data.good) == (m, 0, True)


def test_bad_direction_has_surplus():
    data = twisted("z^2 + t", "z").directional_data(GAUSS, Direction(GAUSS, 0))
    assert data.s == 1 and not data.good


def test_tangent_maps():
    assert twisted("z^3").tangent_map(GAUSS) == residue_map([0, 0, 0, 1])
    assert twisted("z^2", lam=3).tangent_map(GAUSS) == residue_map([0, 0, 1])
    assert twisted("z + 1").tangent_map(GAUSS) == residue_map([1, 1])
    # the twist t -> 2t fixes constants, so it acts trivially on residues at the Gauss point
    assert twisted("z^2", unit="2").tangent_map(GAUSS) == residue_map([0, 0, 1])
    # one level down the residue coordinate is scaled by 2
    assert twisted("z^2", unit="2").tangent_map(pt("[0;1]")) == residue_map([0, 0, 4])


def test_tangent_degree_matches_local_degree():
    rng = random.Random(11)
    for _ in range(15):
        F = random_map(rng)
        xi = random_ball(rng)
        assert F.tangent_map(xi).degree == F.local_degree(xi)


@pytest.mark.parametrize(
    "F, xi, expected",
    [
        ("z^2", "[0;0]", [("[0;0]", 2)]),
        ("z^2", "[t;2]", [("[t^(1/2);3/2]", 1), ("[-t^(1/2);3/2]", 1)]),
        ("z^2 + t^-1", "[0;-1/2]", [("[i*t^(-1/2);0]", 1), ("[-i*t^(-1/2);0]", 1)]),
    ],
)
def test_preimages(F, xi, expected):
    assert set(twisted(F).preimages(pt(xi))) == {(pt(p), k) for p, k in expected}


def test_preimages_of_type_three_point():
    from twistdyn.gamma import gamma

    target = BerkPoint.ball(0, gamma(0, 1))
    fibre = twisted("z^2").preimages(target)
    assert fibre == [(BerkPoint.ball(0, gamma(0, Fraction(1, 2))), 2)]


@pytest.mark.parametrize(
    "F, expected",
    [("z^2", ["[0]", "[inf]"]), ("z^2 + t^-1", ["[0]", "[inf]"]), ("z^3 - 3*t^2*z", ["[t]", "[-t]", "[inf]"])],
)
def test_ramification(F, expected):
    report = twisted(F).ramification()
    assert {p for p, _ in report.critical_points} == {pt(x) for x in expected}
    assert report.tame
    assert sum(k for _, k in report.critical_points) == 2 * twisted(F).degree - 2


# -- properties on seeded samples --------------------------------------------------------
def test_fibre_degrees_sum_to_degree():
    rng = random.Random(3)
    done = 0
    while done < 20:
        F, xi = random_map(rng), random_ball(rng)
        try:
            fibre = F.preimages(xi)
        except ExtensionRequired:
            continue
        assert sum(k for _, k in fibre) == F.degree
        assert all(F.image_point(p) == xi for p, _ in fibre)
        done += 1


def test_preimage_count_per_direction():
    # a direction ball over the target holds m + s fibre points, any other holds s
    rng = random.Random(5)
    checked = 0
    while checked < 10:
        F = random_map(rng)
        xi = random_ball(rng)
        zeta = F.image_point(xi)
        sample = BerkPoint.ball(zeta.center + PuiseuxNumber.monomial(1, zeta.v), zeta.v + 1)
        try:
            fibre = F.preimages(sample)
        except ExtensionRequired:
            continue
        target_dir = direction_of(zeta, sample)
        dirs = {}
        for p, k in fibre:
            if p != xi:
                v = direction_of(xi, p)
                dirs[v] = dirs.get(v, 0) + k
        for v, count in dirs.items():
            data = F.directional_data(xi, v)
            expected = data.m + data.s if data.image_direction == target_dir else data.s
            assert count == expected
        checked += 1


def test_composition_identity_pointwise():
    rng = random.Random(7)
    for _ in range(20):
        F = random_map(rng)
        G = F.hat(F.tau.inverse()).untwisted()
        xi = random_ball(rng)
        assert F.image_point(xi) == tau_apply_point(F.tau, G.image_point(xi))


def test_segment_expansion_away_from_ramification():
    rng = random.Random(9)
    for _ in range(15):
        F = random_map(rng)
        xi = random_ball(rng)
        direction = Direction(xi, rng.choice([None, 0, 1, -1]))
        data = F.directional_data(xi, direction)
        eps = data.effective_length / 2
        a, b = direction.sample_point(eps / 2), direction.sample_point(eps)
        assert hyp_distance(F(a), F(b)) == F.lam * data.m * hyp_distance(a, b)


def test_holder_bound_on_classical_pairs():
    rng = random.Random(13)
    for _ in range(30):
        F = random_map(rng)
        x, y = random_classical(rng), random_classical(rng)
        if x == y:
            continue
        lhs = projective_logdist(F.projective_value(x), F.projective_value(y))
        assert lhs >= F.lam * spherical_logdist(x, y) - F.holder_log_constant()


def test_surplus_chain_rule_counterexample():
    # F = z^2, G = z + t/z at the Gauss point, direction 0
    F = twisted("z^2")
    G = twisted("z^2 + t", "z")
    GF = G.compose(F)
    v = Direction(GAUSS, 0)
    f = F.directional_data(GAUSS, v)
    g = G.directional_data(F(GAUSS), f.image_direction)
    composite = GF.directional_data(GAUSS, v)
    assert composite.s == 2
    assert composite.s == f.m * g.s + G.degree * f.s
    assert composite.s != g.s + f.m * f.s


def test_chain_rules_on_composites():
    rng = random.Random(17)
    for _ in range(12):
        F, G = random_map(rng, max_degree=2), random_map(rng, max_degree=2)
        GF = G.compose(F)
        xi = random_ball(rng)
        v = Direction(xi, rng.choice([None, 0, 1]))
        assert GF.local_degree(xi) == G.local_degree(F(xi)) * F.local_degree(xi)
        f = F.directional_data(xi, v)
        g = G.directional_data(F(xi), f.image_direction)
        c = GF.directional_data(xi, v)
        assert c.m == g.m * f.m
        assert c.s == f.m * g.s + G.degree * f.s
        assert c.image_direction == g.image_direction


def test_compose_matches_sequential_images():
    rng = random.Random(19)
    for _ in range(10):
        F, G = random_map(rng, max_degree=2), random_map(rng, max_degree=2)
        xi = random_ball(rng)
        assert G.compose(F)(xi) == G(F(xi))


def test_polynomial_helpers_from_text():
    assert poly("(z+1)^2") == PolyOverK([1, 2, 1])
    assert TwistedMap.parse("z^2", lam="1/2").lam == Fraction(1, 2)
