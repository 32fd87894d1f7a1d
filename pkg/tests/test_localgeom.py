import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsurf.errors import ChartInconsistent, RankDeficient, SingularPoint
from frobsurf.fields import extension_of, make_field
from frobsurf.geometry import CurveSpec, ProjectivePoint, enumerate_points, is_smooth_point
from frobsurf.localgeom import (TruncatedSeries, evaluate_on_chart,
                                frobenius_series, hasse_derivative,
                                intersection_multiplicity, osculating_plane,
                                parametrize_curve)
from frobsurf.poly import build_h, parse_poly


def t_power(field, k, T):
    coeffs = [field.zero()] * (T + 1)
    if k <= T:
        coeffs[k] = field.one()
    return TruncatedSeries(field, coeffs)


@pytest.fixture
def twisted_cubic(gf5):
    return CurveSpec((parse_poly("X0*X2 + 4*X1^2", gf5),
                      parse_poly("X1*X3 + 4*X2^2", gf5),
                      parse_poly("X0*X3 + 4*X1*X2", gf5)),
                     delta=3, irreducible_asserted=True, complete_asserted=True)


# --- Hasse derivatives ---

def test_hasse_monomial_rule(gf5):
    d2 = hasse_derivative(t_power(gf5, 3, 8), 2)
    assert d2.coeffs[1] == gf5.element(3) and d2.order() == 1


def test_hasse_char2_kills_even(gf2):
    assert hasse_derivative(t_power(gf2, 2, 6), 1).is_zero_to_truncation()


@st.composite
def random_series(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    field = make_field(p, 1)
    T = 64
    coeffs = [field.element(draw(st.integers(0, p - 1))) for _ in range(T + 1)]
    return TruncatedSeries(field, coeffs)


@given(random_series(), st.integers(0, 6), st.integers(0, 6))
@settings(max_examples=150, deadline=None)
def test_hasse_composition_law(s, i, k):
    lhs = hasse_derivative(hasse_derivative(s, k), i)
    rhs = hasse_derivative(s, i + k)
    c = comb(i + k, i) % s.desc.p
    scaled = rhs.scale(s.desc.element(c)).truncate(lhs.truncation)
    assert lhs == scaled


@given(st.integers(0, 40), st.integers(0, 40))
@settings(max_examples=120, deadline=None)
def test_hasse_on_powers_matches_binomial(k, i):
    field = make_field(3, 1)
    T = 48
    d = hasse_derivative(t_power(field, k, T), min(i, T))
    i = min(i, T)
    expect = [field.zero()] * (T - i + 1)
    if i <= k <= T - i + i:
        pos = k - i
        if 0 <= pos <= T - i:
            expect[pos] = field.element(comb(k, i) % 3)
    assert d.coeffs == expect


# --- Frobenius twist of series ---

def test_frobenius_series_freshman(gf2):
    s = TruncatedSeries(gf2, [gf2.one(), gf2.one()] + [gf2.zero()] * 3)
    f = frobenius_series(s, 2)
    assert [c.coeffs[0] for c in f.coeffs] == [1, 0, 1, 0, 0]


def test_frobenius_series_constant(gf4):
    a = gf4.gen()
    s = TruncatedSeries(gf4, [a] + [gf4.zero()] * 4)
    assert frobenius_series(s, 4).coeffs[0] == a ** 4 == a


def test_frobenius_series_matches_multiplication(gf4):
    rng = random.Random(11)
    T = 20
    for _ in range(10):
        coeffs = [gf4.from_index(rng.randrange(4)) for _ in range(T + 1)]
        s = TruncatedSeries(gf4, coeffs)
        naive = TruncatedSeries.constant(gf4, 1, T)
        for _ in range(4):
            naive = naive * s
        assert frobenius_series(s, 4) == naive


# --- charts ---

def test_twisted_cubic_chart_is_exact(gf5, twisted_cubic):
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    chart = parametrize_curve(twisted_cubic, P, 10)
    for i, s in enumerate(chart.series):
        expect = [gf5.zero()] * 11
        if i == 0:
            expect[0] = gf5.one()
        else:
            expect[i] = gf5.one()
        assert s.coeffs == expect


def test_line_chart_is_linear(gf5):
    line = CurveSpec((parse_poly("X2", gf5), parse_poly("X3", gf5)), delta=1)
    P = ProjectivePoint([gf5.one(), gf5.element(2), gf5.zero(), gf5.zero()])
    chart = parametrize_curve(line, P, 6)
    for s in chart.series:
        assert all(c.is_zero() for c in s.coeffs[2:])


def test_chart_soundness_and_reparametrization(gf5):
    f = parse_poly("2*X0*X1^2 + 2*X1^3 + 2*X0^2*X2 + 2*X0*X1*X2 + X1^2*X2 + 2*X0*X2^2 + 3*X1*X2^2 + 3*X2^3 + 4*X0^2*X3 + X0*X1*X3 + X1^2*X3 + 2*X1*X2*X3 + 2*X2^2*X3 + 3*X0*X3^2 + 4*X1*X3^2 + X2*X3^2", gf5)
    f1 = parse_poly("3*X0*X1 + 2*X1^2 + 4*X1*X2 + 2*X2^2 + X0*X3 + 4*X1*X3 + X2*X3", gf5)
    f2 = parse_poly("X0*X1*X3 + 4*X1^2*X3 + 3*X1*X2*X3 + 4*X2^2*X3 + 2*X0*X3^2 + 3*X1*X3^2 + 2*X2*X3^2", gf5)
    C = CurveSpec((f, f1, f2), delta=6, irreducible_asserted=True, complete_asserted=True)
    P = enumerate_points(C.polys, 1)[0]
    chart = parametrize_curve(C, P, 20)
    for g in C.polys:
        assert evaluate_on_chart(g, chart).is_zero_to_truncation()
    other = parametrize_curve(C, P, 20, param_rotation=1)
    assert other.param_index != chart.param_index
    for g in C.polys:
        assert evaluate_on_chart(g, other).is_zero_to_truncation()


def test_chart_twist_derivatives_vanish_below_q(gf5, twisted_cubic):
    for P in enumerate_points(twisted_cubic.polys, 1)[:3]:
        chart = parametrize_curve(twisted_cubic, P, 16)
        for tw in chart.twisted:
            for j in range(1, 5):
                assert hasse_derivative(tw, j).is_zero_to_truncation()


def test_chart_twist_vanishes_below_q_over_extension_point(gf5, twisted_cubic):
    pts = enumerate_points(twisted_cubic.polys, 2)
    P = next(p for p in pts if p.k == 2 and any(c.desc.e == 2 for c in p.coords))
    chart = parametrize_curve(twisted_cubic, P, 16)
    for tw in chart.twisted:
        for j in range(1, 5):
            assert hasse_derivative(tw, j).is_zero_to_truncation()


def test_chart_at_singular_point_raises(gf5):
    # nodal plane cubic viewed in space: singular at (1:0:0:0)
    nodal = CurveSpec((parse_poly("X3", gf5),
                       parse_poly("X1^2*X0 + 4*X2^2*X0 + 4*X2^3", gf5)))
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    with pytest.raises(SingularPoint):
        parametrize_curve(nodal, P, 8)


# --- evaluation on charts, multiplicities ---

def test_evaluate_on_chart_basics(gf5, twisted_cubic):
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    chart = parametrize_curve(twisted_cubic, P, 10)
    assert evaluate_on_chart(twisted_cubic.polys[0], chart).is_zero_to_truncation()
    assert evaluate_on_chart(parse_poly("X3", gf5), chart).order() == 3


def test_multiplicity_of_nonvanishing_form(gf5, twisted_cubic):
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    assert intersection_multiplicity(twisted_cubic, parse_poly("X0", gf5), P) == 0


def test_multiplicity_of_transverse_plane(gf5, twisted_cubic):
    """Generic planes through the point meet the branch exactly once."""
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    rng = random.Random(5)
    hits = 0
    for _ in range(2):
        # random plane through P: coefficient of X0 fixed to 0
        while True:
            c = [gf5.zero()] + [gf5.element(rng.randrange(5)) for _ in range(3)]
            if not c[1].is_zero():
                break
        terms = {tuple(1 if j == i else 0 for j in range(4)): c[i]
                 for i in range(4) if not c[i].is_zero()}
        from frobsurf.poly import Poly
        plane = Poly(gf5, terms)
        assert intersection_multiplicity(twisted_cubic, plane, P) == 1
        hits += 1
    assert hits == 2


def test_multiplicity_reparametrization_invariance(gf5, twisted_cubic):
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    g = parse_poly("X3", gf5)
    m0 = intersection_multiplicity(twisted_cubic, g, P, T=12)
    m1 = intersection_multiplicity(twisted_cubic, g, P, T=12, param_rotation=1)
    assert m0 == m1 == 3


# --- osculating planes ---

def test_osculating_plane_twisted_cubic(gf5, twisted_cubic):
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    chart = parametrize_curve(twisted_cubic, P, 10)
    plane = osculating_plane(chart, 1, 2)
    assert plane == (gf5.zero(), gf5.zero(), gf5.zero(), gf5.one())


def test_osculating_plane_meets_to_third_order(gf5, twisted_cubic):
    from frobsurf.poly import Poly
    for P in enumerate_points(twisted_cubic.polys, 1)[:4]:
        chart = parametrize_curve(twisted_cubic, P, 12)
        vec = osculating_plane(chart, 1, 2)
        terms = {tuple(1 if j == i else 0 for j in range(4)): c
                 for i, c in enumerate(vec) if not c.is_zero()}
        plane = Poly(gf5, terms)
        ord_ = evaluate_on_chart(plane, chart).order()
        assert ord_ is not None and ord_ >= 3


def test_osculating_plane_rank_deficient_for_line(gf5):
    line = CurveSpec((parse_poly("X2", gf5), parse_poly("X3", gf5)), delta=1)
    P = ProjectivePoint([gf5.one(), gf5.zero(), gf5.zero(), gf5.zero()])
    chart = parametrize_curve(line, P, 8)
    with pytest.raises(RankDeficient):
        osculating_plane(chart, 1, 2)
