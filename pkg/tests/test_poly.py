import pytest
from hypothesis import given, settings

from frobsurf.errors import (BadFieldLiteral, FieldMismatch, NotHomogeneous,
                             PolySyntaxError, UnknownVariable, ZeroDivisor)
from frobsurf.fields import extension_of, embed
from frobsurf.poly import (Poly, build_h, divides, evaluate, exact_quotient,
                           gradient, parse_poly, partial_derivative, serialize)

from conftest import homogeneous_polys, monomials_of_degree


# --- parsing ---

def test_parse_reference_cubic(gf4):
    f = parse_poly("X0^3 + X1^3 + X2^2*X3", gf4)
    assert f.degree == 3 and len(f.terms) == 3
    assert f.terms[(3, 0, 0, 0)] == gf4.one()


def test_parse_unary_minus(gf5):
    g = parse_poly("-X0^2*X3 + 3*X2^3", gf5)
    assert g.terms[(2, 0, 0, 1)] == gf5.element(4)
    assert g.terms[(0, 0, 3, 0)] == gf5.element(3)


def test_parse_not_homogeneous(gf5):
    with pytest.raises(NotHomogeneous):
        parse_poly("X0 + X1^2", gf5)


def test_parse_errors(gf5, gf4):
    with pytest.raises(UnknownVariable):
        parse_poly("X4^2", gf5)
    with pytest.raises(UnknownVariable):
        parse_poly("X12", gf5)
    with pytest.raises(BadFieldLiteral):
        parse_poly("a*X0", gf5)  # no generator literal over a prime field
    with pytest.raises(PolySyntaxError) as err:
        parse_poly("X0^2 + + X1^2", gf5)
    assert err.value.position > 0
    with pytest.raises(PolySyntaxError):
        parse_poly("", gf5)
    # generator literals are fine over extensions
    f = parse_poly("a^2*X0 + a*X0 + X1", gf4)
    assert f.degree == 1


def test_parse_coefficient_reduction(gf3):
    f = parse_poly("7*X0^2 + 3*X1^2", gf3)
    assert f.terms[(2, 0, 0, 0)] == gf3.element(1)
    assert (1, 0, 1, 0) not in f.terms and (0, 2, 0, 0) not in f.terms


def test_whitespace_and_implicit_star(gf5):
    assert parse_poly(" 2 X0 ^ 2 * X1 + X2^3 ", gf5) == parse_poly("2*X0^2*X1+X2^3", gf5)


def test_repeated_monomials_accumulate(gf4):
    f = parse_poly("a*X0 + a*X0", gf4)
    # 2a = 0 in characteristic 2
    assert f.is_zero()


@given(homogeneous_polys(extension=True))
@settings(max_examples=150, deadline=None)
def test_serialize_parse_roundtrip(f):
    text = serialize(f)
    back = parse_poly(text, f.field)
    assert back == f
    assert serialize(back) == text


def test_serialize_canonical_order(gf5):
    f = parse_poly("X3^2 + X0*X1 + X2^2", gf5)
    assert serialize(f) == "X0*X1 + X2^2 + X3^2"
    assert serialize(Poly.zero(gf5)) == "0"


# --- derivatives ---

def test_char2_annihilation(gf2):
    f = parse_poly("X2^2*X3", gf2)
    assert partial_derivative(f, 2).is_zero()


def test_cubic_derivative_char2(gf4):
    f = parse_poly("X0^3", gf4)
    assert partial_derivative(f, 0) == parse_poly("X0^2", gf4)


@given(homogeneous_polys())
@settings(max_examples=200, deadline=None)
def test_euler_identity(f):
    d = f.degree
    total = Poly.zero(f.field)
    for i in range(4):
        total = total + Poly.variable(f.field, i) * partial_derivative(f, i)
    assert total == f.scale(d)


# --- h construction ---

def test_build_h_reference_values(gf4):
    f = parse_poly("X0^3 + X1^3 + X2^2*X3", gf4)
    h = build_h(f, 4)
    assert serialize(h) == "X0^6 + X1^6 + X2^2*X3^4"
    assert not divides(f, h)


def test_build_h_single_variable(gf5):
    assert build_h(parse_poly("X0", gf5), 5) == parse_poly("X0^5", gf5)


def test_build_h_hermitian_square(gf4):
    f = parse_poly("X0^3+X1^3+X2^3+X3^3", gf4)
    h = build_h(f, 4)
    assert h == f * f
    assert divides(f, h)


def test_build_h_zero_for_pth_power(gf2):
    f = parse_poly("X0^2", gf2)
    assert build_h(f, 2).is_zero()


@given(homogeneous_polys())
@settings(max_examples=100, deadline=None)
def test_build_h_degree_law(f):
    q = f.field.order
    h = build_h(f, q)
    assert h.is_zero() or h.degree == f.degree + q - 1


# --- gradient identity at rational points ---

def test_gradient_identity_small(gf3):
    f = parse_poly("X0^3 + 2*X0*X1*X2 + X2^2*X3", gf3)
    h = build_h(f, 3)
    hg, fg = gradient(h), gradient(f)
    d = f.degree
    from frobsurf.geometry import enumerate_points
    for P in enumerate_points([], 1, base=gf3):
        for i in range(4):
            lhs = evaluate(hg[i], P.coords)
            rhs = evaluate(fg[i], P.coords) * gf3.element(d - 1)
            assert lhs == rhs


# --- division ---

@given(homogeneous_polys(max_degree=3, max_terms=4), homogeneous_polys(max_degree=3, max_terms=4))
@settings(max_examples=80, deadline=None)
def test_divides_product(f, g):
    if f.field is not g.field:
        return
    assert divides(f, f * g)
    q = exact_quotient(f, f * g)
    assert q == g or q * f == f * g


def test_divides_zero_divisor(gf5):
    with pytest.raises(ZeroDivisor):
        divides(Poly.zero(gf5), parse_poly("X0", gf5))


def test_divides_against_exhaustive_oracle(gf2):
    """Exhaustive quotient search over GF(2) for degree gaps <= 2."""
    import itertools
    fs = [parse_poly("X0 + X1", gf2), parse_poly("X0*X1 + X2^2", gf2),
          parse_poly("X0^2 + X1*X3", gf2)]
    gs = [parse_poly("X0^3 + X2^3", gf2), parse_poly("X0^2*X1 + X1^2*X3 + X2^3", gf2),
          parse_poly("X0^3 + X0*X1^2 + X1^3", gf2),
          parse_poly("X0^2 + X1^2", gf2), parse_poly("X0*X1 + X2*X3", gf2)]
    for f in fs:
        for g in gs:
            gap = g.degree - f.degree
            if gap < 0 or gap > 2:
                continue
            monos = monomials_of_degree(gap)
            brute = False
            for bits in itertools.product([0, 1], repeat=len(monos)):
                if not any(bits):
                    continue
                q = Poly(gf2, {m: gf2.one() for m, b in zip(monos, bits) if b})
                if f * q == g:
                    brute = True
                    break
            assert divides(f, g) == brute


# --- evaluation ---

def test_evaluate_basics(gf4):
    f = parse_poly("X1^3", gf4)
    pt = [gf4.one(), gf4.zero(), gf4.zero(), gf4.zero()]
    assert evaluate(f, pt).is_zero()
    g = parse_poly("X0^3 + X1^3 + X2^2*X3", gf4)
    assert evaluate(g, [gf4.one(), gf4.one(), gf4.zero(), gf4.zero()]).is_zero()


def test_evaluate_field_mismatch(gf4, gf9):
    f = parse_poly("X0^2", gf4)
    with pytest.raises(FieldMismatch):
        evaluate(f, [gf9.one()] * 4)


@given(homogeneous_polys(max_degree=4))
@settings(max_examples=60, deadline=None)
def test_evaluate_homogeneous_scaling(f):
    import random
    field = f.field
    ext = extension_of(field, 2)
    rng = random.Random(42)
    coords = [ext.from_index(rng.randrange(ext.order)) for _ in range(4)]
    if all(c.is_zero() for c in coords):
        coords[0] = ext.one()
    lam = ext.from_index(rng.randrange(1, ext.order))
    scaled = [c * lam for c in coords]
    assert evaluate(f, scaled) == evaluate(f, coords) * lam ** f.degree
