from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kz.algebra import GF, QQ, PolynomialRing, field_from_name
from kz.errors import NotHomogeneousError, ParseError

R = PolynomialRing(["X1", "X2", "X3"])
R7 = PolynomialRing(["x", "y"], GF(7))

small = st.integers(-20, 20)
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
exps = st.tuples(*[st.integers(0, 3)] * 3)


@st.composite
def polys(draw, ring=R, max_terms=4):
    terms = draw(st.dictionaries(exps, small.filter(bool), max_size=max_terms))
    return ring.from_dict(terms)


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    a, b, c = QQ.convert(a), QQ.convert(b), QQ.convert(c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * QQ.inv(a) == 1


@given(st.integers(0, 100), st.integers(0, 100), st.sampled_from([2, 3, 5, 7, 101]))
def test_prime_field_axioms(a, b, p):
    F = GF(p)
    a, b = F.convert(a), F.convert(b)
    assert (a + b) % p == F.convert(a + b)
    if a:
        assert a * F.inv(a) % p == 1


def test_prime_field_rejects_composite_and_bad_denominator():
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ZeroDivisionError):
        GF(5).convert(Fraction(1, 5))


def test_field_names():
    assert field_from_name("QQ") == QQ
    assert field_from_name("GF(7)") == GF(7)
    with pytest.raises(ValueError):
        field_from_name("RR")


@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == R.zero


@given(polys(), polys())
def test_degree_and_leading_terms_are_multiplicative(f, g):
    if f and g:
        assert (f * g).degree() == f.degree() + g.degree()
        lm = tuple(a + b for a, b in zip(f.leading_monomial(), g.leading_monomial()))
        assert (f * g).leading_monomial() == lm


@given(exps, exps, exps)
def test_monomial_order_is_compatible_with_multiplication(a, b, c):
    key = R.mono_key
    ac = tuple(x + y for x, y in zip(a, c))
    bc = tuple(x + y for x, y in zip(b, c))
    if key(a) < key(b):
        assert key(ac) < key(bc)
    assert key((0, 0, 0)) <= key(a)


def test_degrevlex_and_lex_tie_breaks():
    assert str(R.parse("X3^2 + X1*X3 + X2^2")) == "X2^2 + X1*X3 + X3^2"
    L = PolynomialRing(["X1", "X2", "X3"], order="lex")
    assert str(L.parse("X2^3 + X1")) == "X1 + X2^3"


@given(polys())
def test_render_parse_round_trip(f):
    assert R.parse(str(f)) == f


def test_parse_grammar():
    f = R.parse("X1^2*X2 - 3*X3^3")
    assert str(f) == "X1^2*X2 - 3*X3^3"
    assert R.parse("(X1 + X2)^2") == R.parse("X1^2 + 2*X1*X2 + X2^2")
    assert R.parse("1/2*X1").leading_coefficient() == Fraction(1, 2)
    assert str(R7.parse("8*x + y")) == "x + y"


@pytest.mark.parametrize("text, column, fragment", [
    ("X1^", 4, "exponent"),
    ("X1 + Z", 6, "unknown variable"),
    ("X1 $ X2", 4, "unexpected character"),
    ("", 1, "empty"),
])
def test_parse_errors_carry_columns(text, column, fragment):
    with pytest.raises(ParseError) as info:
        R.parse(text)
    assert info.value.column == column
    assert fragment in str(info.value)


def test_homogeneity():
    assert R.parse("X1^2 + X2*X3").is_homogeneous() == (True, 2)
    assert R.parse("X1^2 + X2").is_homogeneous()[0] is False
    W = PolynomialRing(["a", "b"], weights=[2, 1])
    assert W.parse("a + b^2").is_homogeneous() == (True, 2)
    from kz.modules import FPModule
    with pytest.raises(NotHomogeneousError):
        FPModule.quotient_ring(R, ["X1^2 + X2"])
