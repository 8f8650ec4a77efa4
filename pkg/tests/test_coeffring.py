from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cylbmw.coeffring import (
    CoefficientError,
    LaurentPoly,
    RingElement,
    full_params,
    parse_canonical,
    poly_gcd,
    solve_linear,
)

PS = full_params(2)


def var(name, exp=1):
    return RingElement.var(PS, name, exp)


def const(c):
    return RingElement.const(PS, c)


# -- strategies --------------------------------------------------------------

coeffs = st.integers(-4, 4).filter(lambda v: True).map(Fraction)
exponents = st.tuples(*[st.integers(-2, 2) for _ in range(len(PS))])


@st.composite
def laurent_polys(draw, max_terms=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = draw(exponents)
        c = draw(coeffs)
        if c:
            terms[e] = c
    return LaurentPoly(PS, terms)


@st.composite
def ring_elements(draw):
    num = draw(laurent_polys())
    den = draw(laurent_polys(max_terms=2).filter(lambda p: not p.is_zero()))
    return RingElement(num, den)


# -- arithmetic examples -----------------------------------------------------

def test_inverse_pair():
    lam = var("L")
    assert (lam * var("L", -1)).is_one()


def test_additive_identity():
    d = var("D")
    assert (d + const(0)).eq(d)


def test_cancellation():
    lam = var("L")
    d = var("D")
    expr = (lam - lam.inverse()) / d
    assert (expr * d).eq(lam - lam.inverse())


def test_division_by_zero_raises():
    with pytest.raises(CoefficientError):
        var("L") / const(0)
    with pytest.raises(CoefficientError):
        const(0).inverse()


# -- field axioms on random triples ------------------------------------------

@given(ring_elements(), ring_elements(), ring_elements())
@settings(max_examples=60, deadline=None)
def test_field_axioms(a, b, c):
    assert ((a + b) + c).eq(a + (b + c))
    assert ((a * b) * c).eq(a * (b * c))
    assert (a * (b + c)).eq(a * b + a * c)
    assert (a + b).eq(b + a)
    assert (a * b).eq(b * a)
    if not a.is_zero():
        assert (a * a.inverse()).is_one()


@given(ring_elements(), ring_elements())
@settings(max_examples=40, deadline=None)
def test_cross_multiplication_equivalence(a, b):
    # eq is reflexive/symmetric; transitivity spot check through a third value
    assert a.eq(a)
    if a.eq(b):
        assert b.eq(a)


@given(ring_elements(), ring_elements())
@settings(max_examples=40, deadline=None)
def test_rational_evaluation_commutes(a, b):
    assign = {"L": Fraction(3, 2), "K": Fraction(5, 7), "D": Fraction(2, 9),
              "X": Fraction(7, 3), "P0": Fraction(4, 5), "P1": Fraction(9, 2),
              "A1": Fraction(8, 3)}
    try:
        va, vb = a.eval_rational(assign), b.eval_rational(assign)
        assert (a + b).eval_rational(assign) == va + vb
        assert (a * b).eval_rational(assign) == va * vb
    except CoefficientError:
        pass  # the random denominator vanished at the sample point


# -- canonical form ----------------------------------------------------------

def test_canonical_examples():
    assert const(1).canonical() == "( 1 ) / ( 1 )"
    lam = var("L")
    assert (lam - lam.inverse()).canonical() == "( L^2 - 1 ) / ( L )"
    assert (var("X", -1) * var("A1")).canonical() == "( A1 ) / ( X )"


def test_canonical_zero():
    assert const(0).canonical() == "( 0 ) / ( 1 )"


@given(ring_elements())
@settings(max_examples=60, deadline=None)
def test_canonical_round_trip(a):
    assert parse_canonical(PS, a.canonical()).eq(a)


def test_is_zero_exact():
    lam = var("L")
    assert (lam * lam.inverse() - const(1)).is_zero()
    assert not var("D").is_zero()


# -- substitution ------------------------------------------------------------

def test_substitution_homomorphism():
    lam, kap = var("L"), var("K")
    a = lam * lam * kap
    image = a.substitute({"L": const(1), "K": const(1)}, PS)
    assert image.is_one()


def test_substitution_zero_denominator_names_parameter():
    a = var("L") / (var("K") - const(1))
    with pytest.raises(CoefficientError) as err:
        a.substitute({"K": const(1)}, PS)
    assert "K" in str(err.value)


@given(ring_elements(), ring_elements())
@settings(max_examples=25, deadline=None)
def test_substitution_is_homomorphic(a, b):
    images = {"L": var("K") + const(2), "D": var("X") * var("K")}
    try:
        lhs = (a * b).substitute(images, PS)
        rhs = a.substitute(images, PS) * b.substitute(images, PS)
        assert lhs.eq(rhs)
        lhs = (a + b).substitute(images, PS)
        rhs = a.substitute(images, PS) + b.substitute(images, PS)
        assert lhs.eq(rhs)
    except CoefficientError:
        pass  # negative power of a vanishing image


# -- gcd and reduction -------------------------------------------------------

def test_fraction_reduction_cancels_common_factor():
    lam = var("L")
    common = lam + const(1)
    a = (common * (lam - const(1))) / (common * var("K"))
    red = a.reduced()
    assert red.eq(a)
    assert len(red.num.terms) == 2 and len(red.den.terms) == 1


def test_poly_gcd_known_factor():
    lam = LaurentPoly.var(PS, "L")
    one = LaurentPoly.const(PS, 1)
    f = (lam + one) * (lam + one) * LaurentPoly.var(PS, "K")
    g = (lam + one) * (lam - one)
    got = poly_gcd(f, g)
    # the gcd divides both and is divisible by (L + 1)
    from cylbmw.coeffring import _poly_div_exact
    assert _poly_div_exact(f, got) is not None
    assert _poly_div_exact(g, got) is not None
    assert _poly_div_exact(got, lam + one) is not None


# -- linear solving ----------------------------------------------------------

def test_solve_linear():
    lam, kap = var("L"), var("K")
    eq = kap * var("X") - lam
    sol = solve_linear(eq, "X")
    assert sol.eq(lam / kap)


def test_solve_linear_refuses_quadratic():
    eq = var("X") * var("X") - const(1)
    with pytest.raises(CoefficientError):
        solve_linear(eq, "X")
