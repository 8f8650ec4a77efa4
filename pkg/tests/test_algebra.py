import random

import pytest

from cylbmw import brauer
from cylbmw.algebra import (
    AlgebraElement,
    RewriteBudgetError,
    atom_level,
    coefficient_vanishes,
    context,
    epsilon,
    involution,
    markov_trace,
    multiply,
    normalize_word,
    parse_word,
    quotient_to_ak,
    random_word,
    render_word,
    split,
)
from cylbmw.coeffring import RingElement

from conftest import trace_certify_zero
from relation_catalog import all_relations, element, yprime_word


def el(ctx, n, text):
    return AlgebraElement.from_word(ctx, n, parse_word(text, n))


# -- parsing and rendering ----------------------------------------------------

def test_parse_round_trip():
    w = parse_word("y^-2 s1 s2^-1 e1", 3)
    assert w == (("y", 1, -2), ("x", 1, 1), ("x", 2, -1), ("e", 1))
    assert render_word(w) == "y^-2 s1 s2^-1 e1"


def test_parse_rejects_out_of_range():
    with pytest.raises(ValueError):
        parse_word("s3", 3)
    with pytest.raises(ValueError):
        parse_word("e0", 2)


# -- normalisation ------------------------------------------------------------

def test_normalize_inverse_crossing(ctx2):
    got = normalize_word(ctx2, 2, parse_word("s1^-1", 2))
    expected = AlgebraElement.zero(ctx2, 2)
    expected._add_term((("x", 1, 1),), ctx2.one)
    expected._add_term((), -ctx2.delta)
    expected._add_term((("e", 1),), ctx2.delta)
    assert (got - expected).is_zero_literal()


def test_normalize_cylinder_power(ctx2):
    got = normalize_word(ctx2, 2, parse_word("y^2", 2))
    expected = AlgebraElement.zero(ctx2, 2)
    expected._add_term((("y", 1, 1),), ctx2.qd.q[1])
    expected._add_term((), ctx2.qd.q[0])
    assert (got - expected).is_zero_literal()


def test_normalize_empty_word(ctx2):
    got = normalize_word(ctx2, 2, ())
    assert list(got.terms) == [()]
    assert got.terms[()].is_one()


# -- multiplication -----------------------------------------------------------

def test_multiply_hook_square(ctx2):
    got = multiply(el(ctx2, 2, "e1"), el(ctx2, 2, "e1"))
    assert list(got.terms) == [(("e", 1),)]
    assert got.terms[(("e", 1),)].eq(ctx2.x)


def test_multiply_crossing_absorbed(ctx2):
    got = multiply(el(ctx2, 2, "s1"), el(ctx2, 2, "e1"))
    assert list(got.terms) == [(("e", 1),)]
    assert got.terms[(("e", 1),)].eq(ctx2.lam)


def test_multiply_identity(ctx2):
    a = el(ctx2, 3, "y s2 e1")
    got = multiply(AlgebraElement.one(ctx2, 3), a)
    assert (got - a).is_zero_literal()


def test_multiply_rejects_mixed_levels(ctx2):
    with pytest.raises(ValueError):
        multiply(el(ctx2, 2, "e1"), el(ctx2, 3, "e1"))


# -- splitting ----------------------------------------------------------------

def test_split_single_top_letter(ctx2):
    terms = split(el(ctx2, 3, "e2"))
    assert len(terms) == 1
    c, w1, gamma, w2 = terms[0]
    assert c.is_one() and w1 == () and gamma == ("e", 2) and w2 == ()


def test_split_conjugated_hook(ctx2):
    # X2 e1 X2 rewrites through the inverse-conjugation rule, so every term
    # carries the top hook
    terms = split(el(ctx2, 3, "s2 e1 s2"))
    assert terms
    for c, w1, gamma, w2 in terms:
        assert gamma == ("e", 2)
        for a in w1 + w2:
            assert atom_level(a) <= 2


def test_split_hook_cylinder_span(ctx2):
    # e2 Y_2^m Y_3^j stays in the span of e2 with level-2 cylinder powers
    word = (("e", 2), ("y", 2, 1), ("y", 3, 1))
    terms = split(AlgebraElement.from_word(ctx2, 3, word))
    assert terms
    for c, w1, gamma, w2 in terms:
        assert gamma == ("e", 2)
        for a in w1 + w2:
            assert a[0] == "y" and a[1] <= 2


def test_split_reconstructs_element(ctx2c):
    # classical certification: reassembling w1 gamma w2 gives the input back
    rng = random.Random(99)
    for _ in range(25):
        w = random_word(rng, 3, 2, 6)
        a = AlgebraElement.from_word(ctx2c, 3, w)
        reassembled = AlgebraElement.zero(ctx2c, 3)
        for c, w1, gamma, w2 in split(a):
            word = w1 + ((gamma,) if gamma else ()) + w2
            for nw, nc in [(word, c)]:
                reassembled._add_term(nw, nc)
        diff = brauer.from_element(a - reassembled)
        assert not diff, render_word(w)


def test_split_terminates_on_long_words(ctx2):
    rng = random.Random(20240809)
    for _ in range(150):
        w = random_word(rng, 3, 2, 8)
        split(AlgebraElement.from_word(ctx2, 3, w))


# -- conditional expectation and trace -----------------------------------------

def test_epsilon_values(ctx2):
    xinv = ctx2.x.inverse()
    got = epsilon(el(ctx2, 2, "e1"))
    assert list(got.terms) == [()] and got.terms[()].eq(xinv)
    got = epsilon(el(ctx2, 2, "s1"))
    assert got.terms[()].eq(xinv * ctx2.lam.inverse())
    got = epsilon(AlgebraElement.from_word(ctx2, 2, (("y", 2, 1),)))
    assert got.terms[()].eq(ctx2.A(1) * xinv)


def test_epsilon_module_property(ctx2):
    # epsilon(w1 a w2) = w1 epsilon(a) w2 for w1, w2 one level down
    rng = random.Random(4)
    for _ in range(6):
        a = AlgebraElement.from_word(ctx2, 3, random_word(rng, 3, 2, 3))
        w1 = AlgebraElement.from_word(ctx2, 3, random_word(rng, 2, 2, 2))
        w2 = AlgebraElement.from_word(ctx2, 3, random_word(rng, 2, 2, 2))
        lhs = epsilon(multiply(multiply(w1, a), w2))
        w1_low = AlgebraElement(ctx2, 2, {w: c for w, c in w1.terms.items()})
        w2_low = AlgebraElement(ctx2, 2, {w: c for w, c in w2.terms.items()})
        rhs = multiply(multiply(w1_low, epsilon(a)), w2_low)
        assert trace_certify_zero(lhs - rhs, nwords=6)


def test_trace_one(ctx2):
    assert markov_trace(AlgebraElement.one(ctx2, 2)).is_one()
    assert markov_trace(AlgebraElement.one(ctx2, 3)).is_one()


def test_trace_twist_value(ctx2):
    got = markov_trace(el(ctx2, 2, "y s1 y e1"))
    expected = ctx2.kap * ctx2.x.inverse()
    assert coefficient_vanishes(ctx2, got - expected, "generic")


def test_trace_crossing_square(ctx2):
    got = markov_trace(el(ctx2, 2, "s1 s1"))
    xinv = ctx2.x.inverse()
    expected = ctx2.one + ctx2.delta * xinv * ctx2.lam.inverse() \
        - ctx2.delta * ctx2.lam * xinv
    assert got.eq(expected)


def test_trace_restriction_compatible(ctx2):
    rng = random.Random(12)
    for _ in range(8):
        w = random_word(rng, 2, 2, 4)
        low = markov_trace(AlgebraElement.from_word(ctx2, 2, w))
        high = markov_trace(AlgebraElement.from_word(ctx2, 3, w))
        assert coefficient_vanishes(ctx2, low - high, "generic")


def test_trace_factorises_over_top_letter(ctx2):
    # tr(w gamma) = tr(gamma) tr(w) for gamma over the top strand
    rng = random.Random(5)
    for gamma in ((("e", 2),), (("x", 2, 1),), (("y", 3, 1),)):
        for _ in range(4):
            w = random_word(rng, 2, 2, 4)
            elw = AlgebraElement.from_word(ctx2, 3, w)
            g = AlgebraElement.from_word(ctx2, 3, gamma)
            lhs = markov_trace(multiply(elw, g))
            rhs = ctx2.tr_gamma(gamma[0]) * markov_trace(
                AlgebraElement.from_word(ctx2, 2, w))
            assert coefficient_vanishes(ctx2, lhs - rhs, "generic")


def test_epsilon_conjugation_identities(ctx2):
    # eps_n(X_n^{-1} a X_n) = eps_n(X_n a X_n^{-1}) = eps_n(e_n a e_n)
    #                       = eps_{n-1}(a)
    rng = random.Random(31)
    n = 2
    for _ in range(5):
        w = random_word(rng, n, 2, 4)
        a = AlgebraElement.from_word(ctx2, n + 1, w)
        xn = AlgebraElement.from_word(ctx2, n + 1, (("x", n, 1),))
        xni = AlgebraElement.from_word(ctx2, n + 1, (("x", n, -1),))
        en = AlgebraElement.from_word(ctx2, n + 1, (("e", n),))
        low = epsilon(AlgebraElement.from_word(ctx2, n, w))
        lift = AlgebraElement(ctx2, n, dict(low.terms))
        for probe in (multiply(multiply(xni, a), xn),
                      multiply(multiply(xn, a), xni),
                      multiply(multiply(en, a), en)):
            got = epsilon(probe)
            assert trace_certify_zero(got - lift, nwords=6)


# -- involutions ----------------------------------------------------------------

def test_star_involution_squares_to_identity(ctx2):
    a = el(ctx2, 3, "s1 y e2")
    twice = involution(involution(a, "star"), "star")
    assert trace_certify_zero(twice - a, nwords=6)


def test_star_fixes_hooks(ctx2):
    a = el(ctx2, 2, "e1")
    assert (involution(a, "star") - a).is_zero_literal()


def test_dagger_moves_cylinder_to_top(ctx2):
    a = el(ctx2, 3, "y")
    dag = involution(a, "dagger")
    direct = AlgebraElement.from_word(ctx2, 3, (("y", 3, 1),))
    # both are the same element; certify through trace pairings
    norm = AlgebraElement.zero(ctx2, 3)
    for w, c in direct.terms.items():
        norm._add_term(w, c)
    assert trace_certify_zero(dag - norm, nwords=6)


def test_dagger_squares_to_identity(ctx2):
    a = el(ctx2, 3, "s1 e2 y")
    twice = involution(involution(a, "dagger"), "dagger")
    assert trace_certify_zero(twice - a, nwords=6)


def test_bar_reverses_words(ctx2):
    a = el(ctx2, 2, "s1 y")
    rev = involution(a, "bar")
    expected = el(ctx2, 2, "y s1")
    assert (rev - expected).is_zero_literal()


def test_bar_squares_to_identity(ctx2):
    a = el(ctx2, 3, "s1 s2 y e1")
    twice = involution(involution(a, "bar"), "bar")
    assert trace_certify_zero(twice - a, nwords=6)


# -- the cyclotomic Hecke quotient ----------------------------------------------

def test_quotient_kills_hooks(ctx2):
    assert quotient_to_ak(el(ctx2, 2, "e1")).is_zero_literal()
    assert quotient_to_ak(el(ctx2, 3, "s1 e2 y")).is_zero_literal()


def test_quotient_quadratic_relation(ctx2):
    got = quotient_to_ak(el(ctx2, 2, "s1 s1"))
    expected = AlgebraElement.zero(ctx2, 2)
    expected._add_term((("x", 1, 1),), ctx2.delta)
    expected._add_term((), ctx2.one)
    assert (got - expected).is_zero_literal()


def test_quotient_keeps_cylinder_reduction(ctx2):
    got = quotient_to_ak(el(ctx2, 2, "y^2"))
    expected = AlgebraElement.zero(ctx2, 2)
    expected._add_term((("y", 1, 1),), ctx2.qd.q[1])
    expected._add_term((), ctx2.qd.q[0])
    assert (got - expected).is_zero_literal()


def test_quotient_inverse_crossing(ctx2):
    got = quotient_to_ak(el(ctx2, 2, "s1^-1 s1"))
    assert list(got.terms) == [()]
    assert got.terms[()].is_one()


# -- the relation suite ----------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2])
def test_relation_suite(k):
    ctx = context(k)
    ctxc = context(k, classical=True)
    n = 3
    generic = all_relations(ctx, n)
    classical = all_relations(ctxc, n)
    assert [r[0] for r in generic] == [r[0] for r in classical]
    for (name, lhs, rhs), (_, lhs_c, rhs_c) in zip(generic, classical):
        image = brauer.from_element(lhs_c - rhs_c)
        assert not image, f"{name}: classical image nonzero"
        assert trace_certify_zero(lhs - rhs, nwords=4), \
            f"{name}: generic trace certification failed"


def test_trace_symmetry(ctx2):
    rng = random.Random(777)
    for _ in range(10):
        a = AlgebraElement.from_word(ctx2, 3, random_word(rng, 3, 2, 4))
        b = AlgebraElement.from_word(ctx2, 3, random_word(rng, 3, 2, 4))
        diff = markov_trace(multiply(a, b)) - markov_trace(multiply(b, a))
        assert coefficient_vanishes(ctx2, diff, "generic")


def test_classical_oracle_agreement_sample(ctx2c):
    rng = random.Random(13)
    for _ in range(40):
        w = random_word(rng, 3, 2, 6)
        lhs = markov_trace(AlgebraElement.from_word(ctx2c, 3, w))
        rhs = brauer.closure_trace(brauer.from_word(2, 3, w))
        assert lhs.eq(rhs), render_word(w)


def test_budget_error_is_loud():
    from cylbmw.algebra import AlgebraContext
    small = AlgebraContext(2, step_budget=5)
    with pytest.raises(RewriteBudgetError):
        a = AlgebraElement.from_word(small, 3, parse_word("s2 s1 y s1 s2 y", 3))
        split(a)
