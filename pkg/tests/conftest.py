import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cylbmw import brauer
from cylbmw.algebra import (
    AlgebraElement,
    coefficient_vanishes,
    context,
    markov_trace,
    multiply,
    random_word,
)


def trace_certify_zero(element, seed=20240801, nwords=20, maxlen=4):
    """tr(element * w) vanishes in generic mode for seeded random words."""
    ctx = element.ctx
    rng = random.Random(seed)
    for _ in range(nwords):
        w = random_word(rng, element.n, ctx.k, maxlen)
        probe = AlgebraElement.from_word(ctx, element.n, w)
        value = markov_trace(multiply(element, probe))
        if not coefficient_vanishes(ctx, value, "generic"):
            return False
    return True


def classical_image_zero(ctxc, n, generic_element):
    """Rebuild the element's words in a classical context and map to diagrams.

    Only usable for elements whose coefficients carry over (the relation
    catalog constructs both sides per context instead)."""
    image = brauer.from_element(generic_element)
    return not image


def assert_relation(name, lhs, rhs, lhs_c, rhs_c, seed=20240801, nwords=8):
    """Certify lhs = rhs through the classical image and the generic trace."""
    delta_c = lhs_c - rhs_c
    image = brauer.from_element(delta_c)
    assert not image, f"{name}: classical image of the difference is nonzero"
    assert trace_certify_zero(lhs - rhs, seed=seed, nwords=nwords), \
        f"{name}: generic trace certification failed"


@pytest.fixture(scope="session")
def ctx2():
    return context(2)


@pytest.fixture(scope="session")
def ctx2c():
    return context(2, classical=True)
