"""Exact computations in the cyclotomic BMW-type algebra of the cylinder.

The package reduces words of the n-strand algebra to a spanning form,
computes the Markov trace, realises the dotted Brauer diagram algebra of the
classical limit as an independent oracle, and evaluates a Kauffman-type
invariant of links in the solid torus.
"""

from .coeffring import LaurentPoly, ParamSet, RingElement, parse_canonical
from .params import GroundField, solve_parameters
from .algebra import (
    AlgebraContext,
    AlgebraElement,
    RewriteBudgetError,
    context,
    epsilon,
    involution,
    markov_trace,
    multiply,
    normalize_word,
    parse_word,
    quotient_to_ak,
    split,
)
from .brauer import DottedDiagram, closure_trace, enumerate_basis, from_word
from .invariant import BraidWord, kauffman_b, markov_move_check, parse_braid

__all__ = [
    "AlgebraContext", "AlgebraElement", "BraidWord", "DottedDiagram",
    "GroundField", "LaurentPoly", "ParamSet", "RewriteBudgetError",
    "RingElement", "closure_trace", "context", "enumerate_basis", "epsilon",
    "from_word", "involution", "kauffman_b", "markov_move_check",
    "markov_trace", "multiply", "normalize_word", "parse_braid",
    "parse_canonical", "parse_word", "quotient_to_ak", "solve_parameters",
    "split",
]

__version__ = "0.1.0"
