"""Solid-torus link invariants from closures of cylinder braids.

A braid on n strands in the cylinder is a word in t0 (the loop of the first
strand around the axis) and s1..s<n-1> (ordinary crossings).  Mapping t0 to
the cylinder generator and s_i to the braid generators of the algebra, the
invariant of the closed braid is

    L(beta) = x^{n-1} lambda^{exp(beta)} tr(beta),

where exp counts crossing letters with sign (t0 counts zero).  Conjugation
and stabilisation invariance are the two closure moves, and both are checked
exactly in the generic parameter mode.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .coeffring import RingElement
from .algebra import (
    AlgebraElement,
    coefficient_vanishes,
    context,
    markov_trace,
)


@dataclass(frozen=True)
class BraidWord:
    """A word in the cylinder braid group on n strands."""

    n: int
    letters: tuple[tuple[int, int], ...]  # (index, sign); index 0 is t0

    def __post_init__(self):
        for idx, sign in self.letters:
            if not 0 <= idx <= self.n - 1:
                raise ValueError(f"letter index {idx} out of range (n={self.n})")
            if sign not in (1, -1):
                raise ValueError("letter sign must be +-1")

    def exponent_sum(self) -> int:
        """Crossing count with sign; the axis loop does not count."""
        return sum(sign for idx, sign in self.letters if idx != 0)

    def inverse(self) -> BraidWord:
        return BraidWord(self.n, tuple((i, -s)
                                       for i, s in reversed(self.letters)))

    def __mul__(self, other: BraidWord) -> BraidWord:
        if self.n != other.n:
            raise ValueError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)

    def stabilised(self) -> BraidWord:
        """The same closure on one more strand, with one extra crossing."""
        return BraidWord(self.n + 1, self.letters + ((self.n, 1),))

    def render(self) -> str:
        if not self.letters:
            return ""
        out = []
        for idx, sign in self.letters:
            base = "t0" if idx == 0 else f"s{idx}"
            out.append(base if sign == 1 else base + "^-1")
        return " ".join(out)


_BRAID_TOKEN = re.compile(r"^(t0|s(\d+))(\^-1)?$")


def parse_braid(text: str, n: int) -> BraidWord:
    """Parse tokens t0, t0^-1, s<i>, s<i>^-1 into a braid word."""
    letters = []
    for pos, tok in enumerate(text.split()):
        m = _BRAID_TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad braid token {tok!r} at position {pos}")
        idx = 0 if m.group(1) == "t0" else int(m.group(2))
        if idx > n - 1:
            raise ValueError(
                f"braid letter {tok!r} at position {pos} needs more than "
                f"{n} strands")
        letters.append((idx, -1 if m.group(3) else 1))
    return BraidWord(n, tuple(letters))


def braid_to_element(w: BraidWord, k: int) -> AlgebraElement:
    """Image of the braid word in the n-strand algebra."""
    ctx = context(k)
    atoms = []
    for idx, sign in w.letters:
        if idx == 0:
            atoms.append(("y", 1, sign))
        else:
            atoms.append(("x", idx, sign))
    return AlgebraElement.from_word(ctx, w.n, tuple(atoms))


def kauffman_b(w: BraidWord, k: int) -> RingElement:
    """The solid-torus Kauffman-type invariant of the braid closure."""
    ctx = context(k)
    tr = markov_trace(braid_to_element(w, k))
    exp = w.exponent_sum()
    lam = ctx.lam ** exp
    return ctx.x ** (w.n - 1) * lam * tr


def invariants_equal(k: int, v1: RingElement, v2: RingElement) -> bool:
    """Exact equality of two invariant values in the generic mode."""
    return coefficient_vanishes(context(k), v1 - v2, "generic")


def markov_move_check(w: BraidWord, k: int, trials: int = 5,
                      seed: int = 0, max_conj_len: int = 3) -> bool:
    """Conjugation and stabilisation invariance of the braid-closure value."""
    base = kauffman_b(w, k)
    rng = random.Random(seed)
    letters = [(0, 1), (0, -1)] + [(i, s) for i in range(1, w.n)
                                   for s in (1, -1)]
    for _ in range(trials):
        conj = BraidWord(w.n, tuple(rng.choice(letters)
                                    for _ in range(rng.randint(1, max_conj_len))))
        moved = conj * w * conj.inverse()
        if not invariants_equal(k, base, kauffman_b(moved, k)):
            return False
    if not invariants_equal(k, base, kauffman_b(w.stabilised(), k)):
        return False
    return True
