"""The cyclotomic BMW-type algebra on n strands, as formal words plus rewriting.

Elements are finite linear combinations of generator words over the alphabet

    y^m        the cylinder generator (strand 1), any integer power,
    s<i>^+-1   the braid generator X_i crossing strands i, i+1,
    e<i>       the tangle idempotent on strands i, i+1,

with coefficients in :mod:`cylbmw.coeffring`.  Internally words also use the
shifted cylinder elements Y_j = X_{j-1}..X_1 Y X_1^{-1}..X_{j-1}^{-1} as
atomic letters (they power-reduce exactly like Y).

The heart of the module is ``split``: every element of the n-strand algebra
is rewritten as a combination of words w1 * gamma * w2 with w1, w2 on n-1
strands and gamma in {1, e_{n-1}, X_{n-1}, Y_n^j}.  Iterating the
conditional expectation over this form computes the Markov trace.  The
rewriting uses only identities that are consequences of the defining
relations, so its output is always equal to its input in the algebra;
termination is enforced by a step budget that turns any suspected divergence
into a loud :class:`RewriteBudgetError` instead of a wrong answer.

Two subtleties deserve a note:

* The last term of the sliding rule for e_{i-1} Y_i is taken to be
  delta lambda A_1 e_{i-1} (with index i-1, matching the pattern of the
  derivation), not e_1.
* Conjugated cylinder powers Y_n^l do not commute with Y or with each other;
  all moves applied here commute Y_n only past generators of index <= n-2,
  which is safe, and otherwise fall back to expanding Y_n one level.
"""

from __future__ import annotations

import os
import re
from functools import lru_cache
from typing import Iterable, Iterator

from .coeffring import (
    ParamSet,
    RingElement,
    classical_params,
    full_params,
    vanishes_after_substitution,
)
from . import params as params_mod

Atom = tuple
Word = tuple

DEFAULT_STEP_BUDGET = 10 ** 6
_BUDGET_ENV = "CYLBMW_STEP_BUDGET"


class RewriteBudgetError(RuntimeError):
    """Raised when the rewriting engine exceeds its step budget.

    The message names the word that was being reduced so that divergence is
    diagnosable; silent wrong output is never produced.
    """


class AlgebraContext:
    """Shared state for one (k, classical-or-generic) choice of coefficients.

    Holds the coefficient ring, the Y power-reduction tables, the scalar
    constants used by the rewrite rules, and the memo tables of the engine.
    """

    def __init__(self, k: int, classical: bool = False,
                 step_budget: int | None = None):
        self.k = k
        self.classical = classical
        self.ring: ParamSet = classical_params(k) if classical else full_params(k)
        self.qd = params_mod.qdata(k, classical)
        if step_budget is None:
            step_budget = int(os.environ.get(_BUDGET_ENV, DEFAULT_STEP_BUDGET))
        self.step_budget = step_budget
        self.steps = 0
        self._split_memo: dict = {}
        self._local_memo: dict = {}
        self._redsim_memo: dict = {}
        one = RingElement.const(self.ring, 1)
        self.one = one
        self.zero = RingElement.const(self.ring, 0)
        if classical:
            self.lam = one
            self.kap = one
            self.delta = self.zero
            self.x = RingElement.var(self.ring, "X")
        else:
            self.lam = RingElement.var(self.ring, "L")
            self.kap = RingElement.var(self.ring, "K")
            self.delta = RingElement.var(self.ring, "D")
            self.x = RingElement.var(self.ring, "X")

    def A(self, m: int) -> RingElement:
        """The closed-loop value A_m for 0 <= m < k, with A_0 = x."""
        if not 0 <= m < self.k:
            raise ValueError(f"A_{m} is not a basic loop value")
        if m == 0:
            return self.x
        return RingElement.var(self.ring, f"A{m}")

    def loop_value(self, m: int) -> RingElement:
        """e_1 Y^m e_1 = loop_value(m) e_1 for any integer m."""
        total = self.zero
        for s, q in enumerate(self.qd.power(m)):
            if not q.is_zero():
                total = total + q * self.A(s)
        return total

    def reset_steps(self) -> None:
        self.steps = 0

    def tick(self, word: Word) -> None:
        self.steps += 1
        if self.steps > self.step_budget:
            raise RewriteBudgetError(
                f"rewrite budget of {self.step_budget} steps exceeded while "
                f"reducing {render_word(word)}")

    def tr_gamma(self, gamma: Atom | None) -> RingElement:
        """Value of the conditional expectation on a standard-form letter."""
        if gamma is None:
            return self.one
        kind = gamma[0]
        xinv = self.x.inverse()
        if kind == "e":
            return xinv
        if kind == "x":
            return xinv * (self.lam.inverse() if gamma[2] == 1 else self.lam)
        if kind == "y":
            return self.A(gamma[2]) * xinv
        raise ValueError(f"not a standard-form letter: {gamma}")


@lru_cache(maxsize=None)
def context(k: int, classical: bool = False) -> AlgebraContext:
    return AlgebraContext(k, classical)


# ---------------------------------------------------------------------------
# atoms and words
# ---------------------------------------------------------------------------

def atom_level(a: Atom) -> int:
    if a[0] == "y":
        return a[1]
    return a[1] + 1


def y(m: int = 1, j: int = 1) -> Atom:
    return ("y", j, m)


def x(i: int, sign: int = 1) -> Atom:
    return ("x", i, sign)


def e(i: int) -> Atom:
    return ("e", i)


_TOKEN_RE = re.compile(r"^(y(\^(-?\d+))?|s(\d+)(\^-1)?|e(\d+))$")


def parse_word(text: str, n: int) -> Word:
    """Parse whitespace-separated tokens y, y^m, s<i>, s<i>^-1, e<i>."""
    atoms: list[Atom] = []
    for pos, tok in enumerate(text.split()):
        m = _TOKEN_RE.match(tok)
        if not m:
            raise ValueError(f"bad token {tok!r} at position {pos}")
        if tok.startswith("y"):
            power = int(m.group(3)) if m.group(3) else 1
            atoms.append(("y", 1, power))
        elif tok.startswith("s"):
            i = int(m.group(4))
            if not 1 <= i <= n - 1:
                raise ValueError(f"index out of range in {tok!r} at position "
                                 f"{pos} (n = {n})")
            atoms.append(("x", i, -1 if m.group(5) else 1))
        else:
            i = int(m.group(6))
            if not 1 <= i <= n - 1:
                raise ValueError(f"index out of range in {tok!r} at position "
                                 f"{pos} (n = {n})")
            atoms.append(("e", i))
    return tuple(atoms)


def render_word(word: Word) -> str:
    if not word:
        return "1"
    out = []
    for a in word:
        if a[0] == "y":
            body = "y" if a[1] == 1 else f"y[{a[1]}]"
            out.append(body if a[2] == 1 else f"{body}^{a[2]}")
        elif a[0] == "x":
            out.append(f"s{a[1]}" if a[2] == 1 else f"s{a[1]}^-1")
        else:
            out.append(f"e{a[1]}")
    return " ".join(out)


def expand_composites(word: Word) -> Word:
    """Rewrite composite letters Y_j (j >= 2) through primitive generators."""
    out: list[Atom] = []
    for a in word:
        if a[0] == "y" and a[1] >= 2:
            j, m = a[1], a[2]
            chain = [("x", i, 1) for i in range(j - 1, 0, -1)]
            out.extend(chain)
            out.append(("y", 1, m))
            out.extend(("x", i, -1) for i in range(1, j))
        else:
            out.append(a)
    return tuple(out)


class AlgebraElement:
    """A finite linear combination of words with ring coefficients."""

    __slots__ = ("ctx", "n", "terms")

    def __init__(self, ctx: AlgebraContext, n: int,
                 terms: dict[Word, RingElement] | None = None):
        self.ctx = ctx
        self.n = n
        self.terms: dict[Word, RingElement] = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    self.terms[w] = c

    @staticmethod
    def from_word(ctx: AlgebraContext, n: int, word: Iterable[Atom],
                  coeff: RingElement | None = None) -> AlgebraElement:
        word = tuple(word)
        for a in word:
            if atom_level(a) > n:
                raise ValueError(
                    f"letter {a} needs more than {n} strands")
        return AlgebraElement(ctx, n, {word: coeff if coeff is not None
                                       else ctx.one})

    @staticmethod
    def one(ctx: AlgebraContext, n: int) -> AlgebraElement:
        return AlgebraElement(ctx, n, {(): ctx.one})

    @staticmethod
    def zero(ctx: AlgebraContext, n: int) -> AlgebraElement:
        return AlgebraElement(ctx, n, {})

    def _add_term(self, word: Word, coeff: RingElement) -> None:
        old = self.terms.get(word)
        s = coeff if old is None else old + coeff
        if s.is_zero():
            self.terms.pop(word, None)
        else:
            self.terms[word] = s

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement(self.ctx, self.n, dict(self.terms))
        for w, c in other.terms.items():
            out._add_term(w, c)
        return out

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement(self.ctx, self.n, dict(self.terms))
        for w, c in other.terms.items():
            out._add_term(w, -c)
        return out

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.ctx, self.n,
                              {w: -c for w, c in self.terms.items()})

    def scale(self, c: RingElement) -> AlgebraElement:
        if c.is_zero():
            return AlgebraElement.zero(self.ctx, self.n)
        return AlgebraElement(self.ctx, self.n,
                              {w: v * c for w, v in self.terms.items()})

    def is_zero_literal(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            pieces.append(f"{self.terms[w].canonical()} * {render_word(w)}")
        return " + ".join(pieces)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear concatenation followed by word normalisation."""
    if a.ctx is not b.ctx or a.n != b.n:
        raise ValueError("operands live in different algebras")
    a.ctx.reset_steps()
    out = AlgebraElement.zero(a.ctx, a.n)
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            for w, c in _normalise_word(a.ctx, w1 + w2):
                out._add_term(w, c * c1 * c2)
    return out


def normalize_word(ctx: AlgebraContext, n: int, word: Iterable[Atom],
                   ) -> AlgebraElement:
    """Expand inverse braid letters and reduce cylinder powers into [0, k)."""
    ctx.reset_steps()
    out = AlgebraElement.zero(ctx, n)
    for w, c in _normalise_word(ctx, tuple(word)):
        out._add_term(w, c)
    return out


def _pair_simplify(ctx: AlgebraContext, w: Word,
                   ) -> tuple[Word, RingElement] | None:
    """One adjacent-pair relation: inverse cancellation, idempotent square,
    braid-idempotent absorption.  Returns (word, extra coefficient) or None.
    """
    for pos in range(len(w) - 1):
        a, b = w[pos], w[pos + 1]
        if a[0] == "x" and b[0] == "x" and a[1] == b[1] and a[2] == -b[2]:
            return (w[:pos] + w[pos + 2:], ctx.one)
        if a[0] == "e" and b == a:
            return (w[:pos] + w[pos + 1:], ctx.x)
        if a[0] == "e" and b[0] == "x" and a[1] == b[1]:
            lam = ctx.lam if b[2] == 1 else ctx.lam.inverse()
            return (w[:pos + 1] + w[pos + 2:], lam)
        if a[0] == "x" and b[0] == "e" and a[1] == b[1]:
            lam = ctx.lam if a[2] == 1 else ctx.lam.inverse()
            return (w[:pos] + w[pos + 1:], lam)
    return None


def _normalise_word(ctx: AlgebraContext, word: Word,
                    ) -> list[tuple[Word, RingElement]]:
    """All X^{-1} letters expanded, adjacent equal-index Y powers merged and
    reduced into [0, k), adjacent-pair relations applied.
    Returns (word, coeff) pairs."""
    work = [(word, ctx.one)]
    done: list[tuple[Word, RingElement]] = []
    while work:
        w, c = work.pop()
        ctx.tick(w)
        w = _merge_y_runs(w)
        pair = _pair_simplify(ctx, w)
        if pair is not None:
            work.append((pair[0], c * pair[1]))
            continue
        changed = False
        for pos, a in enumerate(w):
            if a[0] == "x" and a[2] == -1:
                pre, post = w[:pos], w[pos + 1:]
                work.append((pre + (("x", a[1], 1),) + post, c))
                work.append((pre + post, -(c * ctx.delta)))
                work.append((pre + (("e", a[1]),) + post, c * ctx.delta))
                changed = True
                break
            if a[0] == "y" and not 0 <= a[2] < ctx.k:
                pre, post = w[:pos], w[pos + 1:]
                for s, q in enumerate(ctx.qd.power(a[2])):
                    if q.is_zero():
                        continue
                    mid = (("y", a[1], s),) if s else ()
                    work.append((pre + mid + post, c * q))
                changed = True
                break
        if not changed:
            done.append((w, c))
    return done


def _merge_y_runs(word: Word) -> Word:
    out: list[Atom] = []
    for a in word:
        if a[0] == "y" and out and out[-1][0] == "y" and out[-1][1] == a[1]:
            m = out[-1][2] + a[2]
            out.pop()
            if m:
                out.append(("y", a[1], m))
        elif a[0] == "y" and a[2] == 0:
            continue
        else:
            out.append(a)
    return tuple(out)


# ---------------------------------------------------------------------------
# the two-strand local engine at index i
#
# Words over {Y_i^a, X_i, X_i^{-1}, e_i, Y_{i+1}^b} reduce to combinations of
# Y_i^a gamma Y_i^b with gamma in {1, e_i, X_i, Y_{i+1}^j}.  Every rule below
# is one of the quoted consequences of the defining relations; the staged
# strategy (inverse elimination, shifted-cylinder shortcuts, idempotent
# pipeline, braid-power reduction) strictly decreases a word measure.
# ---------------------------------------------------------------------------

def local_reduce(ctx: AlgebraContext, i: int, word: Word,
                 ) -> list[tuple[RingElement, int, Atom | None, int]]:
    """Reduce a local word at index i to terms (coeff, a, gamma, b)."""
    key = (i, word)
    got = ctx._local_memo.get(key)
    if got is not None:
        return got
    out: list[tuple[RingElement, int, Atom | None, int]] = []
    work: list[tuple[Word, RingElement]] = [(word, ctx.one)]
    while work:
        w, c = work.pop()
        ctx.tick(w)
        w, splits = _local_norm(ctx, i, w)
        if splits is not None:
            work.extend((nw, c * nc) for nw, nc in splits)
            continue
        term = _local_terminal(i, w)
        if term is not None:
            a, gamma, b = term
            out.append((c, a, gamma, b))
            continue
        work.extend((nw, c * nc) for nw, nc in _local_step(ctx, i, w))
    merged = _merge_local_terms(ctx, out)
    ctx._local_memo[key] = merged
    return merged


def _merge_local_terms(ctx, terms):
    acc: dict[tuple, RingElement] = {}
    for c, a, gamma, b in terms:
        key = (a, gamma, b)
        old = acc.get(key)
        s = c if old is None else old + c
        if s.is_zero():
            acc.pop(key, None)
        else:
            acc[key] = s
    return [(c, a, gamma, b) for (a, gamma, b), c in acc.items()]


def _local_norm(ctx, i, w):
    """Merge/reduce Y powers; return (word, None) or (word, split list)."""
    w = _merge_y_runs(w)
    for pos, a in enumerate(w):
        if a[0] == "y" and not 0 <= a[2] < ctx.k:
            pre, post = w[:pos], w[pos + 1:]
            splits = []
            for s, q in enumerate(ctx.qd.power(a[2])):
                if q.is_zero():
                    continue
                mid = (("y", a[1], s),) if s else ()
                splits.append((pre + mid + post, q))
            return w, splits
    return w, None


def _local_terminal(i, w):
    """Match [Y_i^a] [gamma] [Y_i^b]; gamma is a single non-Y_i letter."""
    a = b = 0
    gamma = None
    idx = 0
    if idx < len(w) and w[idx][0] == "y" and w[idx][1] == i:
        a = w[idx][2]
        idx += 1
    if idx < len(w):
        atom = w[idx]
        if atom[0] == "y" and atom[1] == i:
            return None  # unmerged runs are not in normal form
        if atom[0] == "x" and atom[2] == -1:
            return None
        gamma = atom
        idx += 1
    if idx < len(w):
        atom = w[idx]
        if atom[0] != "y" or atom[1] != i:
            return None
        b = atom[2]
        idx += 1
    if idx != len(w):
        return None
    return (a, gamma, b)


def _local_step(ctx, i, w) -> list[tuple[Word, RingElement]]:
    """One reduction step on a non-terminal normalised local word."""
    one, lam, kap, dlt = ctx.one, ctx.lam, ctx.kap, ctx.delta

    def yp(m, j=0):
        return (("y", i + j, m),) if m else ()

    # 1. eliminate inverse braid letters
    for pos, a in enumerate(w):
        if a[0] == "x" and a[2] == -1:
            pre, post = w[:pos], w[pos + 1:]
            return [(pre + (("x", i, 1),) + post, one),
                    (pre + post, -dlt),
                    (pre + (("e", i),) + post, dlt)]
    # 2. shifted-cylinder pair shortcuts (adjacent letters)
    for pos in range(len(w) - 1):
        a, b = w[pos], w[pos + 1]
        pre, post = w[:pos], w[pos + 2:]
        if a[0] == "y" and a[1] == i + 1:
            l = a[2]
            if b[0] == "x":
                # Y_{i+1}^l X_i = X_i Y_i^l
                return [(pre + (("x", i, 1),) + yp(l) + post, one)]
            if b[0] == "e":
                # Y_{i+1}^l e_i = lambda^{-1} X_i Y_i^l e_i
                return [(pre + (("x", i, 1),) + yp(l) + (("e", i),) + post,
                         lam.inverse())]
        if b[0] == "y" and b[1] == i + 1:
            j = b[2]
            if a[0] == "e":
                # e_i Y_{i+1}^j = lam e Y^j X - delta lam e Y^j + delta lam A_j e
                return [
                    (pre + (("e", i),) + yp(j) + (("x", i, 1),) + post, lam),
                    (pre + (("e", i),) + yp(j) + post, -(dlt * lam)),
                    (pre + (("e", i),) + post, dlt * lam * ctx.A(j)),
                ]
            if a[0] == "x":
                # X_i Y_{i+1}^j expanded through the square of the braiding
                eyjx = (("e", i),) + yp(j) + (("x", i, 1),)
                eyj = (("e", i),) + yp(j)
                return [
                    (pre + yp(j) + (("x", i, 1),) + post, one),
                    (pre + yp(j) + post, -dlt),
                    (pre + yp(j) + (("e", i),) + post, dlt),
                    (pre + (("y", i + 1, j),) + post, dlt),
                    (pre + eyjx + post, -(dlt * lam)),
                    (pre + eyj + post, dlt * dlt * lam),
                    (pre + (("e", i),) + post, -(dlt * dlt * lam * ctx.A(j))),
                ]
    # 3. a shifted-cylinder letter left non-terminally: expand one level
    for pos, a in enumerate(w):
        if a[0] == "y" and a[1] == i + 1:
            pre, post = w[:pos], w[pos + 1:]
            return [(pre + (("x", i, 1),) + yp(a[2]) + (("x", i, -1),) + post,
                     one)]
    # 4. adjacent braid squares
    for pos in range(len(w) - 1):
        if w[pos][0] == "x" and w[pos + 1][0] == "x":
            pre, post = w[:pos], w[pos + 2:]
            return [(pre + post, one),
                    (pre + (("x", i, 1),) + post, dlt),
                    (pre + (("e", i),) + post, -(dlt * lam))]
    # 5. idempotent pipeline around the leftmost e_i
    epos = next((p for p, a in enumerate(w) if a[0] == "e"), None)
    if epos is not None:
        right = _neighbour(w, epos, +1)
        if right is not None:
            rpos, gap = right
            if w[rpos][0] == "e":
                # e Y^a e = A_a e
                return [(w[:epos] + (("e", i),) + w[rpos + 1:], ctx.A(gap))]
            if w[rpos][0] == "x":
                if gap == 0:
                    return [(w[:epos] + (("e", i),) + w[rpos + 1:], lam)]
                # e Y^a X = kl e Y^{a-1} X Y^{-1} - kdl e Y^{a-2} + kdl A_{a-1} e Y^{-1}
                kl = kap * lam
                pre, post = w[:epos], w[rpos + 1:]
                return [
                    (pre + (("e", i),) + yp(gap - 1) + (("x", i, 1),)
                     + yp(-1) + post, kl),
                    (pre + (("e", i),) + yp(gap - 2) + post, -(kap * dlt * lam)),
                    (pre + (("e", i),) + yp(-1) + post,
                     kap * dlt * lam * ctx.A(gap - 1)),
                ]
        left = _neighbour(w, epos, -1)
        if left is not None:
            lpos, gap = left
            if w[lpos][0] == "x":
                if gap == 0:
                    return [(w[:lpos] + (("e", i),) + w[epos + 1:], lam)]
                # X Y^a e mirrors the previous rule
                kl = kap * lam
                pre, post = w[:lpos], w[epos + 1:]
                return [
                    (pre + yp(-1) + (("x", i, 1),) + yp(gap - 1)
                     + (("e", i),) + post, kl),
                    (pre + yp(gap - 2) + (("e", i),) + post, -(kap * dlt * lam)),
                    (pre + yp(-1) + (("e", i),) + post,
                     kap * dlt * lam * ctx.A(gap - 1)),
                ]
    # 6. pure braid words: count braid letters
    xs = [p for p, a in enumerate(w) if a[0] == "x"]
    if len(xs) == 2:
        # flcc: X Y^b X = Y_{i+1}^b + delta X Y^b - delta lam Y_{i+1}^b e
        p1, p2 = xs
        b = w[p1 + 1][2] if p1 + 1 < p2 else 0
        pre, post = w[:p1], w[p2 + 1:]
        return [
            (pre + (("y", i + 1, b),) + post, one),
            (pre + (("x", i, 1),) + yp(b) + post, dlt),
            (pre + (("y", i + 1, b), ("e", i)) + post, -(dlt * lam)),
        ]
    if len(xs) >= 3:
        return _redsim_window(ctx, i, w, xs)
    raise AssertionError(f"no local rule matched {render_word(w)}")


def _neighbour(w, pos, direction):
    """Nearest non-Y letter, looking through one merged Y power.

    Returns (position, gap exponent) or None at the word boundary.
    """
    p = pos + direction
    gap = 0
    if 0 <= p < len(w) and w[p][0] == "y":
        gap = w[p][2]
        p += direction
    if 0 <= p < len(w):
        return (p, gap)
    return None


def _redsim_window(ctx, i, w, xs) -> list[tuple[Word, RingElement]]:
    """Rewrite the leftmost three braid letters using the braid-power
    recursion, leaving at most two of them per output word."""
    p1, p2, p3 = xs[0], xs[1], xs[2]
    s = w[p1 + 1][2] if p1 + 1 < p2 and w[p1 + 1][0] == "y" else 0
    t = w[p2 + 1][2] if p2 + 1 < p3 and w[p2 + 1][0] == "y" else 0
    assert s >= 1 and t >= 1, "braid squares must be collapsed first"
    pre, post = w[:p1], w[p3 + 1:]
    out = []
    for coeff, form in _redsim(ctx, i, s, t):
        kind = form[0]
        if kind == "XX":
            _, a, b = form
            mid = (("x", i, 1),) + _ypow(i, a) + (("x", i, 1),) + _ypow(i, b)
        elif kind == "YX":
            _, a, b = form
            mid = _ypow(i, a) + (("x", i, 1),) + _ypow(i, b)
        else:
            mid = form[1]
        out.append((pre + mid + post, coeff))
    return out


def _ypow(i, m):
    return (("y", i, m),) if m else ()


def _redsim(ctx, i, s, t):
    """X Y^s X Y^t X as sum of X Y^a X Y^b, Y^a X Y^b, and e-words.

    The recursion on s follows the braid-power identity
    X Y X Y^t X = Y^t X Y X^2 together with Y^t X Y X = X Y X Y^t.
    """
    key = (i, s, t)
    got = ctx._redsim_memo.get(key)
    if got is not None:
        return got
    one, lam, dlt = ctx.one, ctx.lam, ctx.delta
    ex = ("x", i, 1)
    ee = ("e", i)
    if s == 1:
        out = [
            (one, ("YX", t, 1)),
            (dlt, ("XX", 1, t)),
            (-(dlt * lam), ("E", _ypow(i, t) + (ex,) + _ypow(i, 1) + (ee,))),
        ]
    else:
        out = []
        for c, form in _redsim(ctx, i, s - 1, t):
            kind = form[0]
            if kind == "XX":
                out.append((c, ("XX", form[1] + 1, form[2])))
            elif kind == "YX":
                a, b = form[1], form[2]
                # X Y X^{-1} Y^a X Y^b expands through the skein relation
                for c1, f1 in _redsim(ctx, i, 1, a):
                    if f1[0] == "XX":
                        out.append((c * c1, ("XX", f1[1], f1[2] + b)))
                    elif f1[0] == "YX":
                        out.append((c * c1, ("YX", f1[1], f1[2] + b)))
                    else:
                        out.append((c * c1, ("E", f1[1] + _ypow(i, b))))
                out.append((-(c * dlt), ("XX", a + 1, b)))
                out.append((c * dlt,
                            ("E", (ex,) + _ypow(i, 1) + (ee,) + _ypow(i, a)
                             + (ex,) + _ypow(i, b))))
            else:
                word = form[1]
                out.append((c, ("E", (ex,) + _ypow(i, 1) + (ex,) + word)))
                out.append((-(c * dlt), ("E", (ex,) + _ypow(i, 1) + word)))
                out.append((c * dlt, ("E", (ex,) + _ypow(i, 1) + (ee,) + word)))
    ctx._redsim_memo[key] = out
    return out


# ---------------------------------------------------------------------------
# the tower: splitting at level n
# ---------------------------------------------------------------------------

SplitTerm = tuple  # (coeff, w1, gamma, w2)


def split(element: AlgebraElement, n: int | None = None) -> list[SplitTerm]:
    """Rewrite an element as sum of coeff * w1 * gamma * w2 with w1, w2 on
    n-1 strands and gamma in {1, e_{n-1}, X_{n-1}, Y_n^j} (None encodes 1).
    """
    if n is None:
        n = element.n
    element.ctx.reset_steps()
    acc: dict[tuple, RingElement] = {}
    for word, coeff in element.terms.items():
        for c, w1, gamma, w2 in split_word(element.ctx, n, word):
            key = (w1, gamma, w2)
            old = acc.get(key)
            s = c * coeff if old is None else old + c * coeff
            if s.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = s
    return [(c, w1, gamma, w2) for (w1, gamma, w2), c in acc.items()]


def split_word(ctx: AlgebraContext, n: int, word: Word) -> list[SplitTerm]:
    key = (n, word)
    got = ctx._split_memo.get(key, False)
    if got is None:
        raise RewriteBudgetError(
            f"cyclic reduction detected on {render_word(word)}")
    if got is not False:
        return got
    ctx._split_memo[key] = None  # in-progress sentinel
    try:
        result = _split_uncached(ctx, n, word)
    except RecursionError:
        ctx._split_memo.pop(key, None)
        raise RewriteBudgetError(
            f"rewriting recursion exhausted on {render_word(word)}") from None
    except RewriteBudgetError:
        ctx._split_memo.pop(key, None)
        raise
    ctx._split_memo[key] = result
    return result


def _split_uncached(ctx: AlgebraContext, n: int, word: Word) -> list[SplitTerm]:
    if n == 1:
        m = sum(a[2] for a in word)
        if any(a[0] != "y" or a[1] != 1 for a in word):
            raise ValueError(f"{render_word(word)} does not live on 1 strand")
        out = []
        for s, q in enumerate(ctx.qd.power(m)):
            if not q.is_zero():
                out.append((q, (), ("y", 1, s) if s else None, ()))
        return out
    # state: list of (coeff, w1, gamma, w2); absorb letters left to right
    state: list[list] = [[ctx.one, (), None, ()]]
    for a in word:
        if atom_level(a) < n:
            for t in state:
                t[3] = t[3] + (a,)
            continue
        nxt: dict[tuple, RingElement] = {}

        def push(c, w1, gamma, w2):
            key = (w1, gamma, w2)
            old = nxt.get(key)
            s = c if old is None else old + c
            if s.is_zero():
                nxt.pop(key, None)
            else:
                nxt[key] = s

        for coeff, w1, gamma, w2 in state:
            if gamma is None:
                for c2, w1b, g2, w2b in _start_gamma(ctx, n, a):
                    push(coeff * c2, w1 + w2 + w1b, g2, w2b)
            else:
                for c2, lpart, g2, rpart in _merge(ctx, n, gamma, w2, a):
                    push(coeff * c2, w1 + lpart, g2, rpart)
        state = [[c, w1, gamma, w2] for (w1, gamma, w2), c in nxt.items()]
        if not state:
            break
    return [(c, w1, gamma, w2) for c, w1, gamma, w2 in state]


def _start_gamma(ctx, n, a) -> list[SplitTerm]:
    """Absorb a level-n letter into an empty gamma slot."""
    if a[0] == "x":
        if a[2] == 1:
            return [(ctx.one, (), a, ())]
        return [(ctx.one, (), ("x", a[1], 1), ()),
                (-ctx.delta, (), None, ()),
                (ctx.delta, (), ("e", a[1]), ())]
    if a[0] == "e":
        return [(ctx.one, (), a, ())]
    out = []
    for s, q in enumerate(ctx.qd.power(a[2])):
        if not q.is_zero():
            out.append((q, (), ("y", n, s) if s else None, ()))
    return out


def _merge(ctx, n, gamma, v, z) -> list[SplitTerm]:
    """Reduce gamma * v * z (v on n-1 strands, gamma and z of level n)."""
    if z[0] == "x" and z[2] == -1:
        out = []
        for c, w1, g2, w2 in _merge(ctx, n, gamma, v, ("x", z[1], 1)):
            out.append((c, w1, g2, w2))
        out.append((-ctx.delta, (), gamma, v))
        for c, w1, g2, w2 in _merge(ctx, n, gamma, v, ("e", z[1])):
            out.append((c * ctx.delta, w1, g2, w2))
        return out
    if z[0] == "y":
        if all(a[0] == "y" and a[1] == n - 1 for a in v):
            # everything in sight is local to the top two strands
            return _local_terms(ctx, n, (gamma,) + v + (z,))
        # otherwise expand the arriving letter one level and resplit
        zexp = (("x", n - 1, 1), ("y", n - 1, z[2]), ("x", n - 1, -1))
        return split_word(ctx, n, (gamma,) + v + zexp)
    if gamma[0] == "y":
        return _merge_cyl_left(ctx, n, gamma, v, z)
    # Case gamma in {e, X}: commute the parts of split(v) outwards
    out: list[SplitTerm] = []
    for cv, u1, alpha, u2 in split_word(ctx, n - 1, v):
        for cc, l, g2, r in _core(ctx, n, gamma, alpha, z):
            out.append((cv * cc, u1 + l, g2, r + u2))
    return out


def _merge_cyl_left(ctx, n, gamma, v, z) -> list[SplitTerm]:
    """gamma = Y_n^l.  Only letters of index <= n-2 commute with it."""
    l = gamma[2]
    # peel letters that commute with Y_n off the left of v
    peeled = 0
    while peeled < len(v) and v[peeled][0] != "y":
        peeled += 1
    prefix, v = v[:peeled], v[peeled:]
    if not v:
        out = _core(ctx, n, gamma, None, z)
    elif all(a[0] == "y" and a[1] == n - 1 for a in v):
        out = _local_terms(ctx, n, ((("y", n, l),) + v + (z,)))
    else:
        # peel the conjugation one level: Y_n^l = X Y_{n-1}^l X^{-1}, and
        # reduce X^{-1} v z first so the two halves of the expansion are
        # never re-paired with each other (that would cycle).
        out = []
        tail = split_word(ctx, n, (("x", n - 1, -1),) + v + (z,))
        for c, left, g2, right in tail:
            w = (("x", n - 1, 1), ("y", n - 1, l)) + left \
                + ((g2,) if g2 is not None else ()) + right
            for c2, w1, g3, w2 in split_word(ctx, n, w):
                out.append((c * c2, w1, g3, w2))
    if not peeled:
        return out
    return [(c, prefix + w1, g, w2) for c, w1, g, w2 in out]


def _local_terms(ctx, n, word) -> list[SplitTerm]:
    """Run the local engine at index n-1 and lift its output to split terms."""
    local = []
    for a in word:
        if a[0] == "y" and a[1] == n:
            local.append(("y", n, a[2]))
        elif a[0] == "y" and a[1] == n - 1:
            local.append(("y", n - 1, a[2]))
        else:
            local.append(a)
    out = []
    for c, a_exp, g, b_exp in local_reduce(ctx, n - 1, tuple(local)):
        w1 = (("y", n - 1, a_exp),) if a_exp else ()
        w2 = (("y", n - 1, b_exp),) if b_exp else ()
        out.append((c, w1, g, w2))
    return out


def _core(ctx, n, g1, alpha, g2) -> list[SplitTerm]:
    """Reduce g1 * alpha * g2 with alpha a split letter of level n-1."""
    i = n - 1
    if alpha is not None and alpha[0] == "y" and alpha[1] == n - 1:
        return _local_terms(ctx, n, (g1, alpha, g2))
    if alpha is None:
        return _local_terms(ctx, n, (g1, g2))
    # alpha in {e_{n-2}, X_{n-2}}: it commutes with any cylinder letter Y_n
    if g1[0] == "y":
        out = []
        for c, w1, g, w2 in _local_terms(ctx, n, (g1, g2)):
            out.append((c, (alpha,) + w1, g, w2))
        return out
    if g2[0] == "y":
        out = []
        for c, w1, g, w2 in _local_terms(ctx, n, (g1, g2)):
            out.append((c, w1, g, w2 + (alpha,)))
        return out
    return _interface_table(ctx, n, g1, alpha, g2)


def _interface_table(ctx, n, g1, alpha, g2) -> list[SplitTerm]:
    """The nine sandwich products with alpha one level down."""
    i, j = n - 1, n - 2
    one, lam, dlt = ctx.one, ctx.lam, ctx.delta
    ei, xi = ("e", i), ("x", i, 1)
    ej, xj = ("e", j), ("x", j, 1)
    xjinv = ("x", j, -1)
    k1, k2 = g1[0], g2[0]
    ak = alpha[0]
    if ak == "x":
        if k1 == "e" and k2 == "e":
            return [(lam.inverse(), (), ei, ())]
        if k1 == "e" and k2 == "x":
            return [(one, (), ei, (ej,))]
        if k1 == "x" and k2 == "e":
            return [(one, (ej,), ei, ())]
        if k1 == "x" and k2 == "x":
            return [(one, (xj,), xi, (xj,))]
    else:
        if k1 == "e" and k2 == "e":
            return [(one, (), ei, ())]
        if k1 == "e" and k2 == "x":
            return [(one, (), ei, (xjinv,))]
        if k1 == "x" and k2 == "e":
            return [(one, (xjinv,), ei, ())]
        if k1 == "x" and k2 == "x":
            return [(one, (xjinv,), ei, (xjinv,))]
    raise AssertionError(f"unhandled interface {g1} {alpha} {g2}")


# ---------------------------------------------------------------------------
# conditional expectation, trace, involutions, quotient
# ---------------------------------------------------------------------------

def epsilon(a: AlgebraElement, n: int | None = None) -> AlgebraElement:
    """The conditional expectation onto one strand fewer.

    For a = sum c w1 gamma w2 with gamma over the top strand this is
    sum c tr(gamma) w1 w2.
    """
    if n is None:
        n = a.n - 1
    if a.n != n + 1:
        raise ValueError("epsilon expects an element on n + 1 strands")
    out = AlgebraElement.zero(a.ctx, n)
    for c, w1, gamma, w2 in split(a, n + 1):
        out._add_term(w1 + w2, c * a.ctx.tr_gamma(gamma))
    # re-normalise so coefficients combine across equal words
    final = AlgebraElement.zero(a.ctx, n)
    for w, c in out.terms.items():
        for nw, nc in _normalise_word(a.ctx, w):
            final._add_term(nw, c * nc)
    return final


def markov_trace(a: AlgebraElement) -> RingElement:
    """The Markov trace, normalised so that tr(1) = 1.

    Computed by iterating the conditional expectation down to one strand,
    where tr(Y^m) = A_m / x.  Coefficients are carried symbolically; they are
    only meaningful in the generic or classical parameter modes.
    """
    ctx = a.ctx
    ctx.reset_steps()
    level = a.n
    current = a
    while level > 1:
        current = epsilon(current, level - 1)
        level -= 1
    total = ctx.zero
    xinv = ctx.x.inverse()
    for word, c in current.terms.items():
        m = sum(atom[2] for atom in word)
        for s, q in enumerate(ctx.qd.power(m)):
            if not q.is_zero():
                total = total + c * q * ctx.A(s) * xinv
    return total


def involution(a: AlgebraElement, which: str) -> AlgebraElement:
    """The involutions star (semilinear), dagger (index flip), bar (reversal)."""
    ctx = a.ctx
    if which == "star":
        if ctx.classical:
            smap = params_mod.classical_star_map(ctx.k)
        else:
            smap, _ = params_mod.star_map(ctx.k)
        out = AlgebraElement.zero(ctx, a.n)
        for word, c in a.terms.items():
            mapped = []
            for atom in expand_composites(word):
                if atom[0] == "x":
                    mapped.append(("x", atom[1], -atom[2]))
                elif atom[0] == "y":
                    mapped.append(("y", 1, -atom[2]))
                else:
                    mapped.append(atom)
            cc = c.substitute(smap, ctx.ring)
            for nw, nc in _normalise_word(ctx, tuple(mapped)):
                out._add_term(nw, cc * nc)
        return out
    if which == "dagger":
        nn = a.n
        out = AlgebraElement.zero(ctx, nn)
        for word, c in a.terms.items():
            mapped = []
            for atom in expand_composites(word):
                if atom[0] == "x":
                    mapped.append(("x", nn - atom[1], atom[2]))
                elif atom[0] == "e":
                    mapped.append(("e", nn - atom[1]))
                else:
                    mapped.append(("y", nn, atom[2]))
            for nw, nc in _normalise_word(ctx, expand_composites(tuple(mapped))):
                out._add_term(nw, c * nc)
        return out
    if which == "bar":
        out = AlgebraElement.zero(ctx, a.n)
        for word, c in a.terms.items():
            rev = tuple(reversed(expand_composites(word)))
            for nw, nc in _normalise_word(ctx, rev):
                out._add_term(nw, c * nc)
        return out
    raise ValueError(f"unknown involution {which!r}")


def quotient_to_ak(a: AlgebraElement) -> AlgebraElement:
    """Image in the cyclotomic Hecke quotient: e_i -> 0 and the quadratic
    braid relation X_i^2 = delta X_i + 1 applied until stable."""
    ctx = a.ctx
    ctx.reset_steps()
    out = AlgebraElement.zero(ctx, a.n)
    work = [(expand_composites(w), c) for w, c in a.terms.items()]
    while work:
        w, c = work.pop()
        ctx.tick(w)
        if any(atom[0] == "e" for atom in w):
            continue
        w = _merge_y_runs(w)
        changed = False
        for pos, atom in enumerate(w):
            if atom[0] == "y" and not 0 <= atom[2] < ctx.k:
                pre, post = w[:pos], w[pos + 1:]
                for s, q in enumerate(ctx.qd.power(atom[2])):
                    if not q.is_zero():
                        mid = (("y", 1, s),) if s else ()
                        work.append((pre + mid + post, c * q))
                changed = True
                break
            if atom[0] == "x" and atom[2] == -1:
                pre, post = w[:pos], w[pos + 1:]
                work.append((pre + (("x", atom[1], 1),) + post, c))
                work.append((pre + post, -(c * ctx.delta)))
                changed = True
                break
            if atom[0] == "x" and pos + 1 < len(w) and w[pos + 1] == atom:
                pre, post = w[:pos], w[pos + 2:]
                work.append((pre + (atom,) + post, c * ctx.delta))
                work.append((pre + post, c))
                changed = True
                break
        if not changed:
            out._add_term(w, c)
    return out


# ---------------------------------------------------------------------------
# equality certification in a parameter mode
# ---------------------------------------------------------------------------

def coefficient_vanishes(ctx: AlgebraContext, value: RingElement,
                         mode: str = "generic") -> bool:
    """Exact zero test for a scalar under the chosen parameter mode."""
    if mode == "free":
        return value.is_zero()
    if mode == "classical":
        if not ctx.classical:
            raise ValueError("classical test requires a classical context")
        return value.is_zero()
    if mode == "generic":
        if ctx.classical:
            return value.is_zero()
        gf = params_mod.solve_parameters(ctx.k)
        return vanishes_after_substitution(value, gf.subst_map())
    raise ValueError(f"unknown mode {mode!r}")


def random_word(rng, n: int, k: int, max_len: int = 6) -> Word:
    """A seeded random generator word, inverses included."""
    letters: list[Atom] = [("y", 1, 1), ("y", 1, -1)]
    for i in range(1, n):
        letters.append(("x", i, 1))
        letters.append(("x", i, -1))
        letters.append(("e", i))
    length = rng.randint(0, max_len)
    return tuple(rng.choice(letters) for _ in range(length))
