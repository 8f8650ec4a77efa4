"""Exact scalar arithmetic: multivariate Laurent polynomials and their fractions.

Every scalar in this package is a ratio of Laurent polynomials over the
rationals in a fixed, ordered set of commuting parameters.  For a cyclotomic
rank k the full parameter set is

    L  (the twist lambda), K (the cylinder scalar kappa), D (the skein delta),
    X  (the loop value), P0..P{k-1} (eigenvalues of the cylinder generator),
    A1..A{k-1} (closed-loop values; A0 is an alias for X),

in exactly that order.  The classical (permutation) limit uses the reduced set
X, A1..A{k-1}.

Equality is decided by cross multiplication, never numerically.  Fractions are
normalised only up to monomial and rational content; full multivariate gcd is
deliberately not attempted, so two equal elements may be stored differently
while still comparing equal through ``eq``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping


class CoefficientError(ValueError):
    """Raised for illegal scalar operations (zero division, bad substitution)."""


def full_param_names(k: int) -> tuple[str, ...]:
    return ("L", "K", "D", "X") + tuple(f"P{i}" for i in range(k)) \
        + tuple(f"A{i}" for i in range(1, k))


def classical_param_names(k: int) -> tuple[str, ...]:
    return ("X",) + tuple(f"A{i}" for i in range(1, k))


class ParamSet:
    """An ordered set of parameter names defining a Laurent ring."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        self.index = {name: i for i, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise CoefficientError("duplicate parameter names")

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"ParamSet({', '.join(self.names)})"


@lru_cache(maxsize=None)
def full_params(k: int) -> ParamSet:
    return ParamSet(full_param_names(k))


@lru_cache(maxsize=None)
def classical_params(k: int) -> ParamSet:
    return ParamSet(classical_param_names(k))


class LaurentPoly:
    """A Laurent polynomial: map from integer exponent vectors to rationals.

    Zero coefficients are never stored.  Instances are treated as immutable.
    """

    __slots__ = ("params", "terms")

    def __init__(self, params: ParamSet, terms: Mapping[tuple[int, ...], Fraction]):
        self.params = params
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(params: ParamSet) -> LaurentPoly:
        return LaurentPoly(params, {})

    @staticmethod
    def const(params: ParamSet, c) -> LaurentPoly:
        c = Fraction(c)
        if c == 0:
            return LaurentPoly.zero(params)
        return LaurentPoly(params, {(0,) * len(params): c})

    @staticmethod
    def var(params: ParamSet, name: str, exp: int = 1, coeff=1) -> LaurentPoly:
        e = [0] * len(params)
        e[params.index[name]] = exp
        return LaurentPoly(params, {tuple(e): Fraction(coeff)})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPoly(self.params, out)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.params, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        if not self.terms or not other.terms:
            return LaurentPoly.zero(self.params)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentPoly(self.params, out)

    def scale(self, c) -> LaurentPoly:
        c = Fraction(c)
        if c == 0:
            return LaurentPoly.zero(self.params)
        return LaurentPoly(self.params, {e: c * v for e, v in self.terms.items()})

    def shift(self, shifts: tuple[int, ...]) -> LaurentPoly:
        return LaurentPoly(
            self.params,
            {tuple(a + b for a, b in zip(e, shifts)): c for e, c in self.terms.items()},
        )

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            raise CoefficientError("negative power of a polynomial")
        result = LaurentPoly.const(self.params, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        zero = (0,) * len(self.params)
        return len(self.terms) == 1 and self.terms.get(zero) == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.params == other.params \
            and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.params, frozenset(self.terms.items())))

    def min_exps(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * len(self.params)
        cols = zip(*self.terms.keys())
        return tuple(min(col) for col in cols)

    def degrees_in(self, name: str) -> set[int]:
        i = self.params.index[name]
        return {e[i] for e in self.terms}

    def uses(self, name: str) -> bool:
        i = self.params.index[name]
        return any(e[i] != 0 for e in self.terms)

    def coefficient_of(self, name: str, power: int) -> LaurentPoly:
        """Collect the terms with the given exponent of ``name``, dropping it."""
        i = self.params.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[i] == power:
                reduced = list(e)
                reduced[i] = 0
                out[tuple(reduced)] = c
        return LaurentPoly(self.params, out)

    def eval_rational(self, assign: Mapping[str, Fraction]) -> Fraction:
        vals = [Fraction(assign[name]) for name in self.params.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, p in zip(vals, e):
                if p:
                    if v == 0 and p < 0:
                        raise CoefficientError("evaluation hits a pole")
                    term *= v ** p
            total += term
        return total


def _sorted_terms(poly: LaurentPoly):
    return sorted(poly.terms.items(), key=lambda item: item[0], reverse=True)


class RingElement:
    """A ratio of two Laurent polynomials with a nonzero denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly, normalise: bool = True):
        if den.is_zero():
            raise CoefficientError("zero denominator")
        if num.params != den.params:
            raise CoefficientError("mixed parameter sets")
        if normalise:
            num, den = _normalise_pair(num, den)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_poly(p: LaurentPoly) -> RingElement:
        return RingElement(p, LaurentPoly.const(p.params, 1))

    @staticmethod
    def const(params: ParamSet, c) -> RingElement:
        return RingElement.from_poly(LaurentPoly.const(params, c))

    @staticmethod
    def var(params: ParamSet, name: str, exp: int = 1) -> RingElement:
        if exp >= 0:
            return RingElement.from_poly(LaurentPoly.var(params, name, exp))
        return RingElement(LaurentPoly.const(params, 1),
                           LaurentPoly.var(params, name, -exp))

    @property
    def params(self) -> ParamSet:
        return self.num.params

    # -- field operations --------------------------------------------------

    def __add__(self, other: RingElement) -> RingElement:
        if self.den == other.den:
            return RingElement(self.num + other.num, self.den)
        return RingElement(self.num * other.den + other.num * self.den,
                           self.den * other.den)

    def __neg__(self) -> RingElement:
        return RingElement(-self.num, self.den, normalise=False)

    def __sub__(self, other: RingElement) -> RingElement:
        return self + (-other)

    def __mul__(self, other: RingElement) -> RingElement:
        return RingElement(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RingElement) -> RingElement:
        if other.num.is_zero():
            raise CoefficientError("division by zero")
        return RingElement(self.num * other.den, self.den * other.num)

    def inverse(self) -> RingElement:
        if self.num.is_zero():
            raise CoefficientError("division by zero")
        return RingElement(self.den, self.num)

    def __pow__(self, n: int) -> RingElement:
        if n < 0:
            return self.inverse() ** (-n)
        return RingElement(self.num ** n, self.den ** n)

    def scale(self, c) -> RingElement:
        return RingElement(self.num.scale(c), self.den, normalise=False)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def eq(self, other: RingElement) -> bool:
        """Exact equality via cross multiplication."""
        return (self.num * other.den - other.num * self.den).is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElement) and self.eq(other)

    __hash__ = None  # fractions are compared by value, not identity

    def uses(self, name: str) -> bool:
        return self.num.uses(name) or self.den.uses(name)

    def reduced(self) -> RingElement:
        """Cancel the polynomial gcd of numerator and denominator.

        Monomial numerators or denominators are already fully cancelled by
        content normalisation, so the gcd is only attempted when both sides
        have at least two terms.
        """
        if len(self.num.terms) < 2 or len(self.den.terms) < 2:
            return self
        g = poly_gcd(self.num, self.den)
        if len(g.terms) == 1:
            return self
        qn = _poly_div_exact(self.num, g)
        qd = _poly_div_exact(self.den, g)
        if qn is None or qd is None:
            return self
        return RingElement(qn, qd)

    # -- substitution ------------------------------------------------------

    def substitute(self, images: Mapping[str, RingElement],
                   target: ParamSet | None = None,
                   reduce: bool = True) -> RingElement:
        """Apply a ring homomorphism sending each parameter to its image.

        Every parameter occurring in this element must have an image.  The
        images must share one parameter set, which becomes the target ring.
        Raises if the substituted denominator vanishes, naming the parameters
        it involves.
        """
        if target is None:
            for img in images.values():
                target = img.params
                break
            else:
                target = self.params
        num_val = _subst_poly(self.num, images, target)
        den_val = _subst_poly(self.den, images, target)
        if den_val.is_zero():
            involved = [n for n in self.params.names if self.den.uses(n)]
            raise CoefficientError(
                "substitution produced a zero denominator (parameters involved: "
                + ", ".join(involved) + ")")
        out = num_val / den_val
        return out.reduced() if reduce else out

    def eval_rational(self, assign: Mapping[str, Fraction]) -> Fraction:
        den = self.den.eval_rational(assign)
        if den == 0:
            raise CoefficientError("evaluation hits a zero denominator")
        return self.num.eval_rational(assign) / den

    # -- canonical text form ------------------------------------------------

    def canonical(self) -> str:
        """Deterministic text rendering, ``( num ) / ( den )``.

        Negative exponents are cleared into the opposite side, coefficients
        are scaled to coprime integers, and the denominator's leading
        coefficient is made positive.  Monomials are ordered by exponent
        vector, descending.
        """
        num, den = self.num, self.den
        shifts = tuple(max(0, -min(a, b))
                       for a, b in zip(num.min_exps(), den.min_exps()))
        if any(shifts):
            num = num.shift(shifts)
            den = den.shift(shifts)
        return f"( {_poly_text(num)} ) / ( {_poly_text(den)} )"

    def __repr__(self) -> str:
        return f"RingElement[{self.canonical()}]"


def _subst_poly(poly: LaurentPoly, images: Mapping[str, RingElement],
                target: ParamSet) -> RingElement:
    """Substitute images into a polynomial.

    Terms are grouped by their exponents in the substituted parameters, so
    each distinct power product of images is formed once; parameters without
    an image are carried along as monomials of the target ring.
    """
    src = poly.params
    active = [i for i, n in enumerate(src.names)
              if n in images and any(e[i] for e in poly.terms)]
    passive = [i for i in range(len(src)) if i not in active]
    for i in passive:
        name = src.names[i]
        if name not in target.index and any(e[i] for e in poly.terms):
            raise CoefficientError(f"no image for parameter {name}")
    buckets: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
    for e, c in poly.terms.items():
        key = tuple(e[i] for i in active)
        mono = [0] * len(target)
        for i in passive:
            if e[i]:
                mono[target.index[src.names[i]]] = e[i]
        bucket = buckets.setdefault(key, {})
        mono_t = tuple(mono)
        bucket[mono_t] = bucket.get(mono_t, Fraction(0)) + c
    pow_cache: dict[tuple[str, int], RingElement] = {}

    def img_power(name: str, p: int) -> RingElement:
        got = pow_cache.get((name, p))
        if got is None:
            img = images[name]
            if p < 0 and img.is_zero():
                raise CoefficientError(
                    f"substitution inverts zero at parameter {name}")
            got = img ** p
            pow_cache[(name, p)] = got
        return got

    total = RingElement.const(target, 0)
    for key, bucket in buckets.items():
        term = RingElement.from_poly(LaurentPoly(target, bucket))
        for i, p in zip(active, key):
            if p:
                term = term * img_power(src.names[i], p)
        total = total + term
    return total


def vanishes_after_substitution(f: RingElement,
                                images: Mapping[str, RingElement]) -> bool:
    """Exact zero test for f under a substitution, with denominators cleared.

    Works entirely in polynomial arithmetic: the numerator of f is rewritten
    as a sum of products of image numerators and complementary powers of
    image denominators, then tested for literal vanishing.  This avoids the
    intermediate fraction normalisation of :meth:`RingElement.substitute`
    and is the preferred way to certify identities under a parameter mode.
    The images must all live in the same parameter set as f.
    """
    for img in images.values():
        if img.params != f.params:
            raise CoefficientError("vanishing test needs images in the same ring")
    if not _cleared_substitution(f.den, images, check_nonzero=True).is_zero():
        return _cleared_substitution(f.num, images).is_zero()
    raise CoefficientError("substitution produced a zero denominator")


def _cleared_substitution(poly: LaurentPoly, images: Mapping[str, RingElement],
                          check_nonzero: bool = False) -> LaurentPoly:
    """sum_t c_t mono_t prod N_i^{e_i} prod D_i^{max_i - e_i}, up to a unit.

    The result is the substituted polynomial times the unit monomial
    prod D_i^{max_i} (times a monomial absorbing negative active exponents),
    so it vanishes iff the substituted polynomial does.  When
    ``check_nonzero`` is set the function is only used for a zero test of a
    denominator, so the same scaled value is returned.
    """
    params = poly.params
    active = [i for i, n in enumerate(params.names)
              if n in images and any(e[i] for e in poly.terms)]
    if not active:
        return poly
    # shift active exponents to be nonnegative (multiplying by a unit monomial)
    mins = {i: min(e[i] for e in poly.terms) for i in active}
    maxs = {i: max(e[i] for e in poly.terms) - min(0, mins[i]) for i in active}
    pow_cache: dict[tuple[int, bool, int], LaurentPoly] = {}

    def power(i: int, num_side: bool, p: int) -> LaurentPoly:
        got = pow_cache.get((i, num_side, p))
        if got is None:
            img = images[params.names[i]]
            base = img.num if num_side else img.den
            got = base ** p
            pow_cache[(i, num_side, p)] = got
        return got

    total = LaurentPoly.zero(params)
    for e, c in poly.terms.items():
        mono = list(e)
        for i in active:
            mono[i] = 0
        term = LaurentPoly(params, {tuple(mono): c})
        for i in active:
            p = e[i] - min(0, mins[i])
            term = term * power(i, True, p) * power(i, False, maxs[i] - p)
        total = total + term
    return total


def _normalise_pair(num: LaurentPoly, den: LaurentPoly):
    params = num.params
    if num.is_zero():
        return num, LaurentPoly.const(params, 1)
    # remove common monomial content
    shifts = tuple(-min(a, b) for a, b in zip(num.min_exps(), den.min_exps()))
    if any(shifts):
        num = num.shift(shifts)
        den = den.shift(shifts)
    # scale to coprime integer coefficients with positive leading denominator
    denoms = [c.denominator for c in num.terms.values()]
    denoms += [c.denominator for c in den.terms.values()]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // gcd(lcm, d)
    numers = [int(c * lcm) for c in num.terms.values()]
    numers += [int(c * lcm) for c in den.terms.values()]
    g = 0
    for v in numers:
        g = gcd(g, v)
    factor = Fraction(lcm, g if g else 1)
    lead = _sorted_terms(den)[0][1]
    if lead < 0:
        factor = -factor
    if factor != 1:
        num = num.scale(factor)
        den = den.scale(factor)
    return num, den


# ---------------------------------------------------------------------------
# polynomial gcd (primitive PRS) for fraction reduction
# ---------------------------------------------------------------------------

def _poly_div_exact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly | None:
    """Exact quotient f / g for ordinary polynomials, or None if not divisible."""
    if g.is_zero():
        return None
    params = f.params
    quot: dict[tuple[int, ...], Fraction] = {}
    rem = dict(f.terms)
    g_lead = max(g.terms)
    g_lc = g.terms[g_lead]
    while rem:
        lead = max(rem)
        t = tuple(a - b for a, b in zip(lead, g_lead))
        if any(x < 0 for x in t):
            return None
        c = rem[lead] / g_lc
        quot[t] = c
        for e, v in g.terms.items():
            key = tuple(a + b for a, b in zip(t, e))
            s = rem.get(key, Fraction(0)) - c * v
            if s == 0:
                rem.pop(key, None)
            else:
                rem[key] = s
    return LaurentPoly(params, quot)


def _strip_rational_content(f: LaurentPoly) -> LaurentPoly:
    """Scale to coprime integer coefficients (a unit multiple of f)."""
    if not f.terms:
        return f
    lcm = 1
    for c in f.terms.values():
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    g = 0
    for c in f.terms.values():
        g = gcd(g, int(c * lcm))
    factor = Fraction(lcm, g if g else 1)
    return f if factor == 1 else f.scale(factor)


def _eval_var(f: LaurentPoly, i: int, val: int) -> LaurentPoly:
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in f.terms.items():
        v = c * val ** e[i]
        key = list(e)
        key[i] = 0
        key = tuple(key)
        s = out.get(key, Fraction(0)) + v
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s
    return LaurentPoly(f.params, out)


def _gcdheu(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly | None:
    """Heuristic gcd by integer evaluation and balanced-digit reconstruction.

    Returns a verified common divisor or None when the heuristic gives up;
    callers treat None as "no reduction found", which is always sound.
    """
    params = f.params
    shared = [i for i in range(len(params))
              if any(e[i] for e in f.terms) and any(e[i] for e in g.terms)]
    if not shared:
        # no common variable: the gcd is the shared integer content, which
        # the digit reconstruction one level up turns back into a polynomial
        content = 0
        for c in list(f.terms.values()) + list(g.terms.values()):
            if c.denominator != 1:
                return LaurentPoly.const(params, 1)
            content = gcd(content, c.numerator)
        return LaurentPoly.const(params, content if content else 1)
    i = min(shared, key=lambda j: max(e[j] for e in f.terms)
            + max(e[j] for e in g.terms))
    norm = min(max(abs(c) for c in f.terms.values()),
               max(abs(c) for c in g.terms.values()))
    xi = 2 * int(norm) + 29
    for _ in range(6):
        fe = _eval_var(f, i, xi)
        ge = _eval_var(g, i, xi)
        if fe.is_zero() or ge.is_zero():
            xi = xi * 73794 // 27011 | 1
            continue
        if len(fe.terms) == 1 and not any(fe.min_exps()) \
                and len(ge.terms) == 1 and not any(ge.min_exps()):
            zero = (0,) * len(params)
            gam = LaurentPoly.const(
                params, gcd(int(fe.terms[zero]), int(ge.terms[zero])))
        else:
            gam = _gcdheu(fe, ge)
        if gam is not None:
            cand = _reconstruct_digits(gam, i, xi)
            cand = _strip_rational_content(cand)
            if not cand.is_zero() and _poly_div_exact(f, cand) is not None \
                    and _poly_div_exact(g, cand) is not None:
                return cand
        xi = xi * 73794 // 27011 | 1
    return None


def _reconstruct_digits(gam: LaurentPoly, i: int, xi: int) -> LaurentPoly:
    """Rebuild a polynomial in variable i from its value at xi (balanced)."""
    params = gam.params
    out: dict[tuple[int, ...], Fraction] = {}
    power = 0
    half = xi // 2
    current = {e: int(c) for e, c in gam.terms.items()}
    while current:
        nxt: dict[tuple[int, ...], int] = {}
        for e, c in current.items():
            digit = (c + half) % xi - half
            if digit:
                key = list(e)
                key[i] = power
                out[tuple(key)] = Fraction(digit)
            rest = (c - digit) // xi
            if rest:
                nxt[e] = rest
        current = nxt
        power += 1
    return LaurentPoly(params, out)


def poly_gcd(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """A common divisor of two ordinary polynomials (gcd when found).

    Uses trial division and the evaluation heuristic; falls back to 1 when
    the heuristic fails, so callers may only use this for cancellation.
    Inputs must have nonnegative exponents.
    """
    one = LaurentPoly.const(f.params, 1)
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    f = _strip_rational_content(f)
    g = _strip_rational_content(g)
    if _poly_div_exact(f, g) is not None:
        return g
    if _poly_div_exact(g, f) is not None:
        return f
    got = _gcdheu(f, g)
    return got if got is not None else one


def _monomial_text(params: ParamSet, exps: tuple[int, ...]) -> str:
    parts = []
    for name, p in zip(params.names, exps):
        if p == 0:
            continue
        parts.append(name if p == 1 else f"{name}^{p}")
    return " ".join(parts)


def _poly_text(poly: LaurentPoly) -> str:
    if poly.is_zero():
        return "0"
    chunks = []
    for i, (e, c) in enumerate(_sorted_terms(poly)):
        mono = _monomial_text(poly.params, e)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag} {mono}"
        else:
            body = str(mag)
        if i == 0:
            chunks.append(body if c > 0 else f"- {body}")
        else:
            chunks.append(("+ " if c > 0 else "- ") + body)
    return " ".join(chunks)


_TERM_RE = re.compile(r"^(?P<coeff>\d+)?\s*(?P<monos>([A-Z]\w*(\^-?\d+)?\s*)*)$")


def parse_canonical(params: ParamSet, text: str) -> RingElement:
    """Parse the output of :meth:`RingElement.canonical`."""
    m = re.fullmatch(r"\s*\(\s*(.*?)\s*\)\s*/\s*\(\s*(.*?)\s*\)\s*", text)
    if not m:
        raise CoefficientError(f"not a canonical fraction: {text!r}")
    num = _parse_poly(params, m.group(1))
    den = _parse_poly(params, m.group(2))
    return RingElement(num, den)


def _parse_poly(params: ParamSet, text: str) -> LaurentPoly:
    if text.strip() == "0":
        return LaurentPoly.zero(params)
    total = LaurentPoly.zero(params)
    # split into signed terms
    pieces = re.split(r"\s*([+-])\s*", text.strip())
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    if len(pieces) % 2 != 0:
        raise CoefficientError(f"malformed polynomial: {text!r}")
    for sign, term in zip(pieces[::2], pieces[1::2]):
        m = _TERM_RE.match(term.strip())
        if not m:
            raise CoefficientError(f"malformed term: {term!r}")
        coeff = Fraction(int(m.group("coeff") or 1))
        if sign == "-":
            coeff = -coeff
        exps = [0] * len(params)
        for factor in m.group("monos").split():
            if "^" in factor:
                name, _, power = factor.partition("^")
                exps[params.index[name]] += int(power)
            else:
                exps[params.index[factor]] += 1
        total = total + LaurentPoly(params, {tuple(exps): coeff})
    return total


def solve_linear(f: RingElement, name: str) -> RingElement:
    """Solve ``f = 0`` for ``name``, requiring the numerator to be linear.

    Since the denominator is a unit, f = 0 is equivalent to its numerator
    vanishing; the numerator must have degree exactly one in ``name`` or the
    equation is refused (back-substitution later validates the solution).
    """
    degrees = f.num.degrees_in(name)
    if not degrees <= {0, 1}:
        raise CoefficientError(
            f"equation is not linear in {name} (exponents {sorted(degrees)})")
    a = f.num.coefficient_of(name, 1)
    b = f.num.coefficient_of(name, 0)
    if a.is_zero():
        raise CoefficientError(f"equation does not involve {name}")
    return RingElement(-b, a).reduced()
