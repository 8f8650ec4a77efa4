"""Ground-ring machinery for the cyclotomic BMW-type algebra.

The cylinder generator Y satisfies a monic degree-k relation

    Y^k = q_{k-1} Y^{k-1} + ... + q_1 Y + q_0,

whose coefficients q_i are the signed elementary symmetric polynomials in the
eigenvalues p_0..p_{k-1}.  This module owns everything that happens purely in
the coefficient ring:

  * the q vector, the inverse expansion Y^{-1} = sum qbar_i Y^i and its
    iterates (the matrices Qbar and Q),
  * reduction of arbitrary integer powers of Y to the basis Y^0..Y^{k-1},
  * the left multiplication formula for X1 Y^m e1 and the k consistency
    constraints extracted from Y e = kappa X1^{-1} Y^{-1} e,
  * the triangular solve that turns the free parameter ring into the generic
    ground field (derived A_m, then x, then delta; kappa for k = 1),
  * the spectral projector e0 on the p_0 eigenspace of Y,
  * the parameter half of the star involution.

Throughout, ``full`` rings carry the parameters L,K,D,X,P*,A* of
:mod:`cylbmw.coeffring` and ``classical`` rings the reduced set X,A* with
q_0 = 1 and all other q_i = 0 (so Y^k = 1 and braidings square to one).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .coeffring import (
    CoefficientError,
    LaurentPoly,
    ParamSet,
    RingElement,
    classical_params,
    full_params,
    solve_linear,
    vanishes_after_substitution,
)


class SolveError(ValueError):
    """Raised when a consistency equation refuses to solve as expected."""


# ---------------------------------------------------------------------------
# q coefficients and Y-power reduction
# ---------------------------------------------------------------------------

def elementary_q(k: int) -> list[RingElement]:
    """Signed elementary symmetric polynomials: prod(t - p_i) = t^k - sum q_j t^j."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ps = full_params(k)
    # e_d(p_0..p_{k-1}) by the usual one-variable-at-a-time recurrence
    elem = [LaurentPoly.const(ps, 1)] + [LaurentPoly.zero(ps) for _ in range(k)]
    for i in range(k):
        pv = LaurentPoly.var(ps, f"P{i}")
        for d in range(min(i + 1, k), 0, -1):
            elem[d] = elem[d] + elem[d - 1] * pv
    q = []
    for j in range(k):
        sign = -1 if (k - j) % 2 == 0 else 1
        q.append(RingElement.from_poly(elem[k - j].scale(sign)))
    return q


@dataclass
class QData:
    """Power-reduction tables for Y over one coefficient ring."""

    k: int
    ring: ParamSet
    q: list[RingElement]
    qbar: list[RingElement] = field(init=False)
    Qbar: list[list[RingElement]] = field(init=False)
    Q: list[list[RingElement]] = field(init=False)
    _powers: dict[int, list[RingElement]] = field(init=False, default_factory=dict)

    def __post_init__(self):
        k, ring = self.k, self.ring
        zero = RingElement.const(ring, 0)
        q0inv = self.q[0].inverse()
        self.qbar = [zero] * k
        self.qbar[k - 1] = q0inv
        for i in range(1, k):
            self.qbar[i - 1] = -(self.q[i] * q0inv)
        rows = [self._unit(0)]
        for _ in range(1, k):
            rows.append(self._step_down(rows[-1]))
        self.Qbar = rows
        # Y^{+1} in the negative basis reads off the defining relation:
        # multiplying Y = sum_j a_j Y^{-j} by Y^{k-1} forces a_j = q_{k-1-j}.
        yrow = [self.q[k - 1 - j] for j in range(k)]
        qrows = [self._unit(0)]
        for _ in range(1, k):
            prev = qrows[-1]
            nxt = []
            for s in range(k):
                val = prev[0] * yrow[s]
                if s + 1 < k:
                    val = val + prev[s + 1]
                nxt.append(val)
            qrows.append(nxt)
        self.Q = qrows

    def _unit(self, j: int) -> list[RingElement]:
        return [RingElement.const(self.ring, 1 if i == j else 0)
                for i in range(self.k)]

    def _step_up(self, c: list[RingElement]) -> list[RingElement]:
        top = c[self.k - 1]
        out = [top * self.q[0]]
        for s in range(1, self.k):
            out.append(c[s - 1] + top * self.q[s])
        return out

    def _step_down(self, c: list[RingElement]) -> list[RingElement]:
        low = c[0]
        out = []
        for s in range(self.k):
            val = low * self.qbar[s]
            if s + 1 < self.k:
                val = val + c[s + 1]
            out.append(val)
        return out

    def power(self, m: int) -> list[RingElement]:
        """Coefficients c with Y^m = sum_j c_j Y^j, 0 <= j < k."""
        cached = self._powers.get(m)
        if cached is not None:
            return cached
        if 0 <= m < self.k:
            out = self._unit(m)
        elif m >= self.k:
            out = self._step_up(self.power(m - 1))
        else:
            out = self._step_down(self.power(m + 1))
        self._powers[m] = out
        return out

    def to_negative_basis(self, m: int) -> list[RingElement]:
        """Coefficients c with Y^m = sum_j c_j Y^{-j}, 0 <= j < k."""
        pos = self.power(m)
        out = []
        for j in range(self.k):
            acc = RingElement.const(self.ring, 0)
            for s in range(self.k):
                if not pos[s].is_zero():
                    acc = acc + pos[s] * self.Q[s][j]
            out.append(acc)
        return out


@lru_cache(maxsize=None)
def qdata(k: int, classical: bool = False) -> QData:
    if classical:
        ring = classical_params(k)
        q = [RingElement.const(ring, 1 if j == 0 else 0) for j in range(k)]
        return QData(k, ring, q)
    return QData(k, full_params(k), elementary_q(k))


def power_reduce(k: int, m: int, classical: bool = False) -> list[RingElement]:
    return qdata(k, classical).power(m)


# ---------------------------------------------------------------------------
# the consistency constraints and the generic ground field
# ---------------------------------------------------------------------------

def _sym(k: int, name: str, exp: int = 1) -> RingElement:
    return RingElement.var(full_params(k), name, exp)


def a_sym(k: int, m: int) -> RingElement:
    """The loop value A_m as a symbol; A_0 is the alias x."""
    if m == 0:
        return _sym(k, "X")
    return _sym(k, f"A{m}")


def x1ym_expand(k: int, m: int) -> list[tuple[int, RingElement]]:
    """X1 Y^m e1 as sum of coeff * Y^exp e1, valid for m >= 1.

    The expansion is
        lambda^{m-1} kappa^m Y^{-m} e
        + sum_{s=1}^{m-1} kappa^s lambda^s delta (A_{m-s} Y^{-s} e - Y^{m-2s} e)
    and is returned as (exponent, coefficient) pairs before any basis
    re-reduction, so exponents may repeat or fall outside [0, k).
    """
    if m < 1:
        raise ValueError("expansion requires m >= 1")
    lam, kap, dlt = _sym(k, "L"), _sym(k, "K"), _sym(k, "D")
    out = [(-m, lam ** (m - 1) * kap ** m)]
    for s in range(1, m):
        cs = kap ** s * lam ** s * dlt
        out.append((-s, cs * a_sym(k, m - s)))
        out.append((m - 2 * s, -cs))
    return out


def _x1ym_free(k: int, m: int) -> list[tuple[int, RingElement]]:
    """X1 Y^m e1 expanded without ever consuming (1 - x) delta = lambda - 1/lambda.

    Uses the recursion
        X1 Y^m e = kappa lambda Y^{-1} (X1 Y^{m-1} e)
                   - delta kappa lambda Y^{m-2} e
                   + kappa delta lambda A_{m-1} Y^{-1} e,
    base X1 e = lambda e, with A_0 = x kept symbolic.  In the quotient by the
    skein relation this agrees with :func:`x1ym_expand`, but the free-ring
    representatives differ by multiples of (1 - x) delta - lambda + 1/lambda,
    and those multiples are what makes the triangular solve work.
    """
    lam, kap, dlt = _sym(k, "L"), _sym(k, "K"), _sym(k, "D")
    terms: list[tuple[int, RingElement]] = [(0, lam)]
    for step in range(1, m + 1):
        kl = kap * lam
        nxt = [(exp - 1, kl * coeff) for exp, coeff in terms]
        nxt.append((step - 2, -(dlt * kl)))
        nxt.append((-1, kap * dlt * lam * a_sym(k, step - 1)))
        terms = nxt
    return terms


def _defining_expansion(k: int) -> list[tuple[int, RingElement]]:
    """Y e - kappa X1^{-1} Y^{-1} e as (Y exponent, coefficient) pairs.

    Expands Y^{-1} through qbar, X1^{-1} = X1 - delta + delta e1,
    e1 Y^m e1 = A_m e1, and X1 Y^m e1 through :func:`_x1ym_free` so that the
    coefficients are honest free-ring representatives.
    """
    qd = qdata(k)
    dlt, kap = _sym(k, "D"), _sym(k, "K")
    terms: list[tuple[int, RingElement]] = [(1, RingElement.const(full_params(k), 1))]
    for m in range(k):
        factor = kap * qd.qbar[m]
        # - kappa qbar_m X1 Y^m e
        for exp, coeff in _x1ym_free(k, m):
            terms.append((exp, -(factor * coeff)))
        # + kappa delta qbar_m Y^m e  -  kappa delta qbar_m A_m e
        terms.append((m, factor * dlt))
        terms.append((0, -(factor * dlt * a_sym(k, m))))
    return terms


def consistency_polynomials(k: int) -> list[RingElement]:
    """The constraints h'_0..h'_{k-1} with the defining element equal to
    sum_i h'_i Y^{-i} e."""
    qd = qdata(k)
    out = [RingElement.const(full_params(k), 0) for _ in range(k)]
    for exp, coeff in _defining_expansion(k):
        neg = qd.to_negative_basis(exp)
        for i in range(k):
            if not neg[i].is_zero():
                out[i] = out[i] + coeff * neg[i]
    return out


def consistency_polynomials_positive(k: int) -> list[RingElement]:
    """The same constraints collected in the Y^{+i} e basis (h_0..h_{k-1})."""
    qd = qdata(k)
    out = [RingElement.const(full_params(k), 0) for _ in range(k)]
    for exp, coeff in _defining_expansion(k):
        pos = qd.power(exp)
        for i in range(k):
            if not pos[i].is_zero():
                out[i] = out[i] + coeff * pos[i]
    return out


@dataclass(frozen=True)
class GroundField:
    """The generic coefficient field: free parameters plus a derived map."""

    k: int
    free: tuple[str, ...]
    derived: dict[str, RingElement]

    def subst_map(self) -> dict[str, RingElement]:
        return dict(self.derived)

    def specialize(self, a: RingElement) -> RingElement:
        return a.substitute(self.subst_map(), full_params(self.k))


@lru_cache(maxsize=None)
def solve_parameters(k: int) -> GroundField:
    """Solve the consistency constraints for the derived parameters.

    For k = 1 the free set is {lambda, delta, p0} with kappa and x derived.
    For even k it is {lambda, kappa, p_*}: the A_m are solved in triangular
    order from the constraint coefficients, then x from the last coefficient
    after eliminating delta through (1 - x) delta = lambda - 1/lambda, then
    delta from x.

    For odd k >= 3 that elimination provably degenerates: the last constraint
    depends on x and delta only through the product delta (1 - x), and after
    eliminating it a residual constraint among lambda, kappa and the
    eigenvalues survives (the k = 1 case kappa = lambda p0^2 is the first
    instance; for k = 3 it reads q0^2 = lambda kappa^3).  The solver therefore
    keeps delta free for odd k, derives lambda from the residual, and recovers
    x from the defining relation, mirroring the k = 1 treatment.

    Equations that fail to be linear in their designated unknown raise
    :class:`SolveError` rather than forcing a solution.
    """
    ps = full_params(k)
    one = RingElement.const(ps, 1)
    lam = _sym(k, "L")
    dlt = _sym(k, "D")
    if k == 1:
        p0 = _sym(k, "P0")
        derived = {
            "K": lam * p0 * p0,
            "X": one - (lam - lam.inverse()) / dlt,
        }
        gf = GroundField(1, ("L", "D", "P0"), derived)
    else:
        hp = consistency_polynomials(k)
        solved: dict[str, RingElement] = {}
        order = [(k - 1 - i, i) for i in range(k - 2, 0, -1)] + [(k - 1, 0)]
        for m, i in order:
            eq = hp[i].substitute(solved, ps, reduce=False) if solved else hp[i]
            try:
                solved[f"A{m}"] = solve_linear(eq, f"A{m}")
            except CoefficientError as exc:
                raise SolveError(
                    f"constraint {i} is not linear in A{m}: {exc}") from exc
        last = hp[k - 1].substitute(solved, ps, reduce=False)
        if k % 2 == 0:
            dexpr = (lam - lam.inverse()) / (one - _sym(k, "X"))
            eq = last.substitute({"D": dexpr}, ps)
            try:
                xval = solve_linear(eq, "X")
            except CoefficientError as exc:
                raise SolveError(
                    f"constraint {k-1} is not linear in x: {exc}") from exc
            dval = dexpr.substitute({"X": xval}, ps)
            final = {"X": xval, "D": dval}
            for m in range(1, k):
                final[f"A{m}"] = solved[f"A{m}"].substitute(final, ps)
            gf = GroundField(k, ("L", "K") + tuple(f"P{i}" for i in range(k)),
                             final)
        else:
            xexpr = one - (lam - lam.inverse()) / dlt
            resid = last.substitute({"X": xexpr}, ps)
            if resid.uses("D"):
                raise SolveError(
                    "odd-k residual unexpectedly still involves delta")
            try:
                lamval = solve_linear(resid, "L")
            except CoefficientError as exc:
                raise SolveError(
                    f"odd-k residual is not linear in lambda: {exc}") from exc
            xval = (one - (lamval - lamval.inverse()) / dlt).reduced()
            final = {"L": lamval, "X": xval}
            for m in range(1, k):
                final[f"A{m}"] = solved[f"A{m}"].substitute(final, ps).reduced()
            gf = GroundField(k, ("K", "D") + tuple(f"P{i}" for i in range(k)),
                             final)
    _verify_ground_field(gf)
    return gf


def _verify_ground_field(gf: GroundField) -> None:
    ps = full_params(gf.k)
    smap = gf.subst_map()
    for i, hp in enumerate(consistency_polynomials(gf.k)):
        if not vanishes_after_substitution(hp, smap):
            raise SolveError(f"back-substitution leaves constraint {i} nonzero")
    lam = _sym(gf.k, "L")
    one = RingElement.const(ps, 1)
    relation = (one - _sym(gf.k, "X")) * _sym(gf.k, "D") - lam + lam.inverse()
    if not vanishes_after_substitution(relation, smap):
        raise SolveError("(1 - x) delta = lambda - lambda^{-1} fails after solve")


# ---------------------------------------------------------------------------
# the p0 eigenprojector of Y
# ---------------------------------------------------------------------------

def projector_e0(k: int, normalise: bool = True):
    """Coefficients alpha with e0 = sum alpha_i Y^i projecting on eigenvalue p0.

    Returns (alphas, x0, x0prime) where e0^2 = x0 e0 and e1 e0 e1 = x0' e1.
    With ``normalise`` the alphas are scaled so that x0 = 1; this requires the
    eigenvalue sum to be invertible.
    """
    qd = qdata(k)
    ps = full_params(k)
    p0 = _sym(k, "P0")
    zero = RingElement.const(ps, 0)
    alphas = [zero] * k
    alphas[0] = RingElement.const(ps, 1)
    alphas[k - 1] = p0 * qd.q[0].inverse() if k > 1 else alphas[0]
    for j in range(k - 1, 1, -1):
        alphas[j - 1] = p0 * alphas[j] - alphas[k - 1] * qd.q[j]
    if k > 1:
        # closing the recursion must reproduce alpha_0
        closure = p0 * alphas[1] - alphas[k - 1] * qd.q[1]
        if not closure.eq(alphas[0]):
            raise SolveError("projector recursion does not close")
    x0 = zero
    for i in range(k):
        x0 = x0 + alphas[i] * p0 ** i
    if normalise:
        if x0.is_zero():
            raise SolveError("projector normalisation impossible: x0 = 0")
        inv = x0.inverse()
        alphas = [a * inv for a in alphas]
        x0 = RingElement.const(ps, 1)
    x0prime = zero
    for i in range(k):
        x0prime = x0prime + alphas[i] * a_sym(k, i)
    return alphas, x0, x0prime


# ---------------------------------------------------------------------------
# the star involution on parameters
# ---------------------------------------------------------------------------

def star_map(k: int):
    """Parameter map of the star involution plus the transformed A vector.

    lambda, kappa, p_i map to their inverses, delta to -delta, x to itself;
    A*_i is read off from e1 Y^{-i} e1 = sum_j Qbar_{i,j} A_j e1.
    """
    qd = qdata(k)
    subst = {
        "L": _sym(k, "L", -1),
        "K": _sym(k, "K", -1),
        "D": -_sym(k, "D"),
        "X": _sym(k, "X"),
    }
    for i in range(k):
        subst[f"P{i}"] = _sym(k, f"P{i}", -1)
    astar = []
    for i in range(k):
        acc = RingElement.const(full_params(k), 0)
        for j in range(k):
            if not qd.Qbar[i][j].is_zero():
                acc = acc + qd.Qbar[i][j] * a_sym(k, j)
        astar.append(acc)
    for i in range(1, k):
        subst[f"A{i}"] = astar[i]
    return subst, astar


def classical_star_map(k: int) -> dict[str, RingElement]:
    """Star on classical coefficients: x fixed, A_i -> A_{k-i}."""
    ring = classical_params(k)
    subst = {"X": RingElement.var(ring, "X")}
    for i in range(1, k):
        j = (k - i) % k
        subst[f"A{i}"] = RingElement.var(ring, "X") if j == 0 \
            else RingElement.var(ring, f"A{j}")
    return subst
