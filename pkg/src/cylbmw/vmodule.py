"""The k-dimensional module that witnesses the solved ground field.

The free module with basis b_0..b_{k-1} carries an action of the two-strand
algebra: Y shifts the basis cyclically through its defining polynomial, e
projects onto b_0 weighted by the loop values, and X is defined by a
recursion whose consistency is exactly the content of the ground-field
constraints.  The braid relation X Y X Y = Y X Y X and the skein relation
X^2 = 1 + delta X - delta lambda e hold over the solved field and fail for
unconstrained parameters, so matrix arithmetic here is a cheap independent
witness for the parameter solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeffring import RingElement, full_params
from .params import GroundField, qdata, solve_parameters

Matrix = list[list[RingElement]]


def _zeros(ring, k: int) -> Matrix:
    z = RingElement.const(ring, 0)
    return [[z for _ in range(k)] for _ in range(k)]


def _identity(ring, k: int) -> Matrix:
    m = _zeros(ring, k)
    one = RingElement.const(ring, 1)
    for i in range(k):
        m[i][i] = one
    return m


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    k = len(a)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = None
            for s in range(k):
                if a[i][s].is_zero() or b[s][j].is_zero():
                    continue
                term = a[i][s] * b[s][j]
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else a[0][0].scale(0))
        out.append(row)
    return out


def _mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_scale(a: Matrix, c: RingElement) -> Matrix:
    return [[x * c for x in row] for row in a]


def _is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


@dataclass
class ModuleAction:
    """The matrices of Y, Y^{-1}, e and X on the module basis (columns are
    images of basis vectors)."""

    k: int
    Y: Matrix
    Yinv: Matrix
    E: Matrix
    X: Matrix

    def act(self, kind: str, vec: list[RingElement]) -> list[RingElement]:
        """Apply a generator letter to a coordinate vector."""
        mats = {"y": self.Y, "yinv": self.Yinv, "e": self.E, "x": self.X}
        if kind == "xinv":
            # X^{-1} = X - delta + delta e, checked by relation (b)
            raise ValueError("apply the skein expansion explicitly")
        m = mats[kind]
        return [sum((m[i][j] * vec[j] for j in range(self.k)),
                    start=vec[0].scale(0)) for i in range(self.k)]


def build_action(k: int, values: dict[str, RingElement] | None = None,
                 ) -> ModuleAction:
    """Construct the action; by default over the solved generic field.

    ``values`` may override the substitution map (FREE mode: pass {}), in
    which case the braid and skein relations are expected to fail.
    """
    ring = full_params(k)
    if values is None:
        values = solve_parameters(k).subst_map()

    def val(name: str) -> RingElement:
        base = RingElement.var(ring, name)
        return base.substitute(values, ring) if values else base

    lam, kap, dlt = val("L"), val("K"), val("D")
    avals = [val("X")] + [val(f"A{m}") for m in range(1, k)]
    qd = qdata(k)
    q = [qi.substitute(values, ring) if values else qi for qi in qd.q]
    qbar = [qi.substitute(values, ring) if values else qi for qi in qd.qbar]
    zero = RingElement.const(ring, 0)
    Y = _zeros(ring, k)
    for i in range(k - 1):
        Y[i + 1][i] = RingElement.const(ring, 1)
    for j in range(k):
        Y[j][k - 1] = q[j]
    # Y^{-1} through the inverse expansion: Yinv = sum qbar_j Y^j
    Yinv = _zeros(ring, k)
    power = _identity(ring, k)
    for j in range(k):
        if not qbar[j].is_zero():
            Yinv = [[a + qbar[j] * b for a, b in zip(ra, rb)]
                    for ra, rb in zip(Yinv, power)]
        power = _mat_mul(Y, power)
    E = _zeros(ring, k)
    for i in range(k):
        E[0][i] = avals[i]
    # X column by column
    cols: list[list[RingElement]] = []
    b0 = [RingElement.const(ring, 1)] + [zero] * (k - 1)
    cols.append([lam * v for v in b0])
    if k > 1:
        yinv_b0 = [Yinv[i][0] for i in range(k)]
        cols.append([kap * v for v in yinv_b0])
    for i in range(2, k):
        prev = cols[i - 1]
        yinv_prev = [sum((Yinv[r][s] * prev[s] for s in range(k)), start=zero)
                     for r in range(k)]
        col = []
        for r in range(k):
            v = yinv_prev[r]
            if r == i - 2:
                v = v - dlt
            v = v + dlt * avals[i - 1] * yinv_b0[r]
            col.append(kap * lam * v)
        cols.append(col)
    X = [[cols[j][i] for j in range(k)] for i in range(k)]
    return ModuleAction(k, Y, Yinv, E, X)


class RelationFailure(AssertionError):
    pass


def relation_check(k: int, values: dict[str, RingElement] | None = None,
                   strict: bool = False) -> bool:
    """Verify the module relations as exact matrix identities.

    Checks the braid relation, the skein relation, X e = e X = lambda e,
    e Y^i e = A_i e, and the defining polynomial of Y.  With ``strict`` a
    failure raises :class:`RelationFailure` naming the relation.
    """
    ring = full_params(k)
    if values is None:
        values = solve_parameters(k).subst_map()
    act = build_action(k, values)

    def val(name: str) -> RingElement:
        base = RingElement.var(ring, name)
        return base.substitute(values, ring) if values else base

    lam, dlt = val("L"), val("D")
    one = _identity(ring, k)
    Y, E, X = act.Y, act.E, act.X
    checks = []
    checks.append(("X Y X Y = Y X Y X",
                   _mat_sub(_mat_mul(_mat_mul(X, Y), _mat_mul(X, Y)),
                            _mat_mul(_mat_mul(Y, X), _mat_mul(Y, X)))))
    skein = _mat_sub(_mat_mul(X, X),
                     [[one[i][j] + dlt * X[i][j] - dlt * lam * E[i][j]
                       for j in range(k)] for i in range(k)])
    checks.append(("X^2 = 1 + delta X - delta lambda e", skein))
    checks.append(("X e = lambda e", _mat_sub(_mat_mul(X, E),
                                              _mat_scale(E, lam))))
    checks.append(("e X = lambda e", _mat_sub(_mat_mul(E, X),
                                              _mat_scale(E, lam))))
    ypow = one
    avals = [val("X")] + [val(f"A{m}") for m in range(1, k)]
    for i in range(k):
        if i:
            contr = _mat_sub(_mat_mul(_mat_mul(E, ypow), E),
                             _mat_scale(E, avals[i]))
            checks.append((f"e Y^{i} e = A_{i} e", contr))
        ypow = _mat_mul(Y, ypow)
    # defining polynomial of Y: Y^k - sum q_i Y^i = 0
    qd = qdata(k)
    poly = ypow
    power = one
    for i in range(k):
        qi = qd.q[i].substitute(values, ring) if values else qd.q[i]
        poly = _mat_sub(poly, _mat_scale(power, qi))
        power = _mat_mul(Y, power)
    checks.append(("prod (Y - p_i) = 0", poly))
    checks.append(("Y Yinv = 1", _mat_sub(_mat_mul(Y, act.Yinv), one)))
    for name, m in checks:
        if not _is_zero(m):
            if strict:
                raise RelationFailure(f"module relation fails: {name}")
            return False
    return True


def y_determinant_is_unit(k: int) -> bool:
    """det of the Y action equals the constant coefficient up to sign."""
    ring = full_params(k)
    act = build_action(k, {})
    det = _det(act.Y, ring)
    q0 = qdata(k).q[0]
    return det.eq(q0) or det.eq(-q0)


def _det(m: Matrix, ring) -> RingElement:
    k = len(m)
    rows = [row[:] for row in m]
    det = RingElement.const(ring, 1)
    for col in range(k):
        pivot = next((r for r in range(col, k)
                      if not rows[r][col].is_zero()), None)
        if pivot is None:
            return RingElement.const(ring, 0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col]
        det = det * pv
        inv = pv.inverse()
        for r in range(col + 1, k):
            if rows[r][col].is_zero():
                continue
            factor = rows[r][col] * inv
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det
