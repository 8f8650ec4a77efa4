"""Dotted Brauer diagrams: the classical limit of the cylinder BMW algebra.

A diagram on n strands is a perfect matching of the 2n boundary points
(top 1..n, bottom 1..n) where every arc carries a residue mod k ("dots",
counting windings around the cylinder axis) and the whole diagram carries a
scalar.  The basis has size k^n (2n-1)!!.

Conventions, fixed once and verified against the algebra relations:

  * through arcs (one top, one bottom endpoint) store their dots at the
    bottom endpoint; horizontal arcs (both endpoints on one boundary) at
    their leftmost endpoint;
  * a top horizontal arc has one interior minimum, a bottom one a maximum,
    through arcs are monotone; a dot moved across one extremum is negated
    mod k;
  * a closed loop carrying i dots (measured at its leftmost junction) is
    deleted at the price of a factor A_i, with A_0 = x;
  * the trace closes the strands around the right; each closure arc has one
    maximum and one minimum, so closures never twist dot counts.

Scalars are elements of the classical coefficient ring in x, A_1..A_{k-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .coeffring import RingElement, classical_params
from . import algebra as algebra_mod
from .algebra import AlgebraElement, Word, expand_composites


def _double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def basis_size(n: int, k: int) -> int:
    return k ** n * _double_factorial(2 * n - 1)


class ClassicalScalars:
    """Scalar helpers over the classical ring for one k."""

    def __init__(self, k: int):
        self.k = k
        self.ring = classical_params(k)
        self.one = RingElement.const(self.ring, 1)
        self.zero = RingElement.const(self.ring, 0)
        self.x = RingElement.var(self.ring, "X")

    def A(self, m: int) -> RingElement:
        m %= self.k
        if m == 0:
            return self.x
        return RingElement.var(self.ring, f"A{m}")


@lru_cache(maxsize=None)
def scalars(k: int) -> ClassicalScalars:
    return ClassicalScalars(k)


# points: 0..n-1 are top positions 1..n, n..2n-1 are bottom positions 1..n.

def _is_top(p: int, n: int) -> bool:
    return p < n


def _pos(p: int, n: int) -> int:
    return p if p < n else p - n


@dataclass(frozen=True)
class DottedDiagram:
    """A dotted Brauer diagram with its scalar.

    ``arcs`` is a sorted tuple of point pairs (p, q) with p < q in the order
    top 1..n, bottom 1..n; ``dots`` aligns with ``arcs`` and stores the
    residue at the arc's canonical endpoint.
    """

    n: int
    k: int
    arcs: tuple[tuple[int, int], ...]
    dots: tuple[int, ...]
    scalar: RingElement

    @staticmethod
    def make(n: int, k: int, pairing: Iterable[tuple[int, int]],
             dot_map: dict[tuple[int, int], int] | None = None,
             scalar: RingElement | None = None) -> DottedDiagram:
        sc = scalars(k)
        arcs = tuple(sorted(tuple(sorted(a)) for a in pairing))
        seen = [p for a in arcs for p in a]
        if sorted(seen) != list(range(2 * n)):
            raise ValueError("not a perfect matching of the 2n points")
        dot_map = dot_map or {}
        dots = tuple(dot_map.get(a, 0) % k for a in arcs)
        return DottedDiagram(n, k, arcs, dots,
                             scalar if scalar is not None else sc.one)

    def key(self) -> tuple:
        """Basis identity: matching plus dots, without the scalar."""
        return (self.arcs, self.dots)

    def with_scalar(self, scalar: RingElement) -> DottedDiagram:
        return DottedDiagram(self.n, self.k, self.arcs, self.dots, scalar)

    def render(self) -> str:
        def point(p):
            return (f"t{p + 1}" if _is_top(p, self.n)
                    else f"b{p - self.n + 1}")
        match = "".join(f"({point(p)}-{point(q)})" for p, q in self.arcs)
        dotted = ",".join(f"{point(p)}-{point(q)}:{d}"
                          for (p, q), d in zip(self.arcs, self.dots) if d)
        return f"match: {match} ; dots: {dotted}"


def identity_diagram(n: int, k: int) -> DottedDiagram:
    return DottedDiagram.make(n, k, [(i, i + n) for i in range(n)])


def generator_diagram(n: int, k: int, atom) -> DottedDiagram:
    """Classical image of one algebra letter (braids become permutations)."""
    kind = atom[0]
    if kind == "y":
        if atom[1] != 1:
            raise ValueError("expand composite letters first")
        pairing = [(i, i + n) for i in range(n)]
        return DottedDiagram.make(n, k, pairing, {(0, n): atom[2] % k})
    i = atom[1]
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} out of range for {n} strands")
    if kind == "x":
        pairing = [(j, j + n) for j in range(n) if j not in (i - 1, i)]
        pairing += [(i - 1, i + n), (i, i - 1 + n)]
        return DottedDiagram.make(n, k, pairing)
    if kind == "e":
        pairing = [(j, j + n) for j in range(n) if j not in (i - 1, i)]
        pairing += [(i - 1, i), (i - 1 + n, i + n)]
        return DottedDiagram.make(n, k, pairing)
    raise ValueError(f"unknown atom {atom}")


# ---------------------------------------------------------------------------
# composition with dot bookkeeping
# ---------------------------------------------------------------------------

def _arc_lookup(d: DottedDiagram):
    table = {}
    for (p, q), dot in zip(d.arcs, d.dots):
        table[p] = (q, dot, (p, q))
        table[q] = (p, dot, (p, q))
    return table


def _arc_type(arc: tuple[int, int], n: int) -> str:
    p, q = arc
    if _is_top(p, n) and _is_top(q, n):
        return "top"
    if not _is_top(p, n) and not _is_top(q, n):
        return "bottom"
    return "through"


def _canonical_end(arc: tuple[int, int], n: int) -> int:
    p, q = arc
    kind = _arc_type(arc, n)
    if kind == "through":
        return q if not _is_top(q, n) else p
    return p  # sorted pairs: p is the leftmost endpoint on its boundary


def _segment_data(arc: tuple[int, int], n: int, entry: int, dot: int):
    """(dot contribution sign-exponent before the dot, total extrema)."""
    kind = _arc_type(arc, n)
    if kind == "through":
        return 0, 0
    storage = _canonical_end(arc, n)
    return (0, 1) if entry == storage else (1, 1)


def multiply(a: DottedDiagram, b: DottedDiagram) -> DottedDiagram:
    """Stack a over b, composing arcs and collecting loop factors.

    Open strands are walked from the canonical endpoint of the composite arc
    so the accumulated dot count is measured exactly there; closed loops are
    walked from their leftmost gluing junction.
    """
    if (a.n, a.k) != (b.n, b.k):
        raise ValueError("diagrams live on different strand/colour counts")
    n, k = a.n, a.k
    sc = scalars(k)
    ta, tb = _arc_lookup(a), _arc_lookup(b)
    used: set[tuple[str, tuple[int, int]]] = set()

    def step(layer: str, p: int):
        """Traverse the arc entered at (layer, p); return its far side."""
        table = ta if layer == "a" else tb
        q, dot, arc = table[p]
        used.add((layer, arc))
        pre, extrema = _segment_data(arc, n, p, dot)
        return q, dot, pre, extrema

    def walk_open(layer: str, start: int):
        """From a free boundary point to the other end; dots at the start."""
        total, sign = 0, 1
        layer_now, p = layer, start
        while True:
            q, dot, pre, extrema = step(layer_now, p)
            if dot:
                total += sign * (-1) ** pre * dot
            if extrema:
                sign = -sign
            if layer_now == "a" and not _is_top(q, n):
                layer_now, p = "b", q - n
            elif layer_now == "b" and _is_top(q, n):
                layer_now, p = "a", q + n
            else:
                return (layer_now, q), total

    # composite open arcs: ends are a-top or b-bottom points, and those
    # coordinates are already the final boundary coordinates.
    ends = {}
    for layer, p in [("a", t) for t in range(n)] \
            + [("b", q) for q in range(n, 2 * n)]:
        ends[(layer, p)] = walk_open(layer, p)
    new_arcs: list[tuple[int, int]] = []
    new_dots: dict[tuple[int, int], int] = {}
    for (layer, p), ((_, q), dots) in ends.items():
        arc = tuple(sorted((p, q)))
        if _canonical_end(arc, n) == p:
            new_arcs.append(arc)
            new_dots[arc] = dots % k
    # closed loops: arcs never reached from the boundary
    scalar = a.scalar * b.scalar
    for layer, diagram in (("a", a), ("b", b)):
        for arc in diagram.arcs:
            if (layer, arc) in used:
                continue
            junctions = _loop_junctions(layer, arc, n, ta, tb)
            start = min(junctions)
            total, sign = 0, 1
            layer_now, p = "a", start + n
            while True:
                q, dot, pre, extrema = step(layer_now, p)
                if dot:
                    total += sign * (-1) ** pre * dot
                if extrema:
                    sign = -sign
                if layer_now == "a":
                    layer_now, p = "b", q - n
                else:
                    layer_now, p = "a", q + n
                if (layer_now, p) == ("a", start + n):
                    break
            scalar = scalar * sc.A(total % k)
    new_arcs.sort()
    return DottedDiagram(n, k, tuple(new_arcs),
                         tuple(new_dots[arc] for arc in new_arcs), scalar)


def _loop_junctions(layer: str, arc: tuple[int, int], n: int, ta, tb):
    """Gluing positions visited by the loop through the given arc."""
    junctions = []
    # loops alternate a bottom-bottom arcs with b top-top arcs
    if layer == "a":
        start = arc[0] - n
    else:
        start = arc[0]
    layer_now, p = "a", start + n
    while True:
        table = ta if layer_now == "a" else tb
        q = table[p][0]
        if layer_now == "a":
            junctions.append(p - n)
            junctions.append(q - n)
            layer_now, p = "b", q - n
        else:
            layer_now, p = "a", q + n
        if (layer_now, p) == ("a", start + n):
            return junctions


def star(a: DottedDiagram) -> DottedDiagram:
    """Top-bottom mirror with every dot negated mod k; the scalar's loop
    values transform the same way (A_i -> A_{k-i}) so that star is an
    anti-automorphism."""
    n, k = a.n, a.k
    flipped = []
    dot_map = {}
    for (p, q), d in zip(a.arcs, a.dots):
        fp = p + n if _is_top(p, n) else p - n
        fq = q + n if _is_top(q, n) else q - n
        arc = tuple(sorted((fp, fq)))
        flipped.append(arc)
        dot_map[arc] = (-d) % k
    from .params import classical_star_map
    mapped = a.scalar.substitute(classical_star_map(k), scalars(k).ring)
    return DottedDiagram.make(n, k, flipped, dot_map, mapped)


def closure_trace(a: DottedDiagram) -> RingElement:
    """x^{-n} prod A_i^{n_i} over the cycles of the right closure."""
    n, k = a.n, a.k
    sc = scalars(k)
    table = _arc_lookup(a)
    seen: set[int] = set()
    value = a.scalar * sc.x.inverse() ** n
    for start in range(2 * n):
        if start in seen:
            continue
        # walk the cycle from its smallest point; closure arcs are dot-free
        # and carry two extrema, so they never flip the running sign
        dots, sign = 0, 1
        p = start
        while True:
            q, dot, arc = table[p]
            seen.add(p)
            seen.add(q)
            pre, extrema = _segment_data(arc, n, p, dot)
            if dot:
                dots += sign * (-1) ** pre * dot
            if extrema:
                sign = -sign
            # follow the закрытие arc: top j joins bottom j
            p = q + n if _is_top(q, n) else q - n
            if p == start:
                break
        value = value * sc.A(dots % k)
    return value


def from_word(ctx_or_k, n: int, word: Word) -> DottedDiagram:
    """Classical image of a generator word (braids become permutations)."""
    k = ctx_or_k if isinstance(ctx_or_k, int) else ctx_or_k.k
    out = identity_diagram(n, k)
    for atom in expand_composites(tuple(word)):
        if atom[0] == "x":
            img = generator_diagram(n, k, ("x", atom[1], 1))
        else:
            img = generator_diagram(n, k, atom)
        out = multiply(out, img)
    return out


def from_element(a: AlgebraElement) -> dict[tuple, RingElement]:
    """Classical image of an algebra element as basis-diagram coefficients.

    Requires a classical context; coefficients of equal diagrams combine,
    and an empty dictionary certifies the zero element.
    """
    if not a.ctx.classical:
        raise ValueError("classical image needs a classical context")
    out: dict[tuple, RingElement] = {}
    diagrams: dict[tuple, DottedDiagram] = {}
    for word, coeff in a.terms.items():
        d = from_word(a.ctx.k, a.n, word)
        key = d.key()
        diagrams[key] = d
        c = coeff * d.scalar
        old = out.get(key)
        s = c if old is None else old + c
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return out


# ---------------------------------------------------------------------------
# basis enumeration and the bilinear form
# ---------------------------------------------------------------------------

def _matchings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first = points[0]
    for idx in range(1, len(points)):
        partner = points[idx]
        rest = points[1:idx] + points[idx + 1:]
        for sub in _matchings(rest):
            yield [(first, partner)] + sub


def enumerate_basis(n: int, k: int) -> list[DottedDiagram]:
    """All k^n (2n-1)!! canonical dotted diagrams, deterministic order."""
    out = []
    for match in _matchings(list(range(2 * n))):
        arcs = tuple(sorted(tuple(sorted(a)) for a in match))
        stack = [[]]
        for _ in arcs:
            stack = [s + [d] for s in stack for d in range(k)]
        for dots in stack:
            out.append(DottedDiagram(n, k, arcs, tuple(dots),
                                     scalars(k).one))
    out.sort(key=lambda d: d.key())
    return out


class GramSizeError(ValueError):
    pass


def gram_determinant(n: int, k: int, specialize_A: bool = True,
                     size_guard: int = 3000) -> RingElement:
    """det of (closure_trace(v_i star(v_j))) over the diagram basis.

    With ``specialize_A`` every A_i is sent to 1/x first, making entries
    Laurent monomials in x.  Exact fraction-free evaluation.
    """
    size = basis_size(n, k)
    if size > size_guard:
        raise GramSizeError(
            f"Gram matrix would have {size} rows (guard {size_guard})")
    sc = scalars(k)
    basis = enumerate_basis(n, k)
    spec = {f"A{i}": sc.x.inverse() for i in range(1, k)}
    stars = [star(v) for v in basis]
    rows = []
    for vi in basis:
        row = []
        for vj in stars:
            val = closure_trace(multiply(vi, vj))
            if specialize_A and k > 1:
                val = val.substitute(spec, sc.ring)
            row.append(val)
        rows.append(row)
    return _determinant(rows, sc)


def _determinant(rows: list[list[RingElement]], sc: ClassicalScalars,
                 ) -> RingElement:
    m = len(rows)
    det = sc.one
    rows = [row[:] for row in rows]
    for col in range(m):
        pivot = next((r for r in range(col, m)
                      if not rows[r][col].is_zero()), None)
        if pivot is None:
            return sc.zero
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col]
        det = det * pv
        inv = pv.inverse()
        for r in range(col + 1, m):
            factor = rows[r][col]
            if factor.is_zero():
                continue
            factor = factor * inv
            rows[r] = [rows[r][c] - factor * rows[col][c] for c in range(m)]
    return det
