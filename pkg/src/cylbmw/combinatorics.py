"""Tuples of Young diagrams and the branching graph of the tower.

The simple components of the generic n-strand algebra are indexed by
k-tuples of partitions of total size n, n-2, n-4, ...; restriction to n-1
strands adds or removes a single box in a single component.  Counting paths
from the empty tuple gives the dimensions d of the simple modules, and
semisimplicity forces sum d^2 = k^n (2n-1)!!.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .brauer import basis_size

Partition = tuple[int, ...]
YoungTuple = tuple[Partition, ...]


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n, parts weakly decreasing, deterministic order."""
    if n == 0:
        return ((),)
    out: list[Partition] = []

    def rec(remaining: int, cap: int, acc: list[int]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(cap, remaining), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def tuples_of_size(k: int, size: int) -> list[YoungTuple]:
    """All k-tuples of partitions with total size ``size``."""
    out: list[YoungTuple] = []

    def rec(component: int, remaining: int, acc: list[Partition]):
        if component == k - 1:
            for lam in partitions(remaining):
                out.append(tuple(acc + [lam]))
            return
        for here in range(remaining + 1):
            for lam in partitions(here):
                acc.append(lam)
                rec(component + 1, remaining - here, acc)
                acc.pop()

    rec(0, size, [])
    return out


def enumerate_gamma_hat(k: int, n: int) -> list[YoungTuple]:
    """Index set of the simple components: total sizes n, n-2, ... >= 0."""
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    out: list[YoungTuple] = []
    size = n
    while size >= 0:
        out.extend(tuples_of_size(k, size))
        size -= 2
    return out


def tuple_size(t: YoungTuple) -> int:
    return sum(sum(lam) for lam in t)


def _one_box_apart(lam: Partition, mu: Partition) -> bool:
    """True when one partition is the other plus a single box."""
    if abs(sum(lam) - sum(mu)) != 1:
        return False
    small, large = (lam, mu) if sum(lam) < sum(mu) else (mu, lam)
    small = list(small) + [0] * (len(large) - len(small))
    diffs = [a - b for a, b in zip(large, small)]
    return all(d >= 0 for d in diffs) and sum(diffs) == 1


def tuples_linked(t1: YoungTuple, t2: YoungTuple) -> bool:
    """Edge rule: exactly one component differs, by exactly one box."""
    differing = [i for i, (a, b) in enumerate(zip(t1, t2)) if a != b]
    if len(differing) != 1:
        return False
    i = differing[0]
    return _one_box_apart(t1[i], t2[i])


def bratteli_edges(level_a: list[YoungTuple], level_b: list[YoungTuple],
                   ) -> list[tuple[int, int]]:
    """Edges (index in level_a, index in level_b) under the one-box rule."""
    out = []
    for i, t1 in enumerate(level_a):
        for j, t2 in enumerate(level_b):
            if tuples_linked(t1, t2):
                out.append((i, j))
    return out


def path_counts(k: int, n: int) -> dict[YoungTuple, int]:
    """Number of paths from the empty tuple down to each level-n vertex."""
    counts: dict[YoungTuple, int] = {tuple(() for _ in range(k)): 1}
    for level in range(1, n + 1):
        here = enumerate_gamma_hat(k, level)
        new_counts: dict[YoungTuple, int] = {}
        for t in here:
            total = 0
            for prev, c in counts.items():
                if tuples_linked(prev, t):
                    total += c
            new_counts[t] = total
        counts = new_counts
    return counts


class DimensionGuardError(ValueError):
    pass


def dimension_check(k: int, n: int, guard: int = 6) -> bool:
    """sum of squared path counts against the diagram count k^n (2n-1)!!."""
    if n > guard:
        raise DimensionGuardError(f"n = {n} exceeds the guard {guard}")
    counts = path_counts(k, n)
    return sum(c * c for c in counts.values()) == basis_size(n, k)


def render_tuple(t: YoungTuple) -> str:
    def part(lam: Partition) -> str:
        return "[" + ",".join(map(str, lam)) + "]" if lam else "."
    return "(" + ",".join(part(lam) for lam in t) + ")"


def bratteli_dot(k: int, n: int) -> str:
    """The branching graph up to level n in DOT format."""
    lines = ["digraph bratteli {", "  rankdir=TB;", "  node [shape=box];"]
    levels = [enumerate_gamma_hat(k, level) for level in range(n + 1)]
    for level, nodes in enumerate(levels):
        lines.append(f"  subgraph level{level} {{ rank=same;")
        for idx, t in enumerate(nodes):
            lines.append(
                f'    n{level}_{idx} [label="{render_tuple(t)}"];')
        lines.append("  }")
    for level in range(n):
        for i, j in bratteli_edges(levels[level], levels[level + 1]):
            lines.append(f"  n{level}_{i} -> n{level + 1}_{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dims_table(k: int, n: int) -> str:
    """Table of per-component path counts and the dimension identity line."""
    counts = path_counts(k, n)
    lines = ["tuple\td\td^2"]
    for t in enumerate_gamma_hat(k, n):
        d = counts[t]
        lines.append(f"{render_tuple(t)}\t{d}\t{d * d}")
    total = sum(c * c for c in counts.values())
    expected = basis_size(n, k)
    verdict = "OK" if total == expected else "MISMATCH"
    lines.append(f"sum_d2={total} expected={expected} {verdict}")
    return "\n".join(lines) + "\n"
