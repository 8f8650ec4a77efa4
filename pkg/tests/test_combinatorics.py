import pytest

from cylbmw.brauer import basis_size
from cylbmw.combinatorics import (
    DimensionGuardError,
    bratteli_dot,
    bratteli_edges,
    dimension_check,
    dims_table,
    enumerate_gamma_hat,
    partitions,
    path_counts,
    render_tuple,
    tuples_linked,
)


def test_partitions_small():
    assert partitions(0) == ((),)
    assert partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))


def test_level_one_two_colours():
    got = enumerate_gamma_hat(2, 1)
    assert set(got) == {((1,), ()), ((), (1,))}


def test_level_two_two_colours():
    got = enumerate_gamma_hat(2, 2)
    expected = {
        ((2,), ()), ((1, 1), ()), ((), (2,)), ((), (1, 1)),
        ((1,), (1,)), ((), ()),
    }
    assert set(got) == expected and len(got) == 6


def test_level_zero():
    assert enumerate_gamma_hat(1, 0) == [((),)]


def test_level_contains_two_lower():
    for k in (1, 2, 3):
        for n in (2, 3, 4):
            here = set(enumerate_gamma_hat(k, n))
            below = set(enumerate_gamma_hat(k, n - 2))
            assert below <= here


def test_edges_from_empty():
    lvl0 = enumerate_gamma_hat(2, 0)
    lvl1 = enumerate_gamma_hat(2, 1)
    edges = bratteli_edges(lvl0, lvl1)
    assert len(edges) == 2


def test_edges_from_single_box():
    lvl1 = enumerate_gamma_hat(2, 1)
    lvl2 = enumerate_gamma_hat(2, 2)
    box_first = lvl1.index(((1,), ()))
    edges = [e for e in bratteli_edges(lvl1, lvl2) if e[0] == box_first]
    targets = {lvl2[j] for _, j in edges}
    assert targets == {((), ()), ((2,), ()), ((1, 1), ()), ((1,), (1,))}


def test_one_colour_matches_classical_branching():
    # the k = 1 tower is the classical one: single partitions, one-box rule
    lvl2 = enumerate_gamma_hat(1, 2)
    lvl3 = enumerate_gamma_hat(1, 3)
    edges = bratteli_edges(lvl2, lvl3)
    for i, j in edges:
        assert tuples_linked(lvl2[i], lvl3[j])
    assert len(edges) == 10


def test_path_counts_level_two():
    counts = path_counts(2, 2)
    assert counts[((), ())] == 2
    assert counts[((1,), (1,))] == 2
    for t in (((2,), ()), ((1, 1), ()), ((), (2,)), ((), (1, 1))):
        assert counts[t] == 1
    assert sum(c * c for c in counts.values()) == 12


def _addable(parts):
    return 1 + sum(1 for r in range(len(parts))
                   if r == 0 or parts[r - 1] > parts[r])


def _removable(parts):
    return sum(1 for r in range(len(parts))
               if r == len(parts) - 1 or parts[r] > parts[r + 1])


def test_edge_count_is_addable_plus_removable():
    # each vertex meets the next level in (addable + removable) boxes,
    # summed over the components independently
    for k, n in ((2, 2), (3, 2), (1, 4)):
        here = enumerate_gamma_hat(k, n)
        above = enumerate_gamma_hat(k, n + 1)
        edges = bratteli_edges(here, above)
        for idx, t in enumerate(here):
            degree = sum(1 for i, _ in edges if i == idx)
            expected = sum(_addable(list(lam)) + _removable(list(lam))
                           for lam in t)
            assert degree == expected, render_tuple(t)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 5])
def test_dimension_identity(k, n):
    assert dimension_check(k, n)


def test_dimension_check_examples():
    counts = path_counts(1, 3)
    assert sum(c * c for c in counts.values()) == 15 == basis_size(3, 1)
    assert len(enumerate_gamma_hat(3, 1)) == 3


def test_dimension_guard():
    with pytest.raises(DimensionGuardError):
        dimension_check(2, 9)


def test_dot_export_mentions_every_vertex():
    text = bratteli_dot(2, 2)
    assert text.startswith("digraph")
    for level, count in ((0, 1), (1, 2), (2, 6)):
        for idx in range(count):
            assert f"n{level}_{idx}" in text


def test_dims_table_footer():
    table = dims_table(2, 2)
    assert table.strip().splitlines()[-1] == "sum_d2=12 expected=12 OK"
