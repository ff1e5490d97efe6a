import math
import random

import pytest

from sgrapp.exact import (brute_force_count, butterfly_support, count_butterflies,
                          count_incident_butterflies, enumerate_butterflies)
from sgrapp.stream import snapshot_from_edges

from conftest import (complete_bipartite, oracle_butterflies, oracle_incident,
                      oracle_support, random_bipartite_edges)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (2, 3), (3, 3), (4, 5), (6, 2)])
def test_complete_bipartite_closed_form(m, n):
    snap = snapshot_from_edges(complete_bipartite(m, n))
    expected = math.comb(m, 2) * math.comb(n, 2)
    assert count_butterflies(snap) == expected


def test_empty_and_tiny_graphs():
    assert count_butterflies(snapshot_from_edges([])) == 0
    assert count_butterflies(snapshot_from_edges([(0, 0)])) == 0
    # a path i0-j0-i1-j1 has no butterfly
    assert count_butterflies(snapshot_from_edges([(0, 0), (1, 0), (1, 1)])) == 0


def test_duplicate_edges_do_not_count():
    edges = complete_bipartite(2, 2) * 3
    assert count_butterflies(snapshot_from_edges(edges)) == 1


def test_matches_oracle_and_is_path_invariant():
    rng = random.Random(42)
    for trial in range(25):
        n_i = rng.randint(4, 12)
        n_j = rng.randint(4, 12)
        n_edges = rng.randint(10, min(60, n_i * n_j))
        edges = random_bipartite_edges(rng, n_i, n_j, n_edges)
        snap = snapshot_from_edges(edges)
        expected = len(oracle_butterflies(edges))
        counts = {
            count_butterflies(snap),
            count_butterflies(snap, anchor="i"),
            count_butterflies(snap, anchor="j"),
            count_butterflies(snap, method="intersect"),
            count_butterflies(snap, anchor="i", method="intersect"),
            count_butterflies(snap, anchor="j", method="intersect"),
            brute_force_count(snap),
        }
        assert counts == {expected}


def test_count_never_exceeds_pair_bound():
    rng = random.Random(5)
    for trial in range(10):
        edges = random_bipartite_edges(rng, 6, 6, rng.randint(5, 30))
        snap = snapshot_from_edges(edges)
        bound = math.comb(snap.n_vertices("i"), 2) * math.comb(snap.n_vertices("j"), 2)
        assert 0 <= count_butterflies(snap) <= bound


def test_enumerate_is_canonical_and_complete():
    rng = random.Random(9)
    edges = random_bipartite_edges(rng, 8, 8, 40)
    snap = snapshot_from_edges(edges)
    quads = list(enumerate_butterflies(snap))
    assert len(quads) == len(set(quads)) == count_butterflies(snap)
    assert set(quads) == oracle_butterflies(edges)
    for i1, i2, j1, j2 in quads:
        assert i1 < i2 and j1 < j2


def test_support_complete_bipartite():
    snap = snapshot_from_edges(complete_bipartite(2, 2))
    i_sup, j_sup = butterfly_support(snap)
    assert i_sup == {0: 1, 1: 1}
    assert j_sup == {0: 1, 1: 1}
    snap = snapshot_from_edges(complete_bipartite(3, 3))
    i_sup, j_sup = butterfly_support(snap)
    assert set(i_sup.values()) == set(j_sup.values()) == {6}


def test_support_zero_for_butterfly_free_vertices():
    # star: one i vertex with three j neighbors
    snap = snapshot_from_edges([(0, 0), (0, 1), (0, 2)])
    i_sup, j_sup = butterfly_support(snap)
    assert i_sup == {0: 0}
    assert j_sup == {0: 0, 1: 0, 2: 0}


def test_support_matches_oracle_and_sums_to_4b():
    rng = random.Random(17)
    for trial in range(15):
        edges = random_bipartite_edges(rng, 9, 9, rng.randint(12, 50))
        snap = snapshot_from_edges(edges)
        i_sup, j_sup = butterfly_support(snap)
        oi, oj = oracle_support(edges)
        assert i_sup == oi
        assert j_sup == oj
        b = count_butterflies(snap)
        assert sum(i_sup.values()) + sum(j_sup.values()) == 4 * b


def test_incident_examples():
    snap = snapshot_from_edges(complete_bipartite(2, 2))
    assert count_incident_butterflies(snap, 0, 0) == 1
    path = snapshot_from_edges([(0, 0), (1, 0), (1, 1)])
    assert count_incident_butterflies(path, 1, 0) == 0


def test_incident_missing_edge_raises():
    snap = snapshot_from_edges([(0, 0)])
    with pytest.raises(ValueError):
        count_incident_butterflies(snap, 0, 1)


def test_incident_matches_oracle_and_sums_to_4b():
    rng = random.Random(23)
    for trial in range(10):
        edges = random_bipartite_edges(rng, 8, 8, rng.randint(10, 40))
        snap = snapshot_from_edges(edges)
        total = 0
        for i, j in edges:
            inc = count_incident_butterflies(snap, i, j)
            assert inc == oracle_incident(edges, i, j)
            total += inc
        assert total == 4 * count_butterflies(snap)


def test_brute_force_halving_and_cap():
    snap = snapshot_from_edges(complete_bipartite(3, 3))
    assert brute_force_count(snap) == 9
    with pytest.raises(ValueError, match="capped"):
        brute_force_count(snap, cap=5)
