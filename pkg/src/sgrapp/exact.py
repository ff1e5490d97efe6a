"""Exact butterfly counting on a bipartite snapshot.

A butterfly is a pair of i-vertices and a pair of j-vertices joined by all
four edges, i.e. a 2x2 biclique. Counts are over distinct vertex-pair
quadruples, so each butterfly contributes exactly 1.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations

from .stream import BipartiteSnapshot

# Pair keys pack two dense vertex ids into one int; interning keeps ids < 2^32.
_SHIFT = 32
_MASK = (1 << _SHIFT) - 1

BRUTE_FORCE_CAP = 5000


def _pick_anchor(snap: BipartiteSnapshot) -> str:
    """Anchors the side with the lower average degree; ties anchor the i side."""
    # edge_count / n_i <= edge_count / n_j exactly when n_i >= n_j
    return "i" if snap.n_vertices("i") >= snap.n_vertices("j") else "j"


def _count_by_wedges(anchor_adj: dict[int, set[int]]) -> int:
    """Tallies wedges per endpoint pair; c common anchors give C(c,2) butterflies."""
    pair_wedges: Counter[int] = Counter()
    update = pair_wedges.update
    for nbrs in anchor_adj.values():
        if len(nbrs) > 1:
            update([(a << _SHIFT) | b for a, b in combinations(sorted(nbrs), 2)])
    return sum(c * (c - 1) for c in pair_wedges.values()) // 2


def _count_by_intersection(anchor_adj: dict[int, set[int]], other_adj: dict[int, set[int]]) -> int:
    """Per anchor and neighbor pair, counts co-anchors by set intersection.

    The anchor itself sits in both neighborhoods and is excluded. Every
    butterfly is met from both of its anchors, so the raw total is halved.
    """
    total = 0
    for nbrs in anchor_adj.values():
        if len(nbrs) > 1:
            for a, b in combinations(sorted(nbrs), 2):
                c = len(other_adj[a] & other_adj[b])
                if c > 1:
                    total += c - 1
    assert total % 2 == 0
    return total // 2


def count_butterflies(snap: BipartiteSnapshot, anchor: str = "auto", method: str = "wedge") -> int:
    """Exact number of distinct butterflies in the snapshot.

    anchor picks the iteration side ("auto" compares average degrees); the
    result is independent of it. method "wedge" aggregates wedge counts per
    endpoint pair, "intersect" intersects neighbor sets pairwise; both
    evaluate the same sum.
    """
    if anchor == "auto":
        anchor = _pick_anchor(snap)
    anchor_adj = snap.adjacency(anchor)
    if method == "wedge":
        return _count_by_wedges(anchor_adj)
    if method == "intersect":
        return _count_by_intersection(anchor_adj, snap.adjacency("j" if anchor == "i" else "i"))
    raise ValueError(f"unknown method {method!r}")


def enumerate_butterflies(snap: BipartiteSnapshot):
    """Yields each butterfly once as (i1, i2, j1, j2) with i1 < i2 and j1 < j2.

    Materialization is for analyses and oracle checks at desk scale; the
    output size is the butterfly count itself.
    """
    j_adj = snap.j_adj
    for i1 in sorted(snap.i_adj):
        nbrs = snap.i_adj[i1]
        if len(nbrs) < 2:
            continue
        for j1, j2 in combinations(sorted(nbrs), 2):
            common = j_adj[j1] & j_adj[j2]
            for i2 in sorted(common):
                if i2 > i1:
                    yield (i1, i2, j1, j2)


def butterfly_support(snap: BipartiteSnapshot) -> tuple[dict[int, int], dict[int, int]]:
    """Per-vertex butterfly participation counts for the i and j sides.

    Every vertex of the snapshot is present in the result, with 0 for
    vertices in no butterfly. The two tables sum to 4x the butterfly count.
    """
    i_adj, j_adj = snap.i_adj, snap.j_adj
    pair_wedges: Counter[int] = Counter()
    for nbrs in i_adj.values():
        if len(nbrs) > 1:
            pair_wedges.update([(a << _SHIFT) | b for a, b in combinations(sorted(nbrs), 2)])

    i_sup = dict.fromkeys(i_adj, 0)
    j_sup = dict.fromkeys(j_adj, 0)
    # A wedge anchor forms one butterfly with each of the other c-1 anchors
    # sharing its endpoint pair.
    for i1, nbrs in i_adj.items():
        if len(nbrs) > 1:
            s = 0
            for a, b in combinations(sorted(nbrs), 2):
                s += pair_wedges[(a << _SHIFT) | b] - 1
            i_sup[i1] = s
    for key, c in pair_wedges.items():
        if c > 1:
            forms = c * (c - 1) // 2
            j_sup[key >> _SHIFT] += forms
            j_sup[key & _MASK] += forms
    return i_sup, j_sup


def count_incident_butterflies(snap: BipartiteSnapshot, i: int, j: int) -> int:
    """Number of butterflies that contain the existing edge (i, j)."""
    if not snap.has_edge(i, j):
        raise ValueError(f"edge ({i}, {j}) not in snapshot")
    j_adj = snap.j_adj
    nj = j_adj[j]
    total = 0
    for j2 in snap.i_adj[i]:
        if j2 != j:
            c = len(nj & j_adj[j2])
            if c > 1:
                total += c - 1  # drop the shared anchor i
    return total


def brute_force_count(snap: BipartiteSnapshot, cap: int = BRUTE_FORCE_CAP) -> int:
    """Counts butterflies by testing every unordered pair of vertex-disjoint edges.

    A pair (i1,j1),(i2,j2) with the completing edges (i1,j2),(i2,j1) present
    marks a butterfly; each butterfly holds two such disjoint pairs, so the
    tally is halved. Quadratic in edges, refused above cap.
    """
    if snap.edge_count > cap:
        raise ValueError(f"brute force capped at {cap} edges, snapshot has {snap.edge_count}")
    edges = list(snap.edges())
    has_edge = snap.has_edge
    total = 0
    for idx, (i1, j1) in enumerate(edges):
        for i2, j2 in edges[idx + 1:]:
            if i1 != i2 and j1 != j2 and has_edge(i1, j2) and has_edge(i2, j1):
                total += 1
    assert total % 2 == 0
    return total // 2
