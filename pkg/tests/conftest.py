"""Shared helpers: small graph builders and an independent brute-force oracle."""

import random

from sgrapp.stream import StreamRecord, snapshot_from_edges

# One line per acceptance check, echoed in the terminal summary so the
# verdicts stay visible under default output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance checks")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def complete_bipartite(m, n):
    """Edge list of K_{m,n}."""
    return [(a, b) for a in range(m) for b in range(n)]


def random_bipartite_edges(rng: random.Random, n_i: int, n_j: int, n_edges: int):
    """n_edges distinct random edges on n_i x n_j vertices."""
    assert n_edges <= n_i * n_j
    cells = rng.sample(range(n_i * n_j), n_edges)
    return [(c // n_j, c % n_j) for c in cells]


def records_from(triples):
    """StreamRecords from (tau, i, j) triples, in the given order."""
    return [StreamRecord(tau=t, i=i, j=j) for t, i, j in triples]


def oracle_butterflies(edges):
    """Canonical quadruples {(i1,i2,j1,j2)} found by pairing vertex-disjoint edges.

    Deliberately independent of the library's counting paths: any two
    disjoint edges of a butterfly locate it, and the quadruples are
    deduplicated by canonical form rather than by halving a tally.
    """
    edges = list(dict.fromkeys(edges))
    edge_set = set(edges)
    found = set()
    for a in range(len(edges)):
        i1, j1 = edges[a]
        for b in range(a + 1, len(edges)):
            i2, j2 = edges[b]
            if i1 != i2 and j1 != j2 and (i1, j2) in edge_set and (i2, j1) in edge_set:
                found.add((min(i1, i2), max(i1, i2), min(j1, j2), max(j1, j2)))
    return found


def oracle_support(edges):
    """Per-vertex butterfly tallies from the oracle quadruples."""
    i_sup, j_sup = {}, {}
    for i, j in dict.fromkeys(edges):
        i_sup.setdefault(i, 0)
        j_sup.setdefault(j, 0)
    for i1, i2, j1, j2 in oracle_butterflies(edges):
        i_sup[i1] += 1
        i_sup[i2] += 1
        j_sup[j1] += 1
        j_sup[j2] += 1
    return i_sup, j_sup


def oracle_incident(edges, i, j):
    """Number of oracle quadruples containing edge (i, j)."""
    total = 0
    for i1, i2, j1, j2 in oracle_butterflies(edges):
        if i in (i1, i2) and j in (j1, j2):
            total += 1
    return total


def snap_of(edges, **kwargs):
    return snapshot_from_edges(edges, **kwargs)
