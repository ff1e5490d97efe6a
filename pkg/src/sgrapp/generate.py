"""Synthetic streams: preferential-attachment graphs projected to bipartite edges.

The generator grows a directed graph vertex by vertex, each newcomer wiring m
distinct out-edges to earlier vertices with probability proportional to
degree, on top of an initial complete graph on m0 vertices oriented low to
high. Projection keeps every directed edge as a bipartite one, source on the
i side, destination on the j side (the sides are separate id namespaces).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .stream import StreamRecord, StreamSource, ValidationError


@dataclass(slots=True)
class BAConfig:
    """n_total vertices, m out-edges per newcomer, seed clique of m0 (default m)."""

    n_total: int
    m: int
    m0: int | None = None
    seed: int = 0

    def seed_size(self) -> int:
        return self.m if self.m0 is None else self.m0


def expected_edge_count(cfg: BAConfig) -> int:
    """Closed form: the seed clique plus m edges per grown vertex."""
    m0 = cfg.seed_size()
    return m0 * (m0 - 1) // 2 + (cfg.n_total - m0) * cfg.m


def generate_ba_unipartite(cfg: BAConfig) -> list[tuple[int, int]]:
    """Directed edge list of the grown graph, deterministic under cfg.seed."""
    m0 = cfg.seed_size()
    if cfg.m < 1:
        raise ValidationError(f"m must be >= 1, got {cfg.m}")
    if cfg.m > m0:
        raise ValidationError(f"m ({cfg.m}) cannot exceed the seed clique size ({m0})")
    if m0 > cfg.n_total:
        raise ValidationError(f"seed clique ({m0}) cannot exceed n_total ({cfg.n_total})")
    rng = random.Random(cfg.seed)
    edges: list[tuple[int, int]] = []
    # One entry per edge endpoint makes a uniform draw degree-proportional.
    endpoints: list[int] = []
    for u in range(m0):
        for v in range(u + 1, m0):
            edges.append((u, v))
            endpoints.append(u)
            endpoints.append(v)
    choice = rng.choice
    for newcomer in range(m0, cfg.n_total):
        targets: set[int] = set()
        if not endpoints:
            # a one-vertex seed has no degree mass; the first attachment is uniform
            targets.update(rng.sample(range(newcomer), cfg.m))
        while len(targets) < cfg.m:  # redraw collisions to keep targets distinct
            targets.add(choice(endpoints))
        for t in sorted(targets):
            edges.append((newcomer, t))
            endpoints.append(newcomer)
            endpoints.append(t)
    return edges


def project_bipartite(edges) -> list[tuple[int, int]]:
    """Maps each directed (u, v) to bipartite (i=u, j=v).

    Ids carry over unchanged; a vertex with both roles becomes two distinct
    vertices because i and j are separate namespaces. Distinct directed edges
    stay distinct, so the edge count is preserved.
    """
    return [(u, v) for u, v in edges]


def assign_timestamps(edges, mode: str, *, lo: int = 0, hi: int | None = None,
                      stamps=None, seed: int = 0) -> StreamSource:
    """Stamps bipartite edges and returns them as a timestamp-sorted stream.

    mode "random" draws each stamp uniformly from [lo, hi]; mode "real"
    shuffles a provided stamp multiset onto the edges, preserving it exactly.
    """
    rng = random.Random(seed)
    edges = list(edges)
    if mode == "random":
        if hi is None:
            hi = max(len(edges) - 1, lo)
        if hi < lo:
            raise ValidationError(f"empty stamp range [{lo}, {hi}]")
        assigned = [rng.randint(lo, hi) for _ in edges]
    elif mode == "real":
        if stamps is None:
            raise ValidationError("mode 'real' needs a stamp multiset")
        assigned = list(stamps)
        if len(assigned) != len(edges):
            raise ValidationError(f"{len(assigned)} stamps for {len(edges)} edges")
        rng.shuffle(assigned)
    else:
        raise ValidationError(f"unknown stamp mode {mode!r}")
    records = [StreamRecord(tau=t, i=i, j=j) for (i, j), t in zip(edges, assigned)]
    records.sort(key=lambda r: r.tau)
    return StreamSource(records=records)
