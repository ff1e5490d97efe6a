"""Reservoir-sampling butterfly estimators over a deduplicated edge stream.

Three variants share one reservoir discipline: an arriving edge is kept with
the current probability p; when the reservoir outgrows its capacity, every
edge survives a subsample round with probability gamma and p shrinks by the
same factor. The scaling below follows from unbiasedness:

- Any past edge sits in the reservoir with probability exactly p (its
  acceptance and every subsample round compound to the current p), so a
  reservoir butterfly stands in for 1/p**4 stream butterflies.
- Variant 1 tracks the exact reservoir count, recounting after subsampling.
- Variant 2 tracks the same count but replaces each recount with its
  expectation: a counted butterfly survives a round with probability
  gamma**4 (its four edges kept independently).
- Variant 3 credits completions before sampling: the arriving edge is
  observed with certainty and only its three complementary edges are
  reservoir-resident, so each completion adds 1/p**3 immediately and needs
  no later rescaling.
"""

from __future__ import annotations

import random

from .exact import count_butterflies, count_incident_butterflies
from .stream import BipartiteSnapshot, ValidationError

DEFAULT_GAMMA = 0.7


class FleetState:
    """Reservoir, sampling probability, and the variant's running estimate."""

    def __init__(self, capacity: int, variant: int, p: float = 1.0,
                 gamma: float = DEFAULT_GAMMA, seed: int = 0):
        if capacity < 1:
            raise ValidationError(f"reservoir capacity must be >= 1, got {capacity}")
        if variant not in (1, 2, 3):
            raise ValidationError(f"variant must be 1, 2 or 3, got {variant}")
        if not 0.0 < p <= 1.0:
            raise ValidationError(f"sampling probability must be in (0, 1], got {p}")
        if not 0.0 < gamma < 1.0:
            raise ValidationError(f"gamma must be in (0, 1), got {gamma}")
        self.capacity = capacity
        self.variant = variant
        self.p = p
        self.gamma = gamma
        self.reservoir = BipartiteSnapshot()
        self.rng = random.Random(seed)
        # Reservoir-count units for variants 1-2, fully scaled for variant 3.
        self.acc = 0.0


def _completions_against_reservoir(res: BipartiteSnapshot, i: int, j: int) -> int:
    """Butterflies the absent edge (i, j) would complete with reservoir edges.

    (i, j) is not a reservoir edge, so i never shows up in N(j) and the
    intersections below hold only true co-anchors.
    """
    ni = res.i_adj.get(i)
    nj = res.j_adj.get(j)
    if not ni or not nj:
        return 0
    j_adj = res.j_adj
    total = 0
    for j2 in ni:
        if j2 != j:
            total += len(nj & j_adj[j2])
    return total


def fleet_process(state: FleetState, i: int, j: int) -> None:
    """Feeds one stream edge; the caller must deduplicate the stream."""
    if state.variant == 3:
        found = _completions_against_reservoir(state.reservoir, i, j)
        if found:
            state.acc += found / state.p ** 3
    if state.rng.random() < state.p:
        state.reservoir.insert(i, j)
        if state.variant != 3:
            state.acc += count_incident_butterflies(state.reservoir, i, j)
        if state.reservoir.edge_count > state.capacity:
            _subsample(state)


def _subsample(state: FleetState) -> None:
    """Thins the reservoir until it fits, one gamma round at a time."""
    rng = state.rng
    gamma = state.gamma
    while state.reservoir.edge_count > state.capacity:
        survivors = [e for e in state.reservoir.edges() if rng.random() < gamma]
        thinned = BipartiteSnapshot()
        for si, sj in survivors:
            thinned.insert(si, sj)
        state.reservoir = thinned
        state.p *= gamma
        if state.variant == 1:
            state.acc = float(count_butterflies(state.reservoir))
        elif state.variant == 2:
            state.acc *= gamma ** 4


def fleet_estimate(state: FleetState) -> float:
    """Current unbiased estimate of the stream's butterfly count."""
    if state.variant == 3:
        return state.acc
    return state.acc / state.p ** 4
