"""Stream characterization: densification, inter-arrivals, and hub structure."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .exact import butterfly_support, count_incident_butterflies, enumerate_butterflies
from .stream import BipartiteSnapshot, ValidationError

DENSIFICATION_PREFIX = 5000
FIT_MAX_DEGREE = 10
MONOTONE_GRID = 1000
MONOTONE_TOL = -1e-9


def densification_series(records, eager_limit: int = DENSIFICATION_PREFIX) -> list[tuple[int, int]]:
    """Cumulative butterfly count after each of the first eager_limit records.

    Maintained eagerly: every new edge adds exactly its own incident
    butterflies. Duplicate records leave the count unchanged but still emit a
    point, so t is the record index.
    """
    snap = BipartiteSnapshot()
    total = 0
    series = []
    for t, r in enumerate(records, start=1):
        if t > eager_limit:
            break
        if snap.insert(r.i, r.j, r.tau):
            total += count_incident_butterflies(snap, r.i, r.j)
        series.append((t, total))
    return series


@dataclass(slots=True)
class DegreeFit:
    """One polynomial fit of the densification series."""

    degree: int
    poly: np.polynomial.Polynomial
    rmse: float
    r2: float
    non_decreasing: bool


@dataclass(slots=True)
class FitReport:
    fits: list[DegreeFit]
    best_degree: int | None

    def best(self) -> DegreeFit | None:
        if self.best_degree is None:
            return None
        return next(f for f in self.fits if f.degree == self.best_degree)


def fit_densification(series, max_degree: int = FIT_MAX_DEGREE) -> FitReport:
    """Least-squares polynomial fits of degrees 1..max_degree.

    The best fit must be non-decreasing on a 1000-point grid over the data
    range (successive differences >= -1e-9); among those, lowest RMSE wins,
    ties broken by highest R^2. best_degree is None when every candidate
    decreases somewhere.
    """
    if len(series) <= max_degree + 1:
        raise ValidationError(f"need more than {max_degree + 1} points, got {len(series)}")
    x = np.array([t for t, _ in series], dtype=float)
    y = np.array([b for _, b in series], dtype=float)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    grid = np.linspace(x.min(), x.max(), MONOTONE_GRID)
    fits = []
    for degree in range(1, max_degree + 1):
        poly = np.polynomial.Polynomial.fit(x, y, degree)
        resid = y - poly(x)
        ss_res = float((resid ** 2).sum())
        rmse = math.sqrt(ss_res / len(y))
        if ss_tot > 0.0:
            r2 = 1.0 - ss_res / ss_tot
        else:
            r2 = 1.0 if ss_res == 0.0 else 0.0
        non_decreasing = bool(np.all(np.diff(poly(grid)) >= MONOTONE_TOL))
        fits.append(DegreeFit(degree, poly, rmse, r2, non_decreasing))
    candidates = [f for f in fits if f.non_decreasing]
    best = min(candidates, key=lambda f: (f.rmse, -f.r2), default=None)
    return FitReport(fits=fits, best_degree=best.degree if best else None)


def interarrival_distribution(snap: BipartiteSnapshot) -> Counter[int]:
    """Histogram of |tau1 - tau2| over edge pairs inside butterflies.

    Each butterfly contributes all 6 gaps among its 4 edge stamps; a pair
    shared by several butterflies is counted once per butterfly. Requires a
    snapshot built with record_stamps=True.
    """
    if snap.edge_stamps is None:
        raise ValidationError("snapshot has no edge stamps; build it with record_stamps=True")
    stamps = snap.edge_stamps
    hist: Counter[int] = Counter()
    for i1, i2, j1, j2 in enumerate_butterflies(snap):
        taus = (stamps[(i1, j1)], stamps[(i1, j2)], stamps[(i2, j1)], stamps[(i2, j2)])
        for a, b in combinations(taus, 2):
            hist[abs(a - b)] += 1
    return hist


def hub_set(snap: BipartiteSnapshot, side: str) -> set[int]:
    """Vertices whose degree exceeds the mean of the side's distinct degree values."""
    adj = snap.adjacency(side)
    if not adj:
        return set()
    distinct = {len(nbrs) for nbrs in adj.values()}
    mean = sum(distinct) / len(distinct)
    return {v for v, nbrs in adj.items() if len(nbrs) > mean}


def hub_connection_fraction(snap: BipartiteSnapshot, side: str) -> float:
    """Sum of hub degrees over (edges x hub count); 0.0 only when there are no hubs."""
    hubs = hub_set(snap, side)
    if not hubs:
        return 0.0
    total = sum(snap.degree(v, side) for v in hubs)
    return total / (snap.edge_count * len(hubs))


@dataclass(slots=True)
class HubFractions:
    """Shares of butterflies by how many of their vertices are hubs.

    by_total[h] is the fraction with h hub vertices overall (0..4), by_i and
    by_j count hub anchors per side (0..2). All zeros when butterfly_count
    is 0.
    """

    butterfly_count: int
    by_total: tuple[float, ...]
    by_i: tuple[float, ...]
    by_j: tuple[float, ...]


def butterfly_hub_fractions(snap: BipartiteSnapshot) -> HubFractions:
    hubs_i = hub_set(snap, "i")
    hubs_j = hub_set(snap, "j")
    total = [0] * 5
    per_i = [0] * 3
    per_j = [0] * 3
    count = 0
    for i1, i2, j1, j2 in enumerate_butterflies(snap):
        hi = (i1 in hubs_i) + (i2 in hubs_i)
        hj = (j1 in hubs_j) + (j2 in hubs_j)
        total[hi + hj] += 1
        per_i[hi] += 1
        per_j[hj] += 1
        count += 1
    if count == 0:
        return HubFractions(0, (0.0,) * 5, (0.0,) * 3, (0.0,) * 3)
    return HubFractions(
        butterfly_count=count,
        by_total=tuple(c / count for c in total),
        by_i=tuple(c / count for c in per_i),
        by_j=tuple(c / count for c in per_j),
    )


def _pearson(xs, ys) -> float | None:
    """Raw-moment Pearson correlation; None when either variance is zero."""
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    syy = sum(y * y for y in ys)
    sxy = sum(x * y for x, y in zip(xs, ys))
    den_sq = (n * sxx - sx * sx) * (n * syy - sy * sy)
    if den_sq <= 0:
        return None
    return (n * sxy - sx * sy) / math.sqrt(den_sq)


def degree_support_correlation(snap: BipartiteSnapshot) -> tuple[float | None, float | None]:
    """Pearson correlation of vertex degree vs butterfly participation, per side."""
    i_sup, j_sup = butterfly_support(snap)
    i_corr = _pearson([snap.degree(v, "i") for v in i_sup], list(i_sup.values()))
    j_corr = _pearson([snap.degree(v, "j") for v in j_sup], list(j_sup.values()))
    return i_corr, j_corr


@dataclass(slots=True)
class YoungOldCounts:
    young_i: int
    young_j: int
    old_i: int
    old_j: int


def young_old_hubs(snap: BipartiteSnapshot, seen_stamps) -> YoungOldCounts:
    """Splits hubs by when they first appeared.

    seen_stamps is the collection of distinct timestamps observed so far. A
    hub is young if its first appearance falls in the last quarter of the
    ordered stamps, old if in the first quarter; the quarter holds
    ceil(0.25 * n) stamps.
    """
    ordered = sorted(set(seen_stamps))
    if not ordered:
        return YoungOldCounts(0, 0, 0, 0)
    q = math.ceil(0.25 * len(ordered))
    old_stamps = set(ordered[:q])
    young_stamps = set(ordered[len(ordered) - q:])
    counts = {"young_i": 0, "young_j": 0, "old_i": 0, "old_j": 0}
    for side in ("i", "j"):
        for v in hub_set(snap, side):
            first = snap.first_seen(v, side)
            if first in young_stamps:
                counts[f"young_{side}"] += 1
            if first in old_stamps:
                counts[f"old_{side}"] += 1
    return YoungOldCounts(**counts)
