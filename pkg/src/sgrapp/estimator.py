"""Windowed butterfly estimation with a power-law inter-window term.

The cumulative estimate after window k adds the window's exact count and, for
k >= 1, e_total**alpha, where e_total is the number of distinct edges seen
since the stream began. The supervised variant nudges alpha by a fixed step
whenever the previous window's stored relative error leaves the tolerance
band, and freezes alpha once supervision runs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exact import count_butterflies
from .stream import ValidationError
from .windows import ClosedWindow

DEFAULT_TOLERANCE = 0.05
DEFAULT_STEP = 0.005
# Exponent that has worked well for rating streams; override per dataset.
DEFAULT_ALPHA = 1.4

_SHIFT = 32


class SequencingError(RuntimeError):
    """Raised when a window arrives out of order at the estimator."""


@dataclass(slots=True)
class StepResult:
    """Outcome of one estimator step, for metrics and inspection."""

    estimate: float
    window_count: int
    interwindow_term: float
    alpha: float
    e_total: int


@dataclass
class EstimatorState:
    """Mutable cross-window state shared by the plain and supervised steps."""

    alpha: float = DEFAULT_ALPHA
    tolerance: float = DEFAULT_TOLERANCE
    step: float = DEFAULT_STEP
    b_hat: float = 0.0
    e_total: int = 0
    k: int = 0
    prev_error: float | None = None
    supervised_remaining: int = 0
    _seen_edges: set[int] = field(default_factory=set, repr=False)

    def observe_edge(self, i: int, j: int) -> bool:
        """Counts edge (i, j) into e_total unless it was already seen."""
        key = (i << _SHIFT) | j
        if key in self._seen_edges:
            return False
        self._seen_edges.add(key)
        self.e_total += 1
        return True


def sgrapp_step(state: EstimatorState, window: ClosedWindow) -> StepResult:
    """Folds one closed window into the estimate.

    state.e_total must already include the window's edges; the closing record
    of the next window must not be observed yet.
    """
    if window.k != state.k:
        raise SequencingError(f"window {window.k} arrived, estimator expects {state.k}")
    window_count = count_butterflies(window.snapshot)
    inter = float(state.e_total) ** state.alpha if window.k != 0 else 0.0
    state.b_hat += window_count + inter
    state.k += 1
    return StepResult(state.b_hat, window_count, inter, state.alpha, state.e_total)


def sgrapp_x_step(state: EstimatorState, window: ClosedWindow, truth: float | None = None) -> StepResult:
    """Supervised step: truth is the exact cumulative count for this window.

    Pass truth only for windows inside the supervised prefix. While
    supervised, alpha is adjusted before estimating using the error stored at
    the previous supervised window; afterwards the stored error is updated.
    With truth never given this is arithmetic-identical to sgrapp_step.
    """
    if truth is not None and state.prev_error is not None:
        if state.prev_error > state.tolerance:
            state.alpha -= state.step
        elif state.prev_error < -state.tolerance:
            state.alpha += state.step
    result = sgrapp_step(state, window)
    if truth is not None:
        if truth <= 0:
            raise ValidationError("supervision needs a positive ground-truth count")
        state.prev_error = (result.estimate - truth) / truth
        if state.supervised_remaining > 0:
            state.supervised_remaining -= 1
    return result


@dataclass(slots=True)
class ErrorBounds:
    """A (lower, upper) interval, reported as computed; it may be negative."""

    lower: float
    upper: float


def error_bounds(cumulative_edges, window_edge_count: int, window_i_vertices: int,
                 alpha: float) -> ErrorBounds:
    """Bounds on the accumulated estimation error after window k >= 1.

    cumulative_edges lists the distinct-edge totals at the ends of windows
    1..k. The interval is between the power-law mass minus the worst-case
    pairing C(|V_i|,2) and that mass minus the window's edges plus 2|V_i|.
    """
    cumulative_edges = list(cumulative_edges)
    if not cumulative_edges:
        raise ValidationError("error bounds need at least one completed window beyond the first")
    if any(e <= 0 for e in cumulative_edges):
        raise ValidationError("cumulative edge counts must be positive")
    mass = sum(float(e) ** alpha for e in cumulative_edges)
    lower = mass - math.comb(window_i_vertices, 2)
    upper = mass - window_edge_count + 2 * window_i_vertices
    return ErrorBounds(lower, upper)


def interwindow_bounds(window_edge_count: int, window_i_vertices: int) -> ErrorBounds:
    """Range of butterflies a window can add across its own boundary."""
    return ErrorBounds(
        lower=window_edge_count - 2 * window_i_vertices,
        upper=math.comb(window_i_vertices, 2),
    )
