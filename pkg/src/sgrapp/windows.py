"""Adaptive windows over a time-ordered stream.

A window spans a fixed number of distinct timestamps, not a fixed duration,
so it adapts to the arrival rate. The record bringing the first timestamp
beyond the quota closes the window and opens the next one, which makes
consecutive windows share a boundary stamp but never a record: every record
and every timestamp belongs to exactly one window.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .stream import BipartiteSnapshot, StreamRecord, ValidationError

log = logging.getLogger(__name__)

TUMBLING = "tumbling"
LANDMARK = "landmark"


@dataclass(slots=True)
class ClosedWindow:
    """A finished window: half-open stamp interval [w_begin, w_end) and its graph.

    In tumbling mode the snapshot is owned by the receiver; the windower
    starts a fresh one. In landmark mode it is the live growing graph, valid
    to read until the next record is advanced.
    """

    k: int
    w_begin: int
    w_end: int
    snapshot: BipartiteSnapshot
    record_count: int
    unique_stamp_count: int

    # The record that closed the window belongs to the next one and is not
    # ingested until the windower's next call, so a landmark snapshot read
    # right after the close covers exactly [first w_begin, w_end).


class AdaptiveWindower:
    """State machine turning records into per-window graph snapshots.

    stamps_per_window distinct timestamps fill a window. mode "tumbling"
    renews the graph each window; "landmark" keeps one growing graph and only
    the window bookkeeping resets. Out-of-order records raise unless
    tolerate_disorder is set, in which case they are folded into the current
    window without moving its boundaries.
    """

    def __init__(self, stamps_per_window: int, mode: str = TUMBLING,
                 record_stamps: bool = False, tolerate_disorder: bool = False):
        if stamps_per_window < 1:
            raise ValidationError(f"stamps_per_window must be >= 1, got {stamps_per_window}")
        if mode not in (TUMBLING, LANDMARK):
            raise ValidationError(f"unknown window mode {mode!r}")
        self.stamps_per_window = stamps_per_window
        self.mode = mode
        self.record_stamps = record_stamps
        self.tolerate_disorder = tolerate_disorder
        self.k = 0
        self.w_begin: int | None = None
        self.snapshot = BipartiteSnapshot(record_stamps=record_stamps)
        self.record_count = 0
        self._stamps: set[int] = set()
        self._max_tau: int | None = None
        self._pending: StreamRecord | None = None
        self._disorder_warned = False

    def advance(self, r: StreamRecord) -> ClosedWindow | None:
        """Feeds one record; returns the window it closed, if any."""
        self._drain_pending()
        tau = r.tau
        if self._max_tau is not None and tau < self._max_tau:
            if not self.tolerate_disorder:
                raise ValidationError(f"out-of-order record: tau {tau} after {self._max_tau}")
            if not self._disorder_warned:
                log.warning("disordered record (tau %d after %d) folded into window %d; "
                            "further disorder warnings suppressed", tau, self._max_tau, self.k)
                self._disorder_warned = True
            self.snapshot.insert(r.i, r.j, tau)
            self.record_count += 1
            return None
        if self.w_begin is None:
            self.w_begin = tau
        if tau not in self._stamps and len(self._stamps) == self.stamps_per_window:
            closed = self._close(w_end=tau)
            self.w_begin = tau
            self._pending = r
            return closed
        self._ingest(r)
        return None

    def flush(self) -> ClosedWindow | None:
        """Emits the partial final window, or None if nothing is pending."""
        self._drain_pending()
        if self.record_count == 0:
            return None
        closed = self._close(w_end=self._max_tau + 1)
        self.w_begin = None
        return closed

    def _ingest(self, r: StreamRecord) -> None:
        self._stamps.add(r.tau)
        self._max_tau = r.tau
        self.snapshot.insert(r.i, r.j, r.tau)
        self.record_count += 1

    def _drain_pending(self) -> None:
        if self._pending is not None:
            r, self._pending = self._pending, None
            self._ingest(r)

    def _close(self, w_end: int) -> ClosedWindow:
        closed = ClosedWindow(
            k=self.k,
            w_begin=self.w_begin,
            w_end=w_end,
            snapshot=self.snapshot,
            record_count=self.record_count,
            unique_stamp_count=len(self._stamps),
        )
        self.k += 1
        self._stamps = set()
        self.record_count = 0
        if self.mode == TUMBLING:
            self.snapshot = BipartiteSnapshot(record_stamps=self.record_stamps)
        return closed

    def windows(self, records, flush: bool = True):
        """Generator over closed windows for an iterable of records."""
        for r in records:
            closed = self.advance(r)
            if closed is not None:
                yield closed
        if flush:
            tail = self.flush()
            if tail is not None:
                yield tail
