"""End-to-end runs: windowed estimation with accuracy and timing metrics."""

from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass

from .estimator import (DEFAULT_ALPHA, DEFAULT_STEP, DEFAULT_TOLERANCE,
                        EstimatorState, sgrapp_step, sgrapp_x_step)
from .exact import count_butterflies
from .fleet import DEFAULT_GAMMA, FleetState, fleet_estimate, fleet_process
from .stream import ValidationError
from .windows import LANDMARK, AdaptiveWindower

log = logging.getLogger(__name__)

ALGORITHMS = ("sgrapp", "sgrapp-x", "fleet1", "fleet2", "fleet3")

CSV_COLUMNS = ("k", "w_begin", "w_end", "records", "B_G_window", "B_hat", "alpha",
               "signed_rel_err", "latency_us", "window_throughput", "total_throughput")

# Default reservoir: 1% of the stream's records.
RESERVOIR_FRACTION = 0.01

_SHIFT = 32


@dataclass(slots=True)
class WindowMetrics:
    """One CSV row: counts, estimate, and wall-clock cost of a window."""

    k: int
    w_begin: int
    w_end: int
    records: int
    b_g_window: int | None
    b_hat: float
    alpha: float | None
    signed_rel_err: float | None
    latency_us: float
    window_throughput: float
    total_throughput: float


def ground_truth_series(records, stamps_per_window: int,
                        prefix_limit: int | None = None) -> list[tuple[int, int]]:
    """Exact cumulative butterfly counts at adaptive-window boundaries.

    The graph grows over the whole prefix and is never retired, so B_k is the
    count over everything seen up to the end of window k. prefix_limit bounds
    the records processed.
    """
    windower = AdaptiveWindower(stamps_per_window, mode=LANDMARK)
    series = []
    for idx, r in enumerate(records):
        if prefix_limit is not None and idx >= prefix_limit:
            break
        closed = windower.advance(r)
        if closed is not None:
            series.append((closed.k, count_butterflies(closed.snapshot)))
    tail = windower.flush()
    if tail is not None:
        series.append((tail.k, count_butterflies(tail.snapshot)))
    return series


def mape(truths, estimates) -> float:
    """Mean absolute relative error over aligned windows.

    Windows with a zero truth value are excluded (logged); scaling both
    inputs by a common positive factor leaves the result unchanged.
    """
    errors = []
    skipped = 0
    for b, b_hat in zip(truths, estimates):
        if b == 0:
            skipped += 1
            continue
        errors.append(abs(b - b_hat) / b)
    if skipped:
        log.warning("MAPE skipped %d window(s) with zero ground truth", skipped)
    if not errors:
        raise ValidationError("MAPE undefined: no window has a positive ground truth")
    return sum(errors) / len(errors)


@dataclass
class RunConfig:
    """Everything a pipeline run needs besides the records themselves."""

    algo: str
    stamps_per_window: int
    alpha: float = DEFAULT_ALPHA
    tolerance: float = DEFAULT_TOLERANCE
    step: float = DEFAULT_STEP
    truth: dict[int, float] | None = None
    supervised_fraction: float = 1.0
    reservoir_capacity: int | None = None
    sample_p: float = 1.0
    gamma: float = DEFAULT_GAMMA
    seed: int = 0
    tolerate_disorder: bool = False

    def echo(self) -> dict:
        out = {"algo": self.algo, "stamps_per_window": self.stamps_per_window, "seed": self.seed}
        if self.algo.startswith("sgrapp"):
            out["alpha"] = self.alpha
            if self.algo == "sgrapp-x":
                out["tolerance"] = self.tolerance
                out["step"] = self.step
                out["supervised_fraction"] = self.supervised_fraction
        else:
            out["reservoir_capacity"] = self.reservoir_capacity
            out["sample_p"] = self.sample_p
            out["gamma"] = self.gamma
        return out


def run_pipeline(records, cfg: RunConfig) -> tuple[list[WindowMetrics], dict]:
    """Streams records through the chosen algorithm, one metrics row per window.

    records must already be in memory: timing starts when a window's first
    record is ingested and stops when its estimate is out, so file I/O never
    pollutes latency or throughput. Estimates for the fleet variants are read
    at window boundaries without touching their state.
    """
    if cfg.algo not in ALGORITHMS:
        raise ValidationError(f"unknown algorithm {cfg.algo!r}; choose from {ALGORITHMS}")
    supervised = _supervised_windows(cfg)
    windower = AdaptiveWindower(cfg.stamps_per_window, tolerate_disorder=cfg.tolerate_disorder)

    state = fstate = None
    if cfg.algo.startswith("sgrapp"):
        state = EstimatorState(alpha=cfg.alpha, tolerance=cfg.tolerance, step=cfg.step,
                               supervised_remaining=len(supervised))
    else:
        capacity = cfg.reservoir_capacity
        if capacity is None:
            capacity = max(1, round(RESERVOIR_FRACTION * len(records)))
        fstate = FleetState(capacity=capacity, variant=int(cfg.algo[-1]),
                            p=cfg.sample_p, gamma=cfg.gamma, seed=cfg.seed)
        seen: set[int] = set()

    metrics: list[WindowMetrics] = []
    cum_records = 0
    cum_seconds = 0.0
    perf = time.perf_counter

    def close_out(window, t_end_setter):
        nonlocal cum_records, cum_seconds
        if state is not None:
            if cfg.algo == "sgrapp-x":
                result = sgrapp_x_step(state, window, supervised.get(window.k))
            else:
                result = sgrapp_step(state, window)
            b_hat, b_g, alpha = result.estimate, result.window_count, result.alpha
        else:
            b_hat, b_g, alpha = fleet_estimate(fstate), None, None
        t_end = perf()
        latency = max(t_end - t_end_setter, 1e-9)
        cum_records += window.record_count
        cum_seconds += latency
        rel = None
        if cfg.truth is not None:
            truth_k = cfg.truth.get(window.k)
            if truth_k:
                rel = (b_hat - truth_k) / truth_k
        metrics.append(WindowMetrics(
            k=window.k, w_begin=window.w_begin, w_end=window.w_end,
            records=window.record_count, b_g_window=b_g, b_hat=b_hat, alpha=alpha,
            signed_rel_err=rel, latency_us=latency * 1e6,
            window_throughput=window.record_count / latency,
            total_throughput=cum_records / cum_seconds,
        ))
        return t_end

    t_start = None
    if state is not None:
        observe = state.observe_edge
        advance = windower.advance
        for r in records:
            if t_start is None:
                t_start = perf()
            window = advance(r)
            if window is not None:
                t_start = close_out(window, t_start)
            observe(r.i, r.j)
    else:
        advance = windower.advance
        for r in records:
            if t_start is None:
                t_start = perf()
            window = advance(r)
            if window is not None:
                t_start = close_out(window, t_start)
            key = (r.i << _SHIFT) | r.j
            if key not in seen:  # fleet consumes each distinct edge once
                seen.add(key)
                fleet_process(fstate, r.i, r.j)
    tail = windower.flush()
    if tail is not None:
        close_out(tail, t_start if t_start is not None else perf())

    summary = dict(cfg.echo())
    summary["windows"] = len(metrics)
    summary["records"] = cum_records
    summary["seconds"] = cum_seconds
    summary["total_throughput"] = cum_records / cum_seconds if cum_seconds else 0.0
    summary["final_estimate"] = metrics[-1].b_hat if metrics else 0.0
    rels = [m.signed_rel_err for m in metrics if m.signed_rel_err is not None]
    if rels:
        summary["mape"] = sum(abs(e) for e in rels) / len(rels)
    return metrics, summary


def _supervised_windows(cfg: RunConfig) -> dict[int, float]:
    """First floor(fraction * n) truth windows, minus zero-truth ones."""
    if cfg.algo != "sgrapp-x" or not cfg.truth:
        return {}
    ks = sorted(cfg.truth)
    take = math.floor(cfg.supervised_fraction * len(ks))
    chosen = {}
    for k in ks[:take]:
        if cfg.truth[k] > 0:
            chosen[k] = cfg.truth[k]
        else:
            log.warning("window %d has zero ground truth; skipping its supervision", k)
    return chosen


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_metrics_csv(metrics, out, echo: dict | None = None) -> None:
    """Writes the per-window table; out is a path or a file-like object."""
    own = isinstance(out, str)
    fh = open(out, "w", newline="") if own else out
    try:
        if echo:
            fh.write("# " + " ".join(f"{k}={v}" for k, v in echo.items()) + "\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for m in metrics:
            writer.writerow([
                m.k, m.w_begin, m.w_end, m.records, _fmt(m.b_g_window), _fmt(m.b_hat),
                _fmt(m.alpha), _fmt(m.signed_rel_err), _fmt(m.latency_us),
                _fmt(m.window_throughput), _fmt(m.total_throughput),
            ])
    finally:
        if own:
            fh.close()


def write_truth_csv(series, out) -> None:
    own = isinstance(out, str)
    fh = open(out, "w", newline="") if own else out
    try:
        writer = csv.writer(fh)
        writer.writerow(["k", "B_k"])
        for k, b in series:
            writer.writerow([k, b])
    finally:
        if own:
            fh.close()


def read_truth_csv(path: str) -> dict[int, float]:
    """Loads a k,B_k file into a window -> truth map; the header is optional."""
    truth: dict[int, float] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "k":
                continue
            truth[int(row[0])] = float(row[1])
    return truth
