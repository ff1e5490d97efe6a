"""Command-line front end: count, run, generate, analyze, truth."""

from __future__ import annotations

import argparse
import sys
import time

from . import analysis, harness
from .exact import brute_force_count, butterfly_support, count_butterflies
from .generate import BAConfig, assign_timestamps, generate_ba_unipartite, project_bipartite
from .stream import EdgeFormat, ValidationError, load_stream, snapshot_from_edges, write_stream
from .windows import LANDMARK, AdaptiveWindower


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default="i j tau",
                        help="column layout of edge files, e.g. 'i j tau' or 'tau,i,j' "
                             "(a comma or semicolon sets the delimiter; '_' skips a column)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed where applicable")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sgrapp",
                                     description="Butterfly counting and estimation "
                                                 "over bipartite graph streams")
    common = _common_options()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-exact", parents=[common], help="exact butterfly count of a whole file")
    p.add_argument("edgefile")
    p.add_argument("--support", metavar="CSV", help="also write per-vertex butterfly counts")
    p.add_argument("--brute-force", action="store_true", help="cross-check with the quadratic counter")

    p = sub.add_parser("run", parents=[common], help="windowed estimation over a stream")
    p.add_argument("edgefile")
    p.add_argument("--algo", required=True, choices=harness.ALGORITHMS)
    p.add_argument("--nt-per-window", required=True, type=int, metavar="N",
                   help="distinct timestamps per window")
    p.add_argument("--alpha", type=float, default=harness.DEFAULT_ALPHA)
    p.add_argument("--tolerance", type=float, default=harness.DEFAULT_TOLERANCE,
                   help="relative-error band before alpha is adjusted (sgrapp-x)")
    p.add_argument("--step", type=float, default=harness.DEFAULT_STEP,
                   help="alpha adjustment per out-of-band window (sgrapp-x)")
    p.add_argument("--truth", metavar="CSV", help="k,B_k file for supervision and error columns")
    p.add_argument("--supervised-frac", type=float, default=1.0,
                   help="fraction of truth windows used for supervision (sgrapp-x)")
    p.add_argument("--reservoir", type=int, metavar="M", help="reservoir capacity (fleet)")
    p.add_argument("--sample-p", type=float, default=1.0, help="initial sampling probability (fleet)")
    p.add_argument("--gamma", type=float, default=harness.DEFAULT_GAMMA,
                   help="subsample survival probability (fleet)")
    p.add_argument("--tolerate-disorder", action="store_true",
                   help="fold out-of-order records into the current window instead of failing")

    p = sub.add_parser("generate", parents=[common], help="synthesize a bipartite stream")
    p.add_argument("--n", required=True, type=int, help="total vertices grown")
    p.add_argument("--m", required=True, type=int, help="out-edges per new vertex")
    p.add_argument("--m0", type=int, help="seed clique size (default m)")
    p.add_argument("--stamps", default="random",
                   help="'random[:LO:HI]' or 'real:FILE' to reuse a real stream's stamps")

    p = sub.add_parser("analyze", parents=[common], help="characterize a stream prefix")
    p.add_argument("edgefile")
    p.add_argument("--metric", required=True,
                   choices=["densification", "fit", "interarrival", "hubs", "correlation", "younghubs"])
    p.add_argument("--prefix", type=int, default=analysis.DENSIFICATION_PREFIX,
                   help="number of records analyzed")
    p.add_argument("--nt-per-window", type=int, metavar="N",
                   help="distinct timestamps per expansion (younghubs)")

    p = sub.add_parser("truth", parents=[common], help="exact cumulative counts per window")
    p.add_argument("edgefile")
    p.add_argument("--nt-per-window", required=True, type=int, metavar="N")
    p.add_argument("--prefix", type=int, help="record limit")

    return parser


def _open_out(args):
    if args.out == "-":
        return sys.stdout, False
    return open(args.out, "w", newline=""), True


def _write_rows(args, header, rows):
    fh, own = _open_out(args)
    try:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")
    finally:
        if own:
            fh.close()


def _cmd_count_exact(args) -> int:
    source = load_stream(args.edgefile, EdgeFormat.from_string(args.format))
    snap = snapshot_from_edges((r.i, r.j) for r in source)
    t0 = time.perf_counter()
    count = count_butterflies(snap)
    elapsed = time.perf_counter() - t0
    print(f"edges={snap.edge_count} butterflies={count} seconds={elapsed:.3f}")
    if args.brute_force:
        check = brute_force_count(snap)
        print(f"brute_force={check} match={check == count}")
    if args.support:
        i_sup, j_sup = butterfly_support(snap)
        with open(args.support, "w", newline="") as fh:
            fh.write("side,vertex,degree,support\n")
            for side, table in (("i", i_sup), ("j", j_sup)):
                for v in sorted(table):
                    fh.write(f"{side},{v},{snap.degree(v, side)},{table[v]}\n")
    return 0


def _cmd_run(args) -> int:
    source = load_stream(args.edgefile, EdgeFormat.from_string(args.format))
    truth = harness.read_truth_csv(args.truth) if args.truth else None
    cfg = harness.RunConfig(
        algo=args.algo, stamps_per_window=args.nt_per_window, alpha=args.alpha,
        tolerance=args.tolerance, step=args.step, truth=truth,
        supervised_fraction=args.supervised_frac, reservoir_capacity=args.reservoir,
        sample_p=args.sample_p, gamma=args.gamma, seed=args.seed,
        tolerate_disorder=args.tolerate_disorder,
    )
    metrics, summary = harness.run_pipeline(source.records, cfg)
    fh, own = _open_out(args)
    try:
        harness.write_metrics_csv(metrics, fh, echo=summary)
    finally:
        if own:
            fh.close()
    print(" ".join(f"{k}={harness._fmt(v) if isinstance(v, float) else v}"
                   for k, v in summary.items()), file=sys.stderr)
    return 0


def _cmd_generate(args) -> int:
    cfg = BAConfig(n_total=args.n, m=args.m, m0=args.m0, seed=args.seed)
    edges = project_bipartite(generate_ba_unipartite(cfg))
    mode = args.stamps
    if mode.startswith("real:"):
        donor = load_stream(mode[len("real:"):], EdgeFormat.from_string(args.format))
        source = assign_timestamps(edges, "real", stamps=[r.tau for r in donor], seed=args.seed)
    else:
        lo, hi = 0, None
        if mode.startswith("random:"):
            _, lo, hi = mode.split(":")
            lo, hi = int(lo), int(hi)
        elif mode != "random":
            raise ValidationError(f"bad stamp mode {mode!r}")
        source = assign_timestamps(edges, "random", lo=lo, hi=hi, seed=args.seed)
    if args.out == "-":
        for r in source:
            sys.stdout.write(f"{r.i} {r.j} {r.tau}\n")
    else:
        write_stream(source, args.out)
    print(f"vertices={args.n} edges={len(source)} out={args.out}", file=sys.stderr)
    return 0


def _cmd_analyze(args) -> int:
    source = load_stream(args.edgefile, EdgeFormat.from_string(args.format))
    records = source.records[:args.prefix] if args.prefix else source.records
    metric = args.metric
    if metric in ("densification", "fit"):
        series = analysis.densification_series(records, eager_limit=len(records))
        if metric == "densification":
            _write_rows(args, ["t", "B"], series)
        else:
            report = analysis.fit_densification(series)
            rows = [(f.degree, f"{f.rmse:.6g}", f"{f.r2:.6g}", int(f.non_decreasing),
                     int(f.degree == report.best_degree)) for f in report.fits]
            _write_rows(args, ["degree", "rmse", "r2", "non_decreasing", "best"], rows)
        return 0
    if metric == "younghubs":
        if not args.nt_per_window:
            raise ValidationError("--metric younghubs needs --nt-per-window")
        windower = AdaptiveWindower(args.nt_per_window, mode=LANDMARK)
        seen_stamps: set[int] = set()
        rows = []
        for r in records:
            closed = windower.advance(r)
            if closed is not None:
                c = analysis.young_old_hubs(closed.snapshot, seen_stamps)
                rows.append((closed.k, c.young_i, c.young_j, c.old_i, c.old_j))
            seen_stamps.add(r.tau)
        tail = windower.flush()
        if tail is not None:
            c = analysis.young_old_hubs(tail.snapshot, seen_stamps)
            rows.append((tail.k, c.young_i, c.young_j, c.old_i, c.old_j))
        _write_rows(args, ["k", "young_i", "young_j", "old_i", "old_j"], rows)
        return 0

    snap = snapshot_from_edges([(r.i, r.j) for r in records],
                               stamps=[r.tau for r in records], record_stamps=True)
    if metric == "interarrival":
        hist = analysis.interarrival_distribution(snap)
        _write_rows(args, ["gap", "count"], sorted(hist.items()))
    elif metric == "hubs":
        rows = []
        for side in ("i", "j"):
            hubs = analysis.hub_set(snap, side)
            rows.append(("hub_count", side, len(hubs)))
            rows.append(("hub_connection_fraction", side, f"{analysis.hub_connection_fraction(snap, side):.6g}"))
        frac = analysis.butterfly_hub_fractions(snap)
        rows.append(("butterflies", "", frac.butterfly_count))
        for h, value in enumerate(frac.by_total):
            rows.append(("fraction_hubs", h, f"{value:.6g}"))
        for h, value in enumerate(frac.by_i):
            rows.append(("fraction_i_hubs", h, f"{value:.6g}"))
        for h, value in enumerate(frac.by_j):
            rows.append(("fraction_j_hubs", h, f"{value:.6g}"))
        _write_rows(args, ["stat", "key", "value"], rows)
    else:  # correlation
        i_corr, j_corr = analysis.degree_support_correlation(snap)
        fmt = lambda c: "" if c is None else f"{c:.6g}"
        _write_rows(args, ["side", "pearson"], [("i", fmt(i_corr)), ("j", fmt(j_corr))])
    return 0


def _cmd_truth(args) -> int:
    source = load_stream(args.edgefile, EdgeFormat.from_string(args.format))
    series = harness.ground_truth_series(source.records, args.nt_per_window, args.prefix)
    fh, own = _open_out(args)
    try:
        harness.write_truth_csv(series, fh)
    finally:
        if own:
            fh.close()
    return 0


_COMMANDS = {
    "count-exact": _cmd_count_exact,
    "run": _cmd_run,
    "generate": _cmd_generate,
    "analyze": _cmd_analyze,
    "truth": _cmd_truth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
