"""Command-line interface: pretest, detect, test, acf and simulate.

Every command reads a delimited text series (or runs a synthetic campaign),
prints or writes a structured-text report, and — when writing to files —
renders a matplotlib figure alongside the output.

Exit codes: 0 success (and H0 accepted for ``test``), 1 H0 rejected at the
root (``test`` only), 2 usage or data errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .changepoint import default_trim, estimate_changepoint, tsay_changepoint
from .dataio import load_series, write_delimited, write_report
from .regime import recursive_segmentation, regime_variance_test
from .simulate import (
    COMPARISON_SCENARIOS,
    RngSpec,
    compare_estimators,
    run_table1,
    run_table2,
)
from .stats import acf as compute_acf
from .stats import cumulative_squares, window_second_moment

# minimal trimming for the estimator comparison; the ratio scan needs at
# least one pre-split and one post-split observation
COMPARE_TRIM_DEFAULT = 2


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="delimited text file with the series")
    p.add_argument("--column", type=int, default=0, help="0-based column index (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regimevar",
        description="Variance-regime change-point detection and testing",
    )
    parser.add_argument("--version", action="version", version=f"regimevar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pretest", help="write the two visual pre-test curves")
    _add_input_args(p)
    p.add_argument("--window", type=int, default=100, help="window width k (default 100)")
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    p = sub.add_parser("detect", help="estimate the critical split point")
    _add_input_args(p)
    p.add_argument("--h", type=int, default=None, help="variance-ratio trimming margin")
    p.add_argument("--rss-curve", action="store_true", help="include the residual curve rows")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    p = sub.add_parser("test", help="run the regime-variance test")
    _add_input_args(p)
    p.add_argument("--alpha", type=float, default=0.05, help="confidence level (default 0.05)")
    p.add_argument("--l", type=int, default=None, help="force the split index")
    p.add_argument("--recursive", action="store_true", help="recurse on rejected segments")
    p.add_argument("--min-len", type=int, default=10, help="minimum segment length (default 10)")
    p.add_argument("--max-depth", type=int, default=5, help="recursion depth cap (default 5)")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    p = sub.add_parser("acf", help="write the autocorrelation function")
    _add_input_args(p)
    p.add_argument("--max-lag", type=int, default=40, help="largest lag (default 40)")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    p = sub.add_parser("simulate", help="run a Monte Carlo validation campaign")
    p.add_argument("table", choices=["table1", "table2", "compare"])
    p.add_argument("--trials", type=int, default=1000, help="trajectories per case (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    p.add_argument("--alpha", type=float, default=0.05, help="confidence level (default 0.05)")
    p.add_argument(
        "--h",
        type=int,
        default=COMPARE_TRIM_DEFAULT,
        help=f"trimming margin for the compare campaign (default {COMPARE_TRIM_DEFAULT})",
    )
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def cmd_pretest(args) -> int:
    x = load_series(args.input, args.column)
    c = cumulative_squares(x)
    r = window_second_moment(x, args.window)
    prefix = Path(args.out)
    c_path = prefix.parent / f"{prefix.name}_cumulative.csv"
    r_path = prefix.parent / f"{prefix.name}_window.csv"
    write_delimited(c_path, [np.arange(1, c.n + 1), c.c])
    write_delimited(r_path, [np.arange(0, r.r.size), r.r])
    if not args.no_figures:
        from .plots import save_pretest_figure

        save_pretest_figure(prefix.parent / f"{prefix.name}_pretest.png", c.c, r.r, r.k)
    return 0


def cmd_detect(args) -> int:
    x = load_series(args.input, args.column)
    est = estimate_changepoint(x)
    h = args.h if args.h is not None else default_trim(x.size)
    tsay = tsay_changepoint(x, h=h)
    scalars = [
        ("n", x.size),
        ("l_hat", est.l_hat),
        ("k_min", est.k_min),
        ("k_max", est.k_max),
        ("rss_min", float(est.rss_curve.min())),
        ("tsay_l", tsay.l_hat),
        ("tsay_r", tsay.r_hat),
        ("tsay_h", tsay.h),
    ]
    rows = []
    if args.rss_curve:
        rows = [
            ("rss", k, v)
            for k, v in zip(range(est.k_min, est.k_max + 1), est.rss_curve)
        ]
    text = write_report(args.out, "detect", scalars, rows)
    if args.out is None:
        sys.stdout.write(text)
    elif not args.no_figures:
        from .plots import save_detect_figure

        save_detect_figure(_figure_path(args.out), cumulative_squares(x).c, est, tsay)
    return 0


def cmd_test(args) -> int:
    x = load_series(args.input, args.column)
    if args.recursive:
        tree = recursive_segmentation(
            x, alpha=args.alpha, min_len=args.min_len, max_depth=args.max_depth
        )
        nodes = list(tree.walk())
        scalars = [
            ("n", x.size),
            ("alpha", args.alpha),
            ("nodes", len(nodes)),
            ("leaves", sum(1 for nd in nodes if nd.is_leaf)),
            ("root_decision", tree.result.decision if tree.result else "error"),
        ]
        rows = []
        for i, nd in enumerate(nodes):
            if nd.result is None:
                rows.append(("node_error", i, nd.start, nd.end, *nd.error.split()))
            else:
                res = nd.result
                rows.append(
                    (
                        "node",
                        i,
                        nd.start,
                        nd.end,
                        res.l,
                        res.b_count,
                        res.m_test,
                        res.p_value,
                        res.decision,
                    )
                )
        text = write_report(args.out, "test", scalars, rows)
        rejected = tree.result is not None and tree.result.decision == "reject_H0"
        plot_nodes = [
            (nd.start, nd.end, nd.result) for nd in nodes if not nd.is_leaf or nd is tree
        ]
    else:
        res = regime_variance_test(x, alpha=args.alpha, l=args.l)
        scalars = [
            ("n", x.size),
            ("alpha", args.alpha),
            ("l", res.l),
            ("reference", res.reference_segment),
            ("band_lower", res.band.lower),
            ("band_upper", res.band.upper),
            ("b_count", res.b_count),
            ("m_test", res.m_test),
            ("p_value", res.p_value),
            ("decision", res.decision),
        ]
        rows = [("warning", "-", *w.split()) for w in res.warnings]
        text = write_report(args.out, "test", scalars, rows)
        rejected = res.decision == "reject_H0"
        plot_nodes = [(1, x.size, res)]
    if args.out is None:
        sys.stdout.write(text)
    elif not args.no_figures:
        from .plots import save_test_figure

        save_test_figure(_figure_path(args.out), x, plot_nodes)
    return 1 if rejected else 0


def cmd_acf(args) -> int:
    x = load_series(args.input, args.column)
    result = compute_acf(x, args.max_lag)
    scalars = [
        ("n", x.size),
        ("max_lag", result.max_lag),
        ("band_halfwidth", result.band_halfwidth),
    ]
    rows = [("rho", lag, v) for lag, v in enumerate(result.rho)]
    text = write_report(args.out, "acf", scalars, rows)
    if args.out is None:
        sys.stdout.write(text)
    elif not args.no_figures:
        from .plots import save_acf_figure

        save_acf_figure(_figure_path(args.out), result)
    return 0


def cmd_simulate(args) -> int:
    rng_spec = RngSpec(args.seed)
    if args.table == "compare":
        comparisons = [
            compare_estimators(s, args.trials, args.h, rng_spec, args.workers)
            for s in COMPARISON_SCENARIOS
        ]
        scalars = [
            ("table", "compare"),
            ("trials", args.trials),
            ("seed", args.seed),
            ("h", args.h),
            ("scenarios", len(comparisons)),
        ]
        rows = []
        for i, comp in enumerate(comparisons):
            rows.append(("scenario", i, comp.scenario, comp.true_break))
            rows.extend(
                ("estimate", i, t, int(a), int(b))
                for t, (a, b) in enumerate(zip(comp.l_hat, comp.l_tsay))
            )
        text = write_report(args.out, "simulate", scalars, rows)
        if args.out is None:
            sys.stdout.write(text)
        elif not args.no_figures:
            from .plots import save_compare_figure

            save_compare_figure(_figure_path(args.out), comparisons)
        return 0

    runner = run_table1 if args.table == "table1" else run_table2
    reports = runner(args.trials, args.alpha, rng_spec, args.workers)
    scalars = [
        ("table", args.table),
        ("trials", args.trials),
        ("seed", args.seed),
        ("alpha", args.alpha),
        ("scenarios", len(reports)),
    ]
    rows = []
    for i, rep in enumerate(reports):
        rows.append(("scenario", i, rep.scenario, rep.l_test))
        rows.append(("accept_count", i, rep.accept_count))
        rows.append(("reject_count", i, rep.reject_count))
        rows.append(("mean_p_accept", i, rep.mean_p_accept))
        rows.append(("mean_p_reject", i, rep.mean_p_reject))
        rows.append(("mean_l_hat", i, rep.mean_l_hat))
        rows.extend(("p_value", i, t, v) for t, v in enumerate(rep.p_values))
        rows.extend(("l_hat", i, t, int(v)) for t, v in enumerate(rep.l_hats))
    text = write_report(args.out, "simulate", scalars, rows)
    if args.out is None:
        sys.stdout.write(text)
    elif not args.no_figures:
        from .plots import save_table_figure

        save_table_figure(_figure_path(args.out), reports)
    return 0


_COMMANDS = {
    "pretest": cmd_pretest,
    "detect": cmd_detect,
    "test": cmd_test,
    "acf": cmd_acf,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"regimevar: error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
