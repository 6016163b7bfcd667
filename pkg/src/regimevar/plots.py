"""Figure rendering for the command-line report paths.

Each CLI command that writes files also renders a PNG next to them: the two
visual pre-test curves, the detection diagnostics, the tested band over the
squared series, the autocorrelation stems, and the campaign boxplots.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_pretest_figure",
    "save_detect_figure",
    "save_test_figure",
    "save_acf_figure",
    "save_table_figure",
    "save_compare_figure",
]


def save_pretest_figure(path, c: np.ndarray, r: np.ndarray, k: int) -> None:
    """Cumulative-squares curve and window statistic, stacked."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6))
    ax1.plot(np.arange(1, c.size + 1), c, lw=0.8)
    ax1.set_xlabel("j")
    ax1.set_ylabel("cumulative sum of squares")
    ax2.plot(np.arange(0, r.size), r, lw=0.8)
    ax2.set_xlabel("j")
    ax2.set_ylabel(f"window sum of squares (k={k})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_detect_figure(path, c: np.ndarray, estimate, tsay=None) -> None:
    """Cumulative curve with the fitted split plus the residual/ratio curves."""
    n = c.size
    panels = 2 if tsay is None else 3
    fig, axes = plt.subplots(panels, 1, figsize=(8, 3 * panels))
    j = np.arange(1, n + 1)
    axes[0].plot(j, c, lw=0.8, label="cumulative squares")
    axes[0].axvline(estimate.l_hat, color="r", ls="--", label=f"split {estimate.l_hat}")
    axes[0].set_ylabel("C")
    axes[0].legend(loc="upper left", fontsize=8)
    ks = np.arange(estimate.k_min, estimate.k_max + 1)
    axes[1].plot(ks, estimate.rss_curve, lw=0.8)
    axes[1].axvline(estimate.l_hat, color="r", ls="--")
    axes[1].set_ylabel("two-line rss")
    axes[1].set_xlabel("candidate split")
    if tsay is not None:
        ls = np.arange(tsay.h, tsay.h + tsay.r_curve.size)
        axes[2].plot(ls, tsay.r_curve, lw=0.8)
        axes[2].axvline(tsay.l_hat, color="g", ls="--", label=f"ratio split {tsay.l_hat}")
        axes[2].set_ylabel("variance ratio")
        axes[2].set_xlabel("candidate split")
        axes[2].legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_test_figure(path, values: np.ndarray, nodes) -> None:
    """Squared series with each tested segment's band and split lines.

    ``nodes`` is an iterable of (start, end, result) with 1-based inclusive
    ranges; results may be None for failed nodes.
    """
    w = np.asarray(values, dtype=np.float64) ** 2
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.plot(np.arange(1, w.size + 1), w, lw=0.5, color="0.4")
    for start, end, res in nodes:
        if res is None:
            continue
        split = start + res.l - 1
        ax.axvline(split, color="r", ls="--", lw=0.9)
        ax.hlines(
            [res.band.lower, res.band.upper],
            start,
            end,
            color="b",
            lw=0.9,
            linestyles="dotted",
        )
    ax.set_xlabel("index")
    ax.set_ylabel("squared observation")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_acf_figure(path, result) -> None:
    """Autocorrelation stems with the white-noise confidence band."""
    fig, ax = plt.subplots(figsize=(8, 3.2))
    lags = np.arange(result.rho.size)
    ax.vlines(lags, 0, result.rho, lw=1.2)
    ax.axhline(0, color="k", lw=0.6)
    b = result.band_halfwidth
    ax.axhline(b, color="b", ls="--", lw=0.8)
    ax.axhline(-b, color="b", ls="--", lw=0.8)
    ax.set_xlabel("lag")
    ax.set_ylabel("autocorrelation")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_table_figure(path, reports) -> None:
    """Per-scenario boxplots of p-values and split estimates."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    labels = [r.scenario for r in reports]
    ax1.boxplot([r.p_values for r in reports], tick_labels=labels)
    ax1.axhline(reports[0].alpha, color="r", ls="--", lw=0.8)
    ax1.set_ylabel("p-value")
    ax1.tick_params(axis="x", labelrotation=20, labelsize=7)
    ax2.boxplot([r.l_hats for r in reports], tick_labels=labels)
    ax2.set_ylabel("estimated split")
    ax2.tick_params(axis="x", labelrotation=20, labelsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_compare_figure(path, comparisons) -> None:
    """Side-by-side boxplots of the two detectors per scenario."""
    n = len(comparisons)
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.6), squeeze=False)
    for ax, comp in zip(axes[0], comparisons):
        ax.boxplot([comp.l_tsay, comp.l_hat], tick_labels=["ratio", "regression"])
        ax.axhline(comp.true_break, color="r", ls="--", lw=0.8)
        ax.set_title(comp.scenario, fontsize=8)
    axes[0][0].set_ylabel("estimated split")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
