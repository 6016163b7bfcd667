"""Critical-point estimators for a single variance break.

Two detectors live here:

* the segmented-regression estimator: fit one least-squares line to the
  cumulative-squares curve left of a candidate split and another to the
  right, and take the split minimizing the combined residual sum of squares
  (plus an O(n^2) from-scratch twin used as a cross-checking oracle);
* the variance-ratio baseline: the normalized ratio of post-split to
  pre-split sums of squares, scanned over a trimmed range.

The fast estimator evaluates every candidate in O(1) from prefix sums, so a
full scan is O(n).  Before building the prefix sums the curve is reduced by
the chord through its endpoints; least-squares residuals are unchanged by
subtracting an affine function, while the reduced values stay small enough
that the textbook computational formulas do not cancel catastrophically even
for 1e6-point series.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .stats import CumulativeSquares, as_values, cumulative_squares

__all__ = [
    "ZeroDenominatorError",
    "SegmentFit",
    "ChangePointEstimate",
    "TsayEstimate",
    "segment_fit",
    "estimate_changepoint",
    "brute_force_changepoint",
    "tsay_variance_ratio",
    "tsay_changepoint",
    "default_trim",
]

# Residual sums below RSS_TOL times the segment's centered variation are
# treated as exact zeros: a segment whose curve is a straight line up to
# float rounding must report rss == 0, deterministically, in both the fast
# and the brute-force scan.
RSS_TOL = 1e-9


class ZeroDenominatorError(ValueError):
    """Raised when a variance ratio has an all-zero pre-split segment."""


@dataclass(frozen=True)
class SegmentFit:
    """Two-line least-squares fit of the cumulative curve split at ``k``.

    ``a1, b1`` are slope and intercept over points j = 1..k, ``a2, b2`` over
    j = k+1..n.  ``rss`` is the total squared distance over both segments;
    it is exactly 0 (after snapping at 1e-9 of the segment variation) when
    the data lie on two lines meeting at ``k``.
    """

    k: int
    a1: float
    b1: float
    a2: float
    b2: float
    rss_left: float
    rss_right: float

    @property
    def rss(self) -> float:
        return self.rss_left + self.rss_right


@dataclass(frozen=True)
class ChangePointEstimate:
    """Estimated split index with the per-candidate residual curve.

    ``rss_curve[i]`` is the two-line residual sum for candidate
    ``k = k_min + i``; ``l_hat`` attains its minimum, smallest index on ties.
    """

    l_hat: int
    rss_curve: np.ndarray
    k_min: int
    k_max: int


@dataclass(frozen=True)
class TsayEstimate:
    """Variance-ratio scan result.

    ``r_curve[i]`` is the ratio at split ``l = h + i`` (NaN where the
    pre-split sum of squares was zero); ``r_hat = max(1/r_min, r_max) >= 1``
    and ``l_hat`` is the split where it occurs.
    """

    l_hat: int
    r_hat: float
    r_curve: np.ndarray
    h: int


class _FitTable:
    """Prefix-sum tables giving any segment's line fit in O(1).

    Operates on the chord-reduced curve ``d_j = c_j - (a0*j + b0)`` and adds
    the chord back into the reported coefficients.  The raw centered
    variation per segment is kept as the scale for the zero-snap.
    """

    def __init__(self, c: np.ndarray) -> None:
        n = c.size
        self.n = n
        self.a0 = (c[-1] - c[0]) / (n - 1) if n > 1 else 0.0
        self.b0 = c[0] - self.a0
        j = np.arange(1, n + 1, dtype=np.float64)
        d = c - (self.a0 * j + self.b0)
        z = np.zeros(1)
        self.p_d = np.concatenate((z, np.cumsum(d)))
        self.p_jd = np.concatenate((z, np.cumsum(j * d)))
        self.p_dd = np.concatenate((z, np.cumsum(d * d)))
        self.p_c = np.concatenate((z, np.cumsum(c)))
        self.p_cc = np.concatenate((z, np.cumsum(c * c)))

    def _fit(self, lo, hi):
        """Line fit over j = lo..hi (inclusive, 1-based); lo/hi may be arrays.

        Segments always hold >= 2 points (enforced by the candidate range),
        so the normal equations never degenerate.
        """
        m = hi - lo + 1.0
        jbar = (lo + hi) / 2.0
        sxx = m * (m * m - 1.0) / 12.0
        sd = self.p_d[hi] - self.p_d[lo - 1]
        sxy = (self.p_jd[hi] - self.p_jd[lo - 1]) - jbar * sd
        syy = (self.p_dd[hi] - self.p_dd[lo - 1]) - sd * sd / m
        slope_d = sxy / sxx
        rss = syy - sxy * slope_d
        # scale for the zero-snap: centered variation of the raw curve
        sc = self.p_c[hi] - self.p_c[lo - 1]
        syy_raw = np.maximum((self.p_cc[hi] - self.p_cc[lo - 1]) - sc * sc / m, 0.0)
        rss = np.where(rss <= RSS_TOL * syy_raw, 0.0, np.maximum(rss, 0.0))
        slope = slope_d + self.a0
        intercept = (sd / m - slope_d * jbar) + self.b0
        return slope, intercept, rss

    def fit_left(self, k):
        k = np.asarray(k, dtype=np.int64)
        return self._fit(np.ones_like(k), k)

    def fit_right(self, k):
        k = np.asarray(k, dtype=np.int64)
        return self._fit(k + 1, np.full_like(k, self.n))


def _table_for(c: CumulativeSquares) -> _FitTable:
    if c._fit_table is None:
        c._fit_table = _FitTable(c.c)
    return c._fit_table


def segment_fit(c: CumulativeSquares | np.ndarray, k: int) -> SegmentFit:
    """Fit least-squares lines left and right of candidate split ``k``.

    Each call is O(1) after the O(n) prefix-sum table is built (and cached on
    the :class:`CumulativeSquares` instance).  Requires 2 <= k <= n-2 so both
    lines are determined by at least two points.
    """
    if not isinstance(c, CumulativeSquares):
        c = CumulativeSquares(np.asarray(c, dtype=np.float64))
    n = c.n
    if not 2 <= k <= n - 2:
        raise ValueError(f"split k={k} must satisfy 2 <= k <= n-2 (n={n})")
    table = _table_for(c)
    a1, b1, rss1 = table.fit_left(k)
    a2, b2, rss2 = table.fit_right(k)
    return SegmentFit(
        k=int(k),
        a1=float(a1),
        b1=float(b1),
        a2=float(a2),
        b2=float(b2),
        rss_left=float(rss1),
        rss_right=float(rss2),
    )


def estimate_changepoint(ts) -> ChangePointEstimate:
    """Split index minimizing the two-line residual sum on the cumulative curve.

    Scans candidates k = 2..n-2 in O(n) total; ties break to the smallest k.
    The estimate looks only at the observed values, never at distribution
    parameters, and is invariant under rescaling of the series.
    """
    x = as_values(ts)
    n = x.size
    if n < 5:
        raise ValueError(f"need at least 5 observations to place a split, got {n}")
    c = cumulative_squares(x)
    table = _table_for(c)
    ks = np.arange(2, n - 1, dtype=np.int64)
    _, _, rss1 = table.fit_left(ks)
    _, _, rss2 = table.fit_right(ks)
    curve = rss1 + rss2
    best = int(np.argmin(curve))
    return ChangePointEstimate(
        l_hat=int(ks[best]), rss_curve=curve, k_min=2, k_max=int(n - 2)
    )


def brute_force_changepoint(ts) -> ChangePointEstimate:
    """O(n^2) oracle twin of :func:`estimate_changepoint`.

    Recomputes every candidate's two line fits from scratch with two-pass
    centered least squares on the raw curve, sharing nothing with the
    prefix-sum scan except the zero-snap rule.  Intended for n up to ~2000.
    """
    x = as_values(ts)
    n = x.size
    if n < 5:
        raise ValueError(f"need at least 5 observations to place a split, got {n}")
    c = cumulative_squares(x).c
    j = np.arange(1, n + 1, dtype=np.float64)
    curve = np.empty(n - 3, dtype=np.float64)
    for idx, k in enumerate(range(2, n - 1)):
        total = 0.0
        for jj, cc in ((j[:k], c[:k]), (j[k:], c[k:])):
            dj = jj - jj.mean()
            dc = cc - cc.mean()
            slope = float(dj @ dc) / float(dj @ dj)
            resid = dc - slope * dj
            rss = float(resid @ resid)
            if rss <= RSS_TOL * float(dc @ dc):
                rss = 0.0
            total += rss
        curve[idx] = total
    best = int(np.argmin(curve))
    return ChangePointEstimate(
        l_hat=int(best + 2), rss_curve=curve, k_min=2, k_max=int(n - 2)
    )


def tsay_variance_ratio(ts, l: int) -> float:
    """Normalized post/pre variance ratio at split ``l``.

    ``(l-1) * sum_{i>=l} x_i^2 / ((n-l+1) * sum_{i<l} x_i^2)`` — an estimate
    of the squared variance-inflation factor when the split is true.

    Raises
    ------
    ZeroDenominatorError
        If the pre-split segment is identically zero.
    """
    x = as_values(ts)
    n = x.size
    if not 2 <= l <= n - 1:
        raise ValueError(f"split l={l} must satisfy 2 <= l <= n-1 (n={n})")
    sq = x * x
    pre = float(np.sum(sq[: l - 1]))
    post = float(np.sum(sq[l - 1 :]))
    if pre == 0.0:
        raise ZeroDenominatorError(f"pre-split sum of squares is zero at l={l}")
    return (l - 1) * post / ((n - l + 1) * pre)


def default_trim(n: int) -> int:
    """Default trimming margin for the variance-ratio scan: max(10, ceil(0.05 n))."""
    return max(10, math.ceil(0.05 * n))


def tsay_changepoint(ts, h: int | None = None) -> TsayEstimate:
    """Variance-ratio change-point scan over splits h <= l <= n-h.

    Computes the ratio curve, its extremes r_min and r_max, the statistic
    ``r_hat = max(1/r_min, r_max)``, and returns the split where it occurs
    (argmax of the curve when r_hat == r_max, else argmin; ties to the
    smallest split).  Candidates with an all-zero pre-split segment are
    skipped with a warning and excluded from the extremes.
    """
    x = as_values(ts)
    n = x.size
    if h is None:
        h = default_trim(n)
    if h < 2:
        raise ValueError(f"trimming margin h={h} must be >= 2")
    if h > n - h:
        raise ValueError(f"trimming margin h={h} leaves no candidates (n={n})")
    sq = x * x
    c0 = np.concatenate(([0.0], np.cumsum(sq)))
    ls = np.arange(h, n - h + 1, dtype=np.int64)
    pre = c0[ls - 1]
    post = c0[n] - pre
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(pre > 0, (ls - 1) * post / ((n - ls + 1) * pre), np.nan)
    n_skipped = int(np.count_nonzero(~np.isfinite(r)))
    if n_skipped == r.size:
        raise ZeroDenominatorError("every candidate split has a zero pre-split sum")
    if n_skipped:
        warnings.warn(
            f"skipped {n_skipped} variance-ratio candidates with zero denominator",
            stacklevel=2,
        )
    r_min = float(np.nanmin(r))
    r_max = float(np.nanmax(r))
    if r_max >= 1.0 / r_min:
        r_hat = r_max
        pick = int(np.nanargmax(r))
    else:
        r_hat = 1.0 / r_min
        pick = int(np.nanargmin(r))
    return TsayEstimate(l_hat=int(ls[pick]), r_hat=r_hat, r_curve=r, h=int(h))
