"""Second-moment statistics for variance-regime analysis.

Everything here is built on the squared observations of a one-dimensional
series: the running sum of squares ``C_j``, windowed sums ``R_{j,k}``, their
theoretical means under a single variance break, empirical quantiles of the
squared data, and the autocorrelation function used to check the independence
assumption before testing.

All functions are pure and accept either a :class:`TimeSeries` or any 1-d
array-like of finite floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConstantSeriesError",
    "TimeSeries",
    "CumulativeSquares",
    "WindowMoments",
    "QuantileBand",
    "AcfResult",
    "as_values",
    "cumulative_squares",
    "expected_cumulative",
    "window_second_moment",
    "expected_window",
    "empirical_quantile",
    "sample_std",
    "acf",
]

# Chunk length for the blocked compensated cumulative sum.  Worst-case
# relative error of a prefix is ~(chunk + n/chunk) * eps, far below the
# 1e-12 contract for n up to 1e6.
_CUMSUM_CHUNK = 4096


class ConstantSeriesError(ValueError):
    """Raised where a statistic is undefined for a constant series."""


def as_values(ts) -> np.ndarray:
    """Coerce a TimeSeries or array-like to a validated float64 vector.

    Raises
    ------
    ValueError
        If the input is empty, not one-dimensional, or contains NaN/inf.
    """
    if isinstance(ts, TimeSeries):
        return ts.values
    x = np.asarray(ts, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"series must be one-dimensional, got shape {x.shape}")
    if x.size < 1:
        raise ValueError("series must contain at least one observation")
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise ValueError(f"series contains a non-finite value at position {bad}")
    return x


@dataclass(frozen=True)
class TimeSeries:
    """A finite sequence of real observations.

    Attributes
    ----------
    values : ndarray
        The observations, 1-d float64, all finite, length >= 1.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.values, dtype=np.float64)
        if x.ndim != 1:
            raise ValueError(f"series must be one-dimensional, got shape {x.shape}")
        if x.size < 1:
            raise ValueError("series must contain at least one observation")
        if not np.all(np.isfinite(x)):
            bad = int(np.flatnonzero(~np.isfinite(x))[0])
            raise ValueError(f"series contains a non-finite value at position {bad}")
        object.__setattr__(self, "values", x)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n


@dataclass
class CumulativeSquares:
    """Running sum of squared observations, ``c[j-1] = sum_{i<=j} x_i**2``.

    Non-decreasing by construction; ``c[-1]`` is the total sum of squares.
    """

    c: np.ndarray
    # lazily built least-squares table, managed by the changepoint module
    _fit_table: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=np.float64)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("cumulative-squares curve must be a non-empty 1-d array")
        if not np.all(np.isfinite(c)):
            raise ValueError("cumulative-squares curve contains non-finite values")
        if np.any(np.diff(c) < 0):
            raise ValueError("cumulative-squares curve must be non-decreasing")
        self.c = c

    @property
    def n(self) -> int:
        return int(self.c.size)

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class WindowMoments:
    """Windowed sums of squares ``r[j] = sum_{i=j+1..j+k} x_i**2``, j = 0..n-k."""

    k: int
    r: np.ndarray

    @property
    def n_windows(self) -> int:
        return int(self.r.size)


@dataclass(frozen=True)
class QuantileBand:
    """Empirical quantile band (lower, upper) of squared data at level alpha."""

    lower: float
    upper: float
    alpha: float

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"band lower {self.lower} exceeds upper {self.upper}")

    @property
    def degenerate(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class AcfResult:
    """Autocorrelations for lags 0..max_lag plus the white-noise band 1.96/sqrt(n)."""

    rho: np.ndarray
    band_halfwidth: float

    @property
    def max_lag(self) -> int:
        return int(self.rho.size - 1)


def cumulative_squares(ts) -> CumulativeSquares:
    """Cumulative sum of squared observations in one left-to-right pass.

    Uses a blocked cumulative sum with a Neumaier-compensated carry across
    blocks so the relative error of every prefix stays below 1e-12 even for
    1e6-point series.
    """
    x = as_values(ts)
    sq = x * x
    n = sq.size
    out = np.empty(n, dtype=np.float64)
    total = 0.0
    comp = 0.0
    for start in range(0, n, _CUMSUM_CHUNK):
        stop = min(start + _CUMSUM_CHUNK, n)
        seg = np.cumsum(sq[start:stop])
        out[start:stop] = seg + (total + comp)
        s = float(seg[-1])
        t = total + s
        if abs(total) >= abs(s):
            comp += (total - t) + s
        else:
            comp += (s - t) + total
        total = t
    return CumulativeSquares(out)


def expected_cumulative(sigma1_sq: float, sigma2_sq: float, l: int, n: int) -> np.ndarray:
    """Mean of the cumulative-squares curve under a single break at ``l``.

    Returns ``j*sigma1_sq`` for j <= l and ``j*sigma2_sq + l*(sigma1_sq -
    sigma2_sq)`` for j > l; a piecewise-linear curve, continuous at ``l``.
    """
    if sigma1_sq < 0 or sigma2_sq < 0:
        raise ValueError("second moments must be non-negative")
    if not 1 <= l <= n:
        raise ValueError(f"break index l={l} must satisfy 1 <= l <= n={n}")
    j = np.arange(1, n + 1, dtype=np.float64)
    return np.where(j <= l, j * sigma1_sq, j * sigma2_sq + l * (sigma1_sq - sigma2_sq))


def window_second_moment(ts, k: int) -> WindowMoments:
    """Sliding-window sums of squares of width ``k``.

    Computed through the cumulative curve: ``r[j] = c[j+k] - c[j]`` with
    ``c[0] := 0``, for j = 0..n-k.
    """
    x = as_values(ts)
    n = x.size
    if not 1 <= k <= n:
        raise ValueError(f"window width k={k} must satisfy 1 <= k <= n={n}")
    c = cumulative_squares(x).c
    c0 = np.concatenate(([0.0], c))
    r = c0[k:] - c0[: n - k + 1]
    return WindowMoments(k=int(k), r=r)


def expected_window(
    sigma1_sq: float, sigma2_sq: float, l: int, k: int, n: int
) -> np.ndarray:
    """Mean of the window statistic under a single break at ``l`` (requires k < l).

    Constant at ``k*sigma1_sq`` while the window sits before the break,
    linear in j while it straddles it, constant at ``k*sigma2_sq`` after.
    """
    if sigma1_sq < 0 or sigma2_sq < 0:
        raise ValueError("second moments must be non-negative")
    if k < 1:
        raise ValueError(f"window width k={k} must be >= 1")
    if not k < l <= n:
        raise ValueError(f"break index l={l} must satisfy k={k} < l <= n={n}")
    j = np.arange(0, n - k + 1, dtype=np.float64)
    straddle = j * (sigma2_sq - sigma1_sq) + l * (sigma1_sq - sigma2_sq) + k * sigma2_sq
    out = np.where(j + k <= l, k * sigma1_sq, straddle)
    return np.where(j + 1 > l, k * sigma2_sq, out)


def empirical_quantile(sample, a: float) -> float:
    """Order-statistic quantile: the ceil(a*m)-th smallest of an m-point sample.

    This is the generalized inverse of the empirical CDF.  The product
    ``a*m`` is compared against integers with a 1e-9 slack so exact rational
    orders (e.g. a=0.025, m=1000 -> 25th) are not pushed up one rank by
    floating-point representation of ``a``.
    """
    s = np.sort(np.asarray(sample, dtype=np.float64))
    m = s.size
    if m < 1:
        raise ValueError("sample must be non-empty")
    if not np.all(np.isfinite(s)):
        raise ValueError("sample contains non-finite values")
    if not 0.0 < a <= 1.0:
        raise ValueError(f"quantile order a={a} must lie in (0, 1]")
    t = a * m
    i = int(math.floor(t))
    if t - i > 1e-9:
        i += 1
    return float(s[max(i, 1) - 1])


def sample_std(sample) -> float:
    """Unbiased sample standard deviation (divisor m-1)."""
    s = np.asarray(sample, dtype=np.float64)
    if s.size < 2:
        raise ValueError("sample standard deviation needs at least 2 observations")
    if not np.all(np.isfinite(s)):
        raise ValueError("sample contains non-finite values")
    return float(np.std(s, ddof=1))


def acf(ts, max_lag: int) -> AcfResult:
    """Sample autocorrelation for lags 0..max_lag with the 1.96/sqrt(n) band.

    Uses the standard estimator with the full-series centered sum of squares
    in the denominator, so ``rho[0] == 1`` and ``|rho[h]| <= 1``.

    Raises
    ------
    ConstantSeriesError
        If the series is constant (zero denominator).
    """
    x = as_values(ts)
    n = x.size
    if n < 2:
        raise ValueError("autocorrelation needs at least 2 observations")
    if not 0 <= max_lag < n:
        raise ValueError(f"max_lag={max_lag} must satisfy 0 <= max_lag < n={n}")
    d = x - x.mean()
    denom = float(d @ d)
    if denom == 0.0:
        raise ConstantSeriesError("autocorrelation is undefined for a constant series")
    rho = np.empty(max_lag + 1, dtype=np.float64)
    rho[0] = 1.0
    for h in range(1, max_lag + 1):
        rho[h] = float(d[h:] @ d[:-h]) / denom
    return AcfResult(rho=rho, band_halfwidth=1.96 / math.sqrt(n))
