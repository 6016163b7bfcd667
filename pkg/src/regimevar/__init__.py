"""regimevar: variance-regime change-point detection and testing.

Detects the index where the second-moment structure of a one-dimensional
series changes (segmented regression on the cumulative sum of squares, with
a variance-ratio baseline), tests the two-regime hypothesis with a
distribution-free quantile/binomial test, and reproduces the Monte Carlo
validation campaigns with Gaussian and Lévy-stable generators.
"""

from .changepoint import (
    ChangePointEstimate,
    SegmentFit,
    TsayEstimate,
    ZeroDenominatorError,
    brute_force_changepoint,
    default_trim,
    estimate_changepoint,
    segment_fit,
    tsay_changepoint,
    tsay_variance_ratio,
)
from .dataio import load_series, read_report, write_report
from .regime import (
    RegimeTestResult,
    SegmentationNode,
    binomial_cdf_strict,
    recursive_segmentation,
    regime_variance_test,
)
from .simulate import (
    COMPARISON_SCENARIOS,
    TABLE1_SCENARIOS,
    TABLE2_SCENARIOS,
    DistributionSpec,
    EstimatorComparison,
    MonteCarloReport,
    RngSpec,
    Scenario,
    compare_estimators,
    generate_scenario,
    run_campaign,
    run_table1,
    run_table2,
    sample_gaussian,
    sample_stable,
)
from .stats import (
    AcfResult,
    ConstantSeriesError,
    CumulativeSquares,
    QuantileBand,
    TimeSeries,
    WindowMoments,
    acf,
    cumulative_squares,
    empirical_quantile,
    expected_cumulative,
    expected_window,
    sample_std,
    window_second_moment,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # stats
    "TimeSeries",
    "CumulativeSquares",
    "WindowMoments",
    "QuantileBand",
    "AcfResult",
    "ConstantSeriesError",
    "cumulative_squares",
    "expected_cumulative",
    "window_second_moment",
    "expected_window",
    "empirical_quantile",
    "sample_std",
    "acf",
    # changepoint
    "SegmentFit",
    "ChangePointEstimate",
    "TsayEstimate",
    "ZeroDenominatorError",
    "segment_fit",
    "estimate_changepoint",
    "brute_force_changepoint",
    "tsay_variance_ratio",
    "tsay_changepoint",
    "default_trim",
    # regime test
    "RegimeTestResult",
    "SegmentationNode",
    "binomial_cdf_strict",
    "regime_variance_test",
    "recursive_segmentation",
    # simulation
    "RngSpec",
    "DistributionSpec",
    "Scenario",
    "MonteCarloReport",
    "EstimatorComparison",
    "sample_gaussian",
    "sample_stable",
    "generate_scenario",
    "run_campaign",
    "run_table1",
    "run_table2",
    "compare_estimators",
    "TABLE1_SCENARIOS",
    "TABLE2_SCENARIOS",
    "COMPARISON_SCENARIOS",
    # io
    "load_series",
    "write_report",
    "read_report",
]
