"""Synthetic data generation and the Monte Carlo validation campaigns.

Generators: seedable Gaussian and Lévy-stable samplers (Chambers--Mallows--
Stuck construction, 1-parametrization), composed into segmented or permuted
scenarios.  Campaigns: the null-hypothesis and power tables over 1000
trajectories of length 1800, and the head-to-head comparison of the
segmented-regression estimator against the variance-ratio baseline.

Reproducibility: every trial draws from its own stream, derived from a base
seed and the trial index through a fixed splitmix64-style mixer, so results
are bit-identical regardless of worker count or scheduling.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .changepoint import estimate_changepoint, tsay_changepoint
from .regime import regime_variance_test

__all__ = [
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
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class RngSpec:
    """Base seed plus the per-trial stream derivation rule.

    Trial ``t`` draws from PCG64 seeded with
    ``splitmix64(base_seed + (t+1) * 0x9E3779B97F4A7C15 mod 2**64)`` — the
    golden-ratio increment walks the seed space and the splitmix64 finalizer
    decorrelates neighbouring trials.  The same (base_seed, trial) pair
    always yields the same sample, independent of execution order.
    """

    base_seed: int

    def trial_seed(self, trial: int) -> int:
        return _splitmix64(self.base_seed + (trial + 1) * _GOLDEN)

    def trial_rng(self, trial: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.trial_seed(trial)))


def sample_gaussian(mu: float, sigma: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent N(mu, sigma) draws; sigma is the standard deviation."""
    if sigma <= 0:
        raise ValueError(f"gaussian scale sigma={sigma} must be > 0")
    return rng.normal(mu, sigma, int(n))


def sample_stable(
    alpha: float,
    beta: float,
    sigma: float,
    mu: float,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """n independent draws ``sigma*Z + mu`` of a stable law.

    Z is a standard stable variate in the 1-parametrization (characteristic
    function with the tan(pi*alpha/2) skew term), generated by the
    Chambers--Mallows--Stuck transformation of a uniform angle and a unit
    exponential, with the usual special case at alpha = 1.  At alpha = 2 the
    law is Gaussian with standard deviation sqrt(2)*sigma.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"stability index alpha={alpha} must lie in (0, 2]")
    if not -1.0 <= beta <= 1.0:
        raise ValueError(f"skewness beta={beta} must lie in [-1, 1]")
    if sigma <= 0:
        raise ValueError(f"stable scale sigma={sigma} must be > 0")
    n = int(n)
    v = rng.uniform(-np.pi / 2.0, np.pi / 2.0, n)
    w = rng.exponential(1.0, n)
    if abs(alpha - 1.0) < 1e-12:
        bv = np.pi / 2.0 + beta * v
        z = (2.0 / np.pi) * (
            bv * np.tan(v) - beta * np.log((np.pi / 2.0) * w * np.cos(v) / bv)
        )
    else:
        t = beta * np.tan(np.pi * alpha / 2.0)
        b0 = np.arctan(t) / alpha
        scale0 = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
        z = (
            scale0
            * np.sin(alpha * (v + b0))
            / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - alpha * (v + b0)) / w) ** ((1.0 - alpha) / alpha)
        )
    return sigma * z + mu


@dataclass(frozen=True)
class DistributionSpec:
    """Generative description of one segment: Gaussian or Lévy-stable."""

    kind: Literal["gaussian", "stable"]
    mu: float = 0.0
    sigma: float = 1.0
    alpha: float = 2.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian", "stable"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.sigma <= 0:
            raise ValueError(f"scale sigma={self.sigma} must be > 0")
        if self.kind == "stable":
            if not 0.0 < self.alpha <= 2.0:
                raise ValueError(f"stability index alpha={self.alpha} must lie in (0, 2]")
            if not -1.0 <= self.beta <= 1.0:
                raise ValueError(f"skewness beta={self.beta} must lie in [-1, 1]")

    @classmethod
    def gaussian(cls, mu: float, sigma: float) -> "DistributionSpec":
        return cls(kind="gaussian", mu=mu, sigma=sigma)

    @classmethod
    def stable(cls, alpha: float, beta: float, sigma: float, mu: float) -> "DistributionSpec":
        return cls(kind="stable", mu=mu, sigma=sigma, alpha=alpha, beta=beta)

    @property
    def label(self) -> str:
        if self.kind == "gaussian":
            return f"N({self.mu:g},{self.sigma:g})"
        return f"S({self.alpha:g},{self.beta:g},{self.sigma:g},{self.mu:g})"

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "gaussian":
            return sample_gaussian(self.mu, self.sigma, n, rng)
        return sample_stable(self.alpha, self.beta, self.sigma, self.mu, n, rng)


@dataclass(frozen=True)
class Scenario:
    """Ordered segments of (distribution, length), optionally permuted.

    A permuted scenario shuffles the concatenated sample, modelling data
    whose distribution varies in time without contiguous regimes; a
    non-permuted multi-segment scenario has a well-defined break structure.
    """

    name: str
    segments: tuple[tuple[DistributionSpec, int], ...]
    permuted: bool = False

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("scenario needs at least one segment")
        if any(length < 1 for _, length in self.segments):
            raise ValueError("every segment length must be >= 1")
        if self.total_length < 10:
            raise ValueError("scenario total length must be >= 10")

    @property
    def total_length(self) -> int:
        return sum(length for _, length in self.segments)

    @property
    def true_break(self) -> int:
        """Break index for a two-segment scenario (length of the first segment)."""
        if len(self.segments) != 2 or self.permuted:
            raise ValueError("true break is defined only for unpermuted two-segment scenarios")
        return self.segments[0][1]


def generate_scenario(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Concatenate the segment samples in order; shuffle if the scenario is permuted."""
    parts = [spec.sample(length, rng) for spec, length in scenario.segments]
    x = np.concatenate(parts)
    if scenario.permuted:
        x = rng.permutation(x)
    return x


_G = DistributionSpec.gaussian
_S = DistributionSpec.stable

TABLE1_SCENARIOS: tuple[Scenario, ...] = (
    Scenario("N(0,2)", ((_G(0, 2), 1800),)),
    Scenario("S(1.8,0,1,0)", ((_S(1.8, 0, 1, 0), 1800),)),
    Scenario(
        "permuted-N(0,1)+S(1.9,0,1,0)",
        ((_G(0, 1), 900), (_S(1.9, 0, 1, 0), 900)),
        permuted=True,
    ),
)

TABLE2_SCENARIOS: tuple[Scenario, ...] = (
    Scenario("N(0,4)|N(0,4.55)", ((_G(0, 4), 800), (_G(0, 4.55), 1000))),
    Scenario("S(1.9,0,2,0)|S(1.9,0,2.5,0)", ((_S(1.9, 0, 2, 0), 800), (_S(1.9, 0, 2.5, 0), 1000))),
    Scenario("S(1.8,0,1.2,0)|N(0,2.45)", ((_S(1.8, 0, 1.2, 0), 800), (_G(0, 2.45), 1000))),
)

# the six two-segment cases compared across the two detection procedures
COMPARISON_SCENARIOS: tuple[Scenario, ...] = TABLE2_SCENARIOS + (
    Scenario("N(0,2)|N(0,4)", ((_G(0, 2), 800), (_G(0, 4), 1000))),
    Scenario("S(1.9,0,2,0)|S(1.9,0,4,0)", ((_S(1.9, 0, 2, 0), 800), (_S(1.9, 0, 4, 0), 1000))),
    Scenario("N(0,4)|S(1.9,0,1,0)", ((_G(0, 4), 800), (_S(1.9, 0, 1, 0), 1000))),
)


@dataclass(frozen=True)
class MonteCarloReport:
    """Aggregate of one scenario campaign plus the full per-trial sequences."""

    scenario: str
    trials: int
    alpha: float
    l_test: int
    accept_count: int
    reject_count: int
    mean_p_accept: float
    mean_p_reject: float
    mean_l_hat: float
    p_values: np.ndarray
    l_hats: np.ndarray

    @classmethod
    def build(
        cls,
        scenario: str,
        alpha: float,
        l_test: int,
        p_values: np.ndarray,
        l_hats: np.ndarray,
    ) -> "MonteCarloReport":
        p_values = np.asarray(p_values, dtype=np.float64)
        l_hats = np.asarray(l_hats, dtype=np.float64)
        accepted = p_values >= alpha
        n_acc = int(np.count_nonzero(accepted))
        n_rej = int(p_values.size - n_acc)
        return cls(
            scenario=scenario,
            trials=int(p_values.size),
            alpha=float(alpha),
            l_test=int(l_test),
            accept_count=n_acc,
            reject_count=n_rej,
            mean_p_accept=float(p_values[accepted].mean()) if n_acc else float("nan"),
            mean_p_reject=float(p_values[~accepted].mean()) if n_rej else float("nan"),
            mean_l_hat=float(l_hats.mean()),
            p_values=p_values,
            l_hats=l_hats,
        )


@dataclass(frozen=True)
class EstimatorComparison:
    """Paired split estimates from the two detectors over one scenario."""

    scenario: str
    true_break: int
    h: int
    l_hat: np.ndarray
    l_tsay: np.ndarray


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, trials))
    size, extra = divmod(trials, workers)
    bounds = []
    start = 0
    for i in range(workers):
        stop = start + size + (1 if i < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def _estimate_chunk(args) -> np.ndarray:
    scenario, rng_spec, start, stop = args
    out = np.empty(stop - start, dtype=np.float64)
    for t in range(start, stop):
        x = generate_scenario(scenario, rng_spec.trial_rng(t))
        out[t - start] = estimate_changepoint(x).l_hat
    return out


def _test_chunk(args) -> np.ndarray:
    scenario, rng_spec, start, stop, alpha, l_test = args
    out = np.empty(stop - start, dtype=np.float64)
    for t in range(start, stop):
        x = generate_scenario(scenario, rng_spec.trial_rng(t))
        out[t - start] = regime_variance_test(x, alpha=alpha, l=l_test).p_value
    return out


def _compare_chunk(args) -> np.ndarray:
    scenario, rng_spec, start, stop, h = args
    out = np.empty((stop - start, 2), dtype=np.int64)
    for t in range(start, stop):
        x = generate_scenario(scenario, rng_spec.trial_rng(t))
        out[t - start, 0] = estimate_changepoint(x).l_hat
        out[t - start, 1] = tsay_changepoint(x, h=h).l_hat
    return out


def _run_chunks(fn, argss, workers: int) -> list[np.ndarray]:
    if workers <= 1 or len(argss) <= 1:
        return [fn(a) for a in argss]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, argss))


def run_campaign(
    scenario: Scenario,
    trials: int,
    alpha: float,
    rng_spec: RngSpec,
    workers: int = 1,
) -> MonteCarloReport:
    """Estimate-then-test campaign over independently seeded trajectories.

    Pass one estimates the split on every trajectory; the test split is the
    rounded mean of those estimates, so no single trajectory's split noise
    drives the decisions.  Pass two regenerates each trajectory from its own
    seed and applies the regime-variance test at that split.
    """
    if trials < 1:
        raise ValueError(f"trials={trials} must be >= 1")
    bounds = _chunks(trials, workers)
    l_parts = _run_chunks(
        _estimate_chunk, [(scenario, rng_spec, a, b) for a, b in bounds], workers
    )
    l_hats = np.concatenate(l_parts)
    l_test = int(round(float(l_hats.mean())))
    n = scenario.total_length
    l_test = min(max(l_test, 2), n - 2)
    p_parts = _run_chunks(
        _test_chunk,
        [(scenario, rng_spec, a, b, alpha, l_test) for a, b in bounds],
        workers,
    )
    p_values = np.concatenate(p_parts)
    return MonteCarloReport.build(scenario.name, alpha, l_test, p_values, l_hats)


def run_table1(
    trials: int = 1000,
    alpha: float = 0.05,
    rng_spec: RngSpec = RngSpec(0),
    workers: int = 1,
) -> list[MonteCarloReport]:
    """Null-hypothesis campaign: the three no-break cases of length 1800."""
    return [
        run_campaign(s, trials, alpha, rng_spec, workers) for s in TABLE1_SCENARIOS
    ]


def run_table2(
    trials: int = 1000,
    alpha: float = 0.05,
    rng_spec: RngSpec = RngSpec(0),
    workers: int = 1,
) -> list[MonteCarloReport]:
    """Power campaign: the three close-parameter break cases, split at 800 of 1800."""
    return [
        run_campaign(s, trials, alpha, rng_spec, workers) for s in TABLE2_SCENARIOS
    ]


def compare_estimators(
    scenario: Scenario,
    trials: int,
    h: int,
    rng_spec: RngSpec,
    workers: int = 1,
) -> EstimatorComparison:
    """Record both detectors' splits per trial on a two-segment scenario."""
    if trials < 1:
        raise ValueError(f"trials={trials} must be >= 1")
    true_break = scenario.true_break
    bounds = _chunks(trials, workers)
    parts = _run_chunks(
        _compare_chunk, [(scenario, rng_spec, a, b, h) for a, b in bounds], workers
    )
    pairs = np.concatenate(parts)
    return EstimatorComparison(
        scenario=scenario.name,
        true_break=true_break,
        h=int(h),
        l_hat=pairs[:, 0].copy(),
        l_tsay=pairs[:, 1].copy(),
    )
