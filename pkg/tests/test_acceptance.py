"""Acceptance gate: every criterion runs at its stated tolerance and prints
one PASS/FAIL line.

All Monte Carlo criteria run at fixed, documented base seeds; tolerances are
pinned here, not calibrated at run time.
"""

from __future__ import annotations

import time

import numpy as np
import pytest
from scipy import stats as sps

from regimevar import (
    DistributionSpec,
    RngSpec,
    Scenario,
    binomial_cdf_strict,
    brute_force_changepoint,
    compare_estimators,
    cumulative_squares,
    estimate_changepoint,
    generate_scenario,
    recursive_segmentation,
    run_table1,
    run_table2,
    sample_gaussian,
    sample_stable,
    tsay_variance_ratio,
)
from regimevar.cli import main as cli_main

_G = DistributionSpec.gaussian

# frozen campaign seed: typical of the seed population (scanned margins all
# at >= 24% of tolerance), documented in the README
TABLE_SEED = 31337

TABLE1_ACCEPTS = (866, 865, 889)
TABLE1_MEAN_P = (0.5623, 0.5349, 0.5621)
TABLE2_REJECTS = (759, 758, 652)
TABLE2_MEAN_P = (0.0061, 0.0054, 0.0044)
TABLE2_MEAN_L = (822.28, 943.72, 646.42)


def report(num: int, name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:2d} [{name}]: {status} — {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


def mp_binomial_lower(n: int, p, b: int):
    """High-precision strict lower tail by direct summation (smaller tail)."""
    import mpmath as mp

    with mp.workdps(40):
        p = mp.mpf(p)
        q = 1 - p
        if b <= 0:
            return mp.mpf(0)
        if b > n:
            return mp.mpf(1)
        if b - 1 <= n // 2:
            term = q**n
            total = term
            for k in range(1, b):
                term *= p * (n - k + 1) / (q * k)
                total += term
            return total
        term = p**n
        total = term
        for k in range(n - 1, b - 1, -1):
            term *= q * (k + 1) / (p * (n - k))
            total += term
        return 1 - total


def test_criterion_01_oracle_equivalence():
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    matches = 0
    for _ in range(200):
        n = int(rng.integers(20, 201))
        x = rng.normal(0, 1 + 3 * rng.random(), n)
        if rng.random() < 0.5:
            x = x + sample_stable(1.8, 0, 1, 0, n, rng)
        if estimate_changepoint(x).l_hat == brute_force_changepoint(x).l_hat:
            matches += 1
    elapsed = time.perf_counter() - start
    report(
        1,
        "oracle-equivalence",
        matches == 200 and elapsed < 5.0,
        f"{matches}/200 identical indices in {elapsed:.2f} s (< 5 s)",
    )


def test_criterion_02_table1_reproduction():
    start = time.perf_counter()
    reports = run_table1(1000, 0.05, RngSpec(TABLE_SEED))
    elapsed = time.perf_counter() - start
    ok = elapsed < 180.0
    details = []
    for rep, acc_t, p_t in zip(reports, TABLE1_ACCEPTS, TABLE1_MEAN_P):
        ok &= abs(rep.accept_count - acc_t) <= 45
        ok &= abs(rep.mean_p_accept - p_t) <= 0.05
        details.append(
            f"{rep.scenario}: accept {rep.accept_count} (target {acc_t}±45), "
            f"mean p {rep.mean_p_accept:.4f} (target {p_t}±0.05)"
        )
    report(2, "table1-reproduction", ok, "; ".join(details) + f"; {elapsed:.1f} s (< 180 s)")


def test_criterion_03_table2_reproduction():
    start = time.perf_counter()
    reports = run_table2(1000, 0.05, RngSpec(TABLE_SEED))
    elapsed = time.perf_counter() - start
    ok = elapsed < 300.0
    details = []
    for rep, rej_t, p_t, l_t in zip(reports, TABLE2_REJECTS, TABLE2_MEAN_P, TABLE2_MEAN_L):
        ok &= abs(rep.reject_count - rej_t) <= 45
        ok &= abs(rep.mean_p_reject - p_t) <= 0.005
        ok &= abs(rep.mean_l_hat - l_t) <= 60
        details.append(
            f"{rep.scenario}: reject {rep.reject_count} (target {rej_t}±45), "
            f"mean p {rep.mean_p_reject:.4f} (target {p_t}±0.005), "
            f"mean split {rep.mean_l_hat:.2f} (target {l_t}±60)"
        )
    report(3, "table2-reproduction", ok, "; ".join(details) + f"; {elapsed:.1f} s (< 300 s)")


def test_criterion_04_estimator_comparison():
    strong = Scenario("N(0,2)|N(0,4)", ((_G(0, 2), 800), (_G(0, 4), 1000)))
    weak = Scenario("N(0,4)|N(0,4.55)", ((_G(0, 4), 800), (_G(0, 4.55), 1000)))
    cs = compare_estimators(strong, 1000, 2, RngSpec(55001))
    cw = compare_estimators(weak, 1000, 2, RngSpec(55002))
    med_reg_s = float(np.median(np.abs(cs.l_hat - 800)))
    med_ratio_s = float(np.median(np.abs(cs.l_tsay - 800)))
    med_reg_w = float(np.median(np.abs(cw.l_hat - 800)))
    med_ratio_w = float(np.median(np.abs(cw.l_tsay - 800)))
    ok = med_reg_s <= med_ratio_s and med_reg_s <= 40 and med_reg_w <= med_ratio_w
    report(
        4,
        "estimator-comparison",
        ok,
        f"strong case med|err| regression {med_reg_s} <= ratio {med_ratio_s} and <= 40; "
        f"weak case regression {med_reg_w} <= ratio {med_ratio_w}",
    )


def test_criterion_05_variance_ratio_calibration():
    # variance inflated by a factor (1+1) from index 900 of 1800: the ratio
    # at the true split estimates (1+1)^2 = 4
    spec = RngSpec(55003)
    ratios = []
    for t in range(200):
        rng = spec.trial_rng(t)
        x = np.concatenate([sample_gaussian(0, 1, 899, rng), sample_gaussian(0, 2, 901, rng)])
        ratios.append(tsay_variance_ratio(x, 900))
    med = float(np.median(ratios))
    report(5, "variance-ratio-calibration", 3.5 <= med <= 4.5, f"median ratio {med:.3f} in [3.5, 4.5]")


def test_criterion_06_binomial_cdf_accuracy():
    worst = 0.0
    checked = 0
    for n in (10, 1000, 100_000):
        for p in (0.5, 0.9, 0.95, 0.99):
            if n == 10:
                bs = range(1, n + 2)
            else:
                qs = [1e-6, 1e-3, 0.025, 0.5, 0.975, 0.999, 1 - 1e-6]
                bs = sorted(
                    {int(np.clip(sps.binom.ppf(q, n, p), 1, n)) for q in qs} | {n}
                )
            for b in bs:
                oracle = float(mp_binomial_lower(n, p, int(b)))
                got = binomial_cdf_strict(n, p, int(b))
                rel = abs(got - oracle) / oracle
                worst = max(worst, rel)
                checked += 1
    report(
        6,
        "binomial-cdf-accuracy",
        worst <= 1e-9,
        f"worst relative error {worst:.2e} over {checked} grid points (<= 1e-9)",
    )


def test_criterion_07_recursive_workflow():
    three = Scenario("1|3|9", ((_G(0, 1), 600), (_G(0, 3), 600), (_G(0, 9), 600)))
    iid = Scenario("iid", ((_G(0, 1), 1800),))
    spec = RngSpec(90210)
    multi = sum(
        len(list(recursive_segmentation(generate_scenario(three, spec.trial_rng(t))).leaves())) >= 3
        for t in range(200)
    )
    spec2 = RngSpec(95210)
    single = sum(
        recursive_segmentation(generate_scenario(iid, spec2.trial_rng(t))).is_leaf
        for t in range(200)
    )
    ok = multi >= 160 and single >= 160
    report(
        7,
        "recursive-workflow",
        ok,
        f"three-regime >=3 leaves in {multi}/200 (>=160); iid single leaf in {single}/200 (>=160)",
    )


def test_criterion_08_stable_sampler_validity():
    n = 100_000
    sigma = 1.0
    stable = sample_stable(2.0, 0, sigma, 0, n, RngSpec(70001).trial_rng(0))
    gauss = sample_gaussian(0, np.sqrt(2) * sigma, n, RngSpec(70001).trial_rng(1))
    worst_z = 0.0
    for q in (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99):
        z_ref = sps.norm.ppf(q, scale=np.sqrt(2) * sigma)
        dens = sps.norm.pdf(z_ref, scale=np.sqrt(2) * sigma)
        se_diff = np.sqrt(2.0) * np.sqrt(q * (1 - q) / n) / dens
        z = abs(np.quantile(stable, q) - np.quantile(gauss, q)) / se_diff
        worst_z = max(worst_z, float(z))
    a = sample_stable(1.7, 0, 1.0, 0, 500, RngSpec(70002).trial_rng(0))
    b = sample_stable(1.7, 0, 2.0, 0, 500, RngSpec(70002).trial_rng(0))
    scale_exact = np.array_equal(b, 2.0 * a)
    report(
        8,
        "stable-sampler-validity",
        worst_z <= 3.0 and scale_exact,
        f"alpha=2 worst quantile gap {worst_z:.2f} SE (<= 3); doubled-scale draws bit-exact: {scale_exact}",
    )


def test_criterion_09_performance_and_accuracy():
    x = np.random.default_rng(8).normal(0, 1, 1_000_000)
    start = time.perf_counter()
    est = estimate_changepoint(x)
    elapsed = time.perf_counter() - start
    c = cumulative_squares(x).c
    # independent compensated oracle: pure-Python Neumaier running sum
    total = 0.0
    comp = 0.0
    worst = 0.0
    sq = (x * x).tolist()
    for i, v in enumerate(sq):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        if (i + 1) % 10_000 == 0 or i + 1 == len(sq):
            exact = total + comp
            worst = max(worst, abs(c[i] - exact) / exact)
    ok = elapsed < 1.0 and worst < 1e-12
    report(
        9,
        "performance",
        ok,
        f"1e6-point split estimate ({est.l_hat}) in {elapsed:.3f} s (< 1 s); "
        f"cumulative-squares relative error {worst:.2e} (< 1e-12)",
    )


def test_criterion_10_determinism(tmp_path):
    base = ["simulate", "table2", "--trials", "30", "--seed", "7", "--no-figures"]
    paths = [tmp_path / name for name in ("a.txt", "b.txt", "w1.txt", "w3.txt")]
    assert cli_main(base + ["--out", str(paths[0])]) == 0
    assert cli_main(base + ["--out", str(paths[1])]) == 0
    assert cli_main(base + ["--workers", "1", "--out", str(paths[2])]) == 0
    assert cli_main(base + ["--workers", "3", "--out", str(paths[3])]) == 0
    rerun_same = paths[0].read_bytes() == paths[1].read_bytes()
    workers_same = paths[2].read_bytes() == paths[3].read_bytes()
    base_same = paths[0].read_bytes() == paths[2].read_bytes()
    report(
        10,
        "determinism",
        rerun_same and workers_same and base_same,
        f"byte-identical reports: rerun {rerun_same}, 1 vs 3 workers {workers_same}, "
        f"default vs explicit workers {base_same}",
    )


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
