"""Acceptance gate: one test per release criterion.

Each test records a single pass/fail line, echoed in the terminal
summary after the run (and immediately under ``pytest -s``), then
asserts.
"""

import math
import sys
import time

from _acceptance_log import VERDICTS

import numpy as np
import pytest

from shepard_cv.bounds import gamma_gumbel, gamma_upper
from shepard_cv.cross_validation import loo_cv_fast, loo_cv_naive
from shepard_cv.experiment import (
    ExperimentConfig,
    estimate_event_probability,
    run_experiment,
)
from shepard_cv.io_csv import write_aggregates_csv, write_records_csv
from shepard_cv.kernels import hat_kernel
from shepard_cv.shepard import SampleSet, ShepardModel
from shepard_cv.shepard import test_function_preset as function_preset
from shepard_cv.torus import NodeSet


def report(name: str, ok: bool, detail: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    line = f"[acceptance] {name}: {verdict} ({detail})"
    VERDICTS.append(line)
    print(line, file=sys.__stdout__, flush=True)
    assert ok, f"{name}: {detail}"


DESK_CONFIG = ExperimentConfig(
    n=2000,
    trials=200,
    h_grid=[float(v) for v in np.geomspace(40.0, 90.0, 20)],
    seed=1,
    test_function="sine",
    gamma_source="exact_sum",
    p_fail=0.1,
    policy="nearest_node",
)


@pytest.fixture(scope="module")
def desk_runs(tmp_path_factory):
    """The reference-scale experiment executed twice with identical seeds."""
    out = {}
    start = time.perf_counter()
    for tag in ("first", "second"):
        records, aggregates = run_experiment(DESK_CONFIG)
        root = tmp_path_factory.mktemp(f"desk_{tag}")
        write_records_csv(records, root / "records.csv")
        write_aggregates_csv(aggregates, root / "aggregates.csv")
        out[tag] = {
            "aggregates": aggregates,
            "records_bytes": (root / "records.csv").read_bytes(),
            "aggregates_bytes": (root / "aggregates.csv").read_bytes(),
        }
    out["elapsed_one_run"] = (time.perf_counter() - start) / 2.0
    return out


def test_fast_cv_oracle_equivalence():
    start = time.perf_counter()
    fn = function_preset("sine")
    rng = np.random.default_rng(101)
    worst = 0.0
    count = 0
    for n in (10, 50, 200, 500):
        for _ in range(50):
            h = float(np.exp(rng.uniform(math.log(2.0), math.log(2.0 * n))))
            nodes = NodeSet(rng.random(n))
            samples = SampleSet(nodes, fn(nodes.nodes))
            kernel = hat_kernel(h)
            fast = loo_cv_fast(samples, kernel, "nearest_node")
            naive = loo_cv_naive(samples, kernel, "nearest_node")
            scale = np.maximum(np.abs(naive.loo_predictions), 1e-2)
            worst = max(
                worst,
                float(
                    np.max(np.abs(fast.loo_predictions - naive.loo_predictions) / scale)
                ),
                abs(fast.score - naive.score) / max(abs(naive.score), 1e-2),
            )
            count += 1
    elapsed = time.perf_counter() - start
    report(
        "fast-cv-oracle-equivalence",
        count == 200 and worst <= 1e-10 and elapsed < 60.0,
        f"200 instances, worst relative deviation {worst:.3e}, {elapsed:.1f}s",
    )


def test_uniform_error_lemma():
    fn = function_preset("sine-analytic")
    rng = np.random.default_rng(202)
    worst_margin = -math.inf
    for _ in range(100):
        n = int(rng.integers(50, 401))
        nodes = NodeSet(rng.random(n))
        h = 0.95 / float(np.max(nodes.loo_mesh_norms()))
        assert nodes.xi_membership(h)
        model = ShepardModel(SampleSet(nodes, fn(nodes.nodes)), hat_kernel(h), "error")
        sup = model.sup_error(fn, 10 * n)
        limit = fn.lipschitz_L / h + fn.lipschitz_L / (10 * n)
        worst_margin = max(worst_margin, sup - limit)
    report(
        "uniform-error-lemma",
        worst_margin <= 0.0,
        f"100 sets, worst sup_error minus limit {worst_margin:.3e}",
    )


def test_convex_hull_invariant():
    rng = np.random.default_rng(303)
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(2, 101))
        nodes = NodeSet(rng.random(n))
        values = rng.normal(size=n)
        h = float(rng.uniform(1.0, 2.0 * n))
        model = ShepardModel(SampleSet(nodes, values), hat_kernel(h), "nearest_node")
        v = model.evaluate(float(rng.random()))
        span = max(values.max() - values.min(), 1.0)
        if v < values.min() - 1e-12 * span or v > values.max() + 1e-12 * span:
            violations += 1
    report(
        "convex-hull-invariant",
        violations == 0,
        f"1000 pairs, {violations} violations",
    )


def test_expected_value_identity():
    start = time.perf_counter()
    fn = function_preset("sine")
    n, h, trials = 20, 5.0, 50_000
    kernel = hat_kernel(h)
    cv_scores = np.empty(trials)
    for i in range(trials):
        nodes = NodeSet.sample_uniform([202608, 0, i], n)
        cv_scores[i] = loo_cv_fast(
            SampleSet(nodes, fn(nodes.nodes)), kernel, "nearest_node"
        ).score
    risks = np.empty(trials)
    for i in range(trials):
        nodes = NodeSet.sample_uniform([202608, 1, i], n - 1)
        model = ShepardModel(SampleSet(nodes, fn(nodes.nodes)), kernel, "nearest_node")
        risks[i] = model.risk_estimate(fn, 10 * (n - 1))
    se = math.sqrt(cv_scores.var(ddof=1) / trials + risks.var(ddof=1) / trials)
    z = (cv_scores.mean() - risks.mean()) / se
    elapsed = time.perf_counter() - start
    report(
        "expected-value-identity",
        abs(z) <= 3.0 and elapsed < 120.0,
        f"mean cv {cv_scores.mean():.5f}, mean risk {risks.mean():.5f}, "
        f"z {z:.2f}, {elapsed:.1f}s",
    )


def test_bound_dominance():
    n, trials = 1000, 2000
    hs = [float(v) for v in np.geomspace(40.0, 140.0, 15)]
    worst_margin = -math.inf
    for h, emp in estimate_event_probability(n, hs, trials, seed=5):
        se = math.sqrt(max(emp * (1.0 - emp), 1e-12) / trials)
        bound = gamma_upper(n, h).value
        worst_margin = max(worst_margin, (emp - 3.0 * se) - bound)
    report(
        "bound-dominance",
        worst_margin <= 0.0,
        f"15 h-values, worst (empirical - 3SE) minus bound {worst_margin:.3e}",
    )


def test_gumbel_agreement():
    n = 10_000
    hs = np.geomspace(300.0, 2500.0, 100)
    diffs = [
        abs(gamma_upper(n, float(h)).value - gamma_gumbel(n, float(h)).value)
        for h in hs
    ]
    worst = max(diffs)
    report(
        "gumbel-agreement",
        worst <= 0.02,
        f"100-point grid in [300, 2500], max |difference| {worst:.5f}",
    )


def test_transition_brackets():
    n, trials = 10_000, 500
    hs = [500.0, 800.0, 1000.0, 1300.0, 2000.0]
    emp = dict(estimate_event_probability(n, hs, trials, seed=9))
    dominated = all(gamma_upper(n, h).value >= emp[h] for h in hs)
    report(
        "transition-brackets",
        emp[800.0] <= 0.1 and emp[1300.0] >= 0.9 and dominated,
        f"empirical at h=800 {emp[800.0]:.3f}, at h=1300 {emp[1300.0]:.3f}, "
        f"bound dominates pointwise {dominated}",
    )


def test_desk_scale_difference_bound(desk_runs):
    aggregates = desk_runs["first"]["aggregates"]
    gammas = [row.gamma for row in aggregates]
    margins = [row.eps_diff - row.q90_absdiff for row in aggregates]
    elapsed = desk_runs["elapsed_one_run"]
    report(
        "desk-scale-difference-bound",
        all(g < DESK_CONFIG.p_fail / 2.0 for g in gammas)
        and all(m >= 0.0 for m in margins)
        and elapsed <= 300.0,
        f"20 h-values, max gamma {max(gammas):.4f}, "
        f"min (bound - q90_absdiff) {min(margins):.3e}, {elapsed:.0f}s per run",
    )


def test_numerical_robustness():
    grids = {
        100: (2.0, 16.0, False),
        1000: (10.0, 250.0, False),
        10_000: (100.0, 2500.0, False),
        100_000: (1000.0, 25_000.0, True),
    }
    ok = True
    details = []
    for n, (lo, hi, allow_fallback) in grids.items():
        values = [
            gamma_upper(n, float(h), gumbel_fallback=allow_fallback).value
            for h in np.geomspace(lo, hi, 50)
        ]
        finite = all(math.isfinite(v) and 0.0 <= v <= 1.0 for v in values)
        monotone = all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        ok = ok and finite and monotone
        details.append(f"n={n} finite={finite} monotone={monotone}")
    report("numerical-robustness", ok, "; ".join(details))


def test_determinism(desk_runs):
    same_records = desk_runs["first"]["records_bytes"] == desk_runs["second"]["records_bytes"]
    same_aggregates = (
        desk_runs["first"]["aggregates_bytes"] == desk_runs["second"]["aggregates_bytes"]
    )
    report(
        "determinism",
        same_records and same_aggregates,
        f"records byte-identical {same_records}, aggregates byte-identical {same_aggregates}",
    )
