"""Seeded Monte Carlo harness for the cross-validation vs risk experiment.

Each (h, trial) pair gets its own RNG substream derived from
(seed, h_index, trial), so results are independent of execution order
and identical across runs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import math

import numpy as np

from .bounds import epsilon_bound, gamma_gumbel, gamma_upper
from .cross_validation import loo_cv_fast
from .errors import VacuousBoundError
from .kernels import hat_kernel
from .shepard import SampleSet, ShepardModel, test_function_preset
from .torus import NodeSet

ALPHA_RISK = math.sqrt(8.0)
ALPHA_CV = 3.0
ALPHA_DIFF = 12.0

GAMMA_SOURCES = ("exact_sum", "gumbel", "monte_carlo")


def default_h_grid(count: int = 50, lo: float = 50.0, hi: float = 2500.0) -> list[float]:
    return [float(v) for v in np.geomspace(lo, hi, count)]


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    trials: int
    h_grid: list[float] = field(default_factory=default_h_grid)
    seed: int = 0
    grid_size: int | None = None  # risk quadrature; defaults to 10*n
    test_function: str = "sine"
    gamma_source: str = "monte_carlo"
    p_fail: float = 0.1
    policy: str = "nearest_node"

    def __post_init__(self):
        if self.n < 2 or self.trials < 1:
            raise ValueError("require n >= 2 and trials >= 1")
        if not self.h_grid or any(h <= 0 for h in self.h_grid):
            raise ValueError("h_grid must be nonempty with positive entries")
        if not 0.0 < self.p_fail < 1.0:
            raise ValueError("p_fail must lie in (0, 1)")
        if self.gamma_source not in GAMMA_SOURCES:
            raise ValueError(f"gamma_source must be one of {GAMMA_SOURCES}")
        if self.grid_size is not None and self.grid_size < 1:
            raise ValueError("grid_size must be >= 1")

    @property
    def risk_grid_size(self) -> int:
        return self.grid_size if self.grid_size is not None else 10 * self.n

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class ExperimentRecord:
    h: float
    trial: int
    cv: float
    risk: float
    in_xi: bool
    skipped_count: int


@dataclass(frozen=True)
class AggregateRow:
    h: float
    mean_cv: float
    mean_risk: float
    q05_cv: float
    q95_cv: float
    q05_risk: float
    q95_risk: float
    q90_absdiff: float
    gamma: float
    eps_risk: float
    eps_cv: float
    eps_diff: float


def quantile(values, q: float) -> float:
    """Order statistic at position ceil(q*len), clamped to the data range."""
    arr = np.sort(np.asarray(values, dtype=np.float64))
    if arr.size == 0:
        raise ValueError("quantile of empty list")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    idx = min(max(math.ceil(q * arr.size) - 1, 0), arr.size - 1)
    return float(arr[idx])


def _worker_count() -> int:
    raw = os.environ.get("SHEPARD_CV_THREADS", "1")
    count = int(raw)
    if count < 1:
        raise ValueError("SHEPARD_CV_THREADS must be >= 1")
    return count


def _run_trial(cfg: ExperimentConfig, f, h: float, h_index: int, trial: int) -> ExperimentRecord:
    nodes = NodeSet.sample_uniform([cfg.seed, h_index, trial], cfg.n)
    samples = SampleSet.from_function(nodes, f)
    kernel = hat_kernel(h)
    cv = loo_cv_fast(samples, kernel, cfg.policy)
    risk = ShepardModel(samples, kernel, cfg.policy).risk_estimate(f, cfg.risk_grid_size)
    return ExperimentRecord(
        h=h,
        trial=trial,
        cv=cv.score,
        risk=risk,
        in_xi=nodes.xi_membership(h),
        skipped_count=len(cv.skipped),
    )


def _gamma_for(cfg: ExperimentConfig, h: float, records: list[ExperimentRecord]) -> float:
    if cfg.gamma_source == "exact_sum":
        return gamma_upper(cfg.n, h, gumbel_fallback=True).value
    if cfg.gamma_source == "gumbel":
        return gamma_gumbel(cfg.n, h).value
    return 1.0 - float(np.mean([r.in_xi for r in records]))


def _epsilon_or_inf(alpha, L, h, n, gamma, p_fail) -> float:
    try:
        return epsilon_bound(alpha, L, h, n, gamma, p_fail)
    except VacuousBoundError:
        return math.inf


def run_experiment(cfg: ExperimentConfig):
    """All per-(h, trial) records plus one aggregate row per h."""
    f = test_function_preset(cfg.test_function)
    tasks = [
        (h, h_index, trial)
        for h_index, h in enumerate(cfg.h_grid)
        for trial in range(cfg.trials)
    ]
    workers = _worker_count()
    if workers == 1:
        records = [_run_trial(cfg, f, h, hi, t) for h, hi, t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(lambda args: _run_trial(cfg, f, *args), tasks)
            )

    aggregates = []
    for h_index, h in enumerate(cfg.h_grid):
        chunk = records[h_index * cfg.trials : (h_index + 1) * cfg.trials]
        cvs = [r.cv for r in chunk]
        risks = [r.risk for r in chunk]
        absdiff = [abs(r.cv - r.risk) for r in chunk]
        gamma = _gamma_for(cfg, h, chunk)
        L = f.lipschitz_L
        aggregates.append(
            AggregateRow(
                h=h,
                mean_cv=float(np.mean(cvs)),
                mean_risk=float(np.mean(risks)),
                q05_cv=quantile(cvs, 0.05),
                q95_cv=quantile(cvs, 0.95),
                q05_risk=quantile(risks, 0.05),
                q95_risk=quantile(risks, 0.95),
                q90_absdiff=quantile(absdiff, 0.90),
                gamma=gamma,
                eps_risk=_epsilon_or_inf(ALPHA_RISK, L, h, cfg.n, gamma, cfg.p_fail),
                eps_cv=_epsilon_or_inf(ALPHA_CV, L, h, cfg.n, gamma, cfg.p_fail),
                eps_diff=_epsilon_or_inf(ALPHA_DIFF, L, h, cfg.n, gamma, cfg.p_fail),
            )
        )
    return records, aggregates


def estimate_event_probability(n: int, h_grid, trials: int, seed: int):
    """Fraction of trials whose mesh norm exceeds 1/(2h).

    This is the covering event whose probability the alternating-sum
    bound evaluates; it contains the leave-one-out event tested by
    xi_membership, so the bound dominates both.  One node draw per trial
    is shared across the whole h grid (the event is a threshold on the
    same statistic).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    mesh = np.empty(trials)
    for t in range(trials):
        nodes = NodeSet.sample_uniform([seed, t], n)
        mesh[t] = nodes.mesh_norm()
    return [(float(h), float(np.mean(mesh > 0.5 / h))) for h in h_grid]
