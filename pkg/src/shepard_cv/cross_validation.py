"""Leave-one-out cross-validation for Shepard's model.

loo_cv_fast computes every held-out prediction from one pass of windowed
kernel sums by subtracting the self term; loo_cv_naive builds the n
leave-one-out models explicitly and serves as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IsolatedNodeError
from .kernels import KernelFamily
from .shepard import POLICIES, SampleSet, ShepardModel
from .torus import NodeSet, torus_distance

# below this fraction of the full denominator the self-term subtraction
# has lost all precision and the node is treated as isolated
_CANCEL_GUARD = 1e-12


@dataclass(frozen=True)
class CvResult:
    score: float
    loo_predictions: np.ndarray
    skipped: list[int]


def _nearest_other_values(nodes: np.ndarray, values: np.ndarray, idx: np.ndarray):
    """Value of the closest other node; neighbors in sorted order suffice."""
    n = nodes.size
    prev = (idx - 1) % n
    nxt = (idx + 1) % n
    use_prev = torus_distance(nodes[idx], nodes[prev]) <= torus_distance(
        nodes[idx], nodes[nxt]
    )
    return values[np.where(use_prev, prev, nxt)]


def _finalize(values, preds, den_full, den_loo, num_loo, nodes, policy):
    isolated = den_loo <= _CANCEL_GUARD * den_full
    skipped = np.flatnonzero(isolated)
    if skipped.size and policy == "error":
        raise IsolatedNodeError(skipped.tolist())
    ok = ~isolated
    preds[ok] = num_loo[ok] / den_loo[ok]
    if skipped.size:
        preds[isolated] = _nearest_other_values(nodes, values, skipped)
    resid = preds - values
    score = float(np.mean(resid * resid))
    return CvResult(score, preds, skipped.tolist())


def loo_cv_fast(samples: SampleSet, kernel: KernelFamily, policy: str = "error") -> CvResult:
    """Single-pass cross-validation score via self-term subtraction."""
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}")
    n = len(samples)
    if n < 2:
        raise ValueError("cross-validation requires at least 2 samples")
    nodes = samples.nodes.nodes
    values = samples.values
    model = ShepardModel(samples, kernel, policy)
    den, num = model.window_sums(nodes)
    k0 = kernel.k0()
    den_loo = den - k0
    num_loo = num - k0 * values
    preds = np.empty(n)
    return _finalize(values, preds, den, den_loo, num_loo, nodes, policy)


def loo_cv_naive(samples: SampleSet, kernel: KernelFamily, policy: str = "error") -> CvResult:
    """Direct definition: n separate models, each evaluated at its held-out node."""
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}")
    n = len(samples)
    if n < 2:
        raise ValueError("cross-validation requires at least 2 samples")
    nodes = samples.nodes.nodes
    values = samples.values
    k0 = kernel.k0()
    den_loo = np.empty(n)
    num_loo = np.empty(n)
    for i in range(n):
        rest = SampleSet(NodeSet(np.delete(nodes, i)), np.delete(values, i))
        d, s = ShepardModel(rest, kernel, policy).window_sums(nodes[i : i + 1])
        den_loo[i] = d[0]
        num_loo[i] = s[0]
    preds = np.empty(n)
    return _finalize(values, preds, den_loo + k0, den_loo, num_loo, nodes, policy)
