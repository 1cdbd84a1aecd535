"""Closed-form probabilistic bounds.

Covers the alternating-sum bound on the leave-one-out mesh-norm event,
its Gumbel limit, the three concentration tail bounds (risk score,
cross-validation score, and their difference), the confidence-0.9 style
epsilon bounds, and the quantile bound for Shepard's model.

The alternating sum suffers catastrophic cancellation for large n: its
terms grow far beyond the final value before they cancel.  It is
evaluated with exact integer binomials and gmpy2 floats whose precision
is chosen from the largest term magnitude and then doubled until two
evaluations agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpz
from scipy.special import gammaln

from .errors import NumericInstabilityError, ValidityError, VacuousBoundError

PRECISION_CAP_BITS = 4096


@dataclass(frozen=True)
class BoundParams:
    n: int
    h: float
    lipschitz_L: float
    sup_norm_f: float
    C1: float | None = None
    C2: float | None = None
    gamma: float = 0.0
    M: float | None = None

    def __post_init__(self):
        if self.n < 1 or self.h <= 0 or self.lipschitz_L < 0 or self.sup_norm_f < 0:
            raise ValueError("invalid bound parameters")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.C1 is None:
            object.__setattr__(self, "C1", self.lipschitz_L / self.h)
        if self.C2 is None:
            object.__setattr__(self, "C2", 2.0 * self.C1)
        if self.M is None:
            object.__setattr__(self, "M", self.sup_norm_f)
        if self.C1 < 0 or self.C2 < 0 or self.M < 0:
            raise ValueError("constants must be nonnegative")


@dataclass(frozen=True)
class GammaResult:
    value: float
    method: str  # "exact_sum" or "gumbel"
    precision_bits: int


def gamma_gumbel(n: int, h: float) -> GammaResult:
    """Large-n limit 1 - exp(-n*exp(-n/(2h))) of the mesh-norm event bound."""
    if n < 1 or h <= 0:
        raise ValueError("require n >= 1 and h > 0")
    inner = n * math.exp(-n / (2.0 * h))
    value = -math.expm1(-inner)
    return GammaResult(min(max(value, 0.0), 1.0), "gumbel", 53)


def _alternating_sum(n: int, h: float, n_terms: int, precision: int) -> float:
    with gmpy2.context(gmpy2.get_context(), precision=precision):
        g = 1 / (2 * mpfr(h))
        total = mpfr(0)
        binom = mpz(n)
        for k in range(1, n_terms + 1):
            term = binom * (1 - k * g) ** (n - 1)
            total = total + term if k % 2 else total - term
            binom = binom * (n - k) // (k + 1)
        return float(min(max(total, 0), 1))


def gamma_upper(
    n: int,
    h: float,
    gumbel_fallback: bool = False,
    max_bits: int = PRECISION_CAP_BITS,
) -> GammaResult:
    """Alternating binomial bound on P{some leave-one-out mesh norm > 1/h}.

    Evaluated term-by-term in high-precision arithmetic; the working
    precision starts at the magnitude of the largest term plus 64 bits
    and doubles until two successive evaluations agree (1e-9 relative or
    1e-12 absolute).  Beyond ``max_bits`` the call raises, or returns the
    Gumbel limit when ``gumbel_fallback`` is set.
    """
    if n < 2 or h <= 0:
        raise ValueError("require n >= 2 and h > 0")
    n_terms = min(int(math.floor(h)), n)
    if n_terms < 1:
        return GammaResult(0.0, "exact_sum", 0)

    k = np.arange(1, n_terms + 1, dtype=np.float64)
    log_terms = (
        gammaln(n + 1.0)
        - gammaln(k + 1.0)
        - gammaln(n - k + 1.0)
        + (n - 1.0) * np.log1p(-k / (2.0 * h))
    )
    needed = int(max(log_terms.max(), 0.0) / math.log(2.0)) + 64
    precision = max(needed, 64 + int(n * math.log2(math.e) / 1000.0) + 1)

    def _overflow():
        fallback = gamma_gumbel(n, h)
        if gumbel_fallback:
            return fallback
        raise NumericInstabilityError(
            f"gamma_upper(n={n}, h={h}) needs more than {max_bits} bits",
            fallback.value,
        )

    if precision > max_bits:
        return _overflow()
    prev = _alternating_sum(n, h, n_terms, precision)
    while True:
        next_precision = min(2 * precision, max_bits)
        if next_precision == precision:
            return _overflow()
        cur = _alternating_sum(n, h, n_terms, next_precision)
        if abs(cur - prev) <= max(1e-9 * abs(cur), 1e-12):
            return GammaResult(cur, "exact_sum", next_precision)
        prev, precision = cur, next_precision


def _validity_threshold(kind: str, p: BoundParams) -> float:
    base = 2.0 * p.gamma * p.n * p.C1 * p.C2
    if kind == "risk":
        return base
    if kind == "cv":
        return base + p.gamma * p.C1**2
    if kind == "diff":
        return 2.0 * p.gamma * max(
            4.0 * p.n * p.C1 * p.C2 + p.C1**2, (p.M + p.sup_norm_f) ** 2
        )
    raise ValueError(f"unknown bound kind {kind!r}")


def tail_probability(
    kind: str, eps: float, p: BoundParams, use_two_constants: bool = False
) -> float:
    """Right-hand side of the concentration theorem for the given quantity.

    kind "risk" bounds deviations of the risk score, "cv" of the
    cross-validation score (n >= 5 in the one-constant form), "diff" of
    their difference (n >= 3 in the one-constant form).
    """
    threshold = _validity_threshold(kind, p)
    if eps <= threshold:
        raise ValidityError(eps, threshold)
    sqrt_n = math.sqrt(p.n)
    if use_two_constants:
        if kind == "risk":
            scaled = eps / (math.sqrt(2.0 * p.n) * p.C1 * p.C2)
        elif kind == "cv":
            scaled = math.sqrt(2.0) * eps / (p.C1 * (p.C1 / sqrt_n + 2.0 * sqrt_n * p.C2))
        else:
            scaled = eps / (math.sqrt(2.0) * p.C1 * (p.C1 / sqrt_n + 4.0 * sqrt_n * p.C2))
    else:
        if kind == "risk":
            scaled = eps / (math.sqrt(8.0 * p.n) * p.C1**2)
        elif kind == "cv":
            if p.n < 5:
                raise ValueError("one-constant cv bound requires n >= 5")
            scaled = eps / (3.0 * sqrt_n * p.C1**2)
        else:
            if p.n < 3:
                raise ValueError("one-constant diff bound requires n >= 3")
            scaled = eps / (12.0 * sqrt_n * p.C1**2)
    arg = scaled - math.sqrt(2.0 * p.n) * p.gamma
    value = 2.0 * p.gamma + 2.0 * math.exp(-(arg**2))
    return min(max(value, 0.0), 1.0)


def epsilon_bound(
    alpha: float, L: float, h: float, n: int, gamma: float, p_fail: float
) -> float:
    """Deviation radius certified at confidence 1 - p_fail.

    alpha is sqrt(8) for the risk score, 3 for the cross-validation
    score, and 12 for their difference.
    """
    if h <= 0 or not 0.0 < p_fail < 1.0:
        raise ValueError("require h > 0 and p_fail in (0, 1)")
    if gamma >= p_fail / 2.0:
        raise VacuousBoundError(gamma, p_fail)
    return (
        alpha
        * L**2
        / h**2
        * (math.sqrt(2.0) * n * gamma + math.sqrt(-n * math.log(p_fail / 2.0 - gamma)))
    )


def quantile_bound_shepard(p: BoundParams, delta: float) -> float:
    """Bound on |CV - risk| holding with probability > 1 - 2*(gamma + delta)."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if p.gamma + delta >= 0.5:
        raise ValueError("require gamma + delta < 1/2")
    term_outside = 4.0 * p.gamma * p.sup_norm_f**2
    term_tail = (
        12.0
        * math.sqrt(p.n)
        * p.lipschitz_L**2
        / p.h**2
        * (math.sqrt(2.0 * p.n) * p.gamma + math.sqrt(-math.log(delta)))
    )
    return max(term_outside, term_tail)
