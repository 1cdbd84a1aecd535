"""Exception types shared across the package."""


class UncoveredPointError(ValueError):
    """Evaluation point has no node inside the kernel support."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"no node within kernel support of point {point!r}")


class IsolatedNodeError(ValueError):
    """Leave-one-out denominator vanishes at these node indices."""

    def __init__(self, indices):
        self.indices = list(indices)
        super().__init__(f"isolated nodes at indices {self.indices}")


class ValidityError(ValueError):
    """The requested deviation eps is below the theorem's validity threshold."""

    def __init__(self, eps, threshold):
        self.eps = eps
        self.threshold = threshold
        super().__init__(
            f"eps={eps!r} does not exceed the validity threshold {threshold!r}"
        )


class VacuousBoundError(ValueError):
    """The confidence level cannot be certified (gamma >= p_fail/2)."""

    def __init__(self, gamma, p_fail):
        self.gamma = gamma
        self.p_fail = p_fail
        super().__init__(
            f"gamma={gamma!r} >= p_fail/2={p_fail / 2!r}: bound is vacuous"
        )


class NumericInstabilityError(ArithmeticError):
    """Precision escalation hit the cap without two evaluations agreeing.

    Carries the best available estimate (the Gumbel limit value).
    """

    def __init__(self, message, best_estimate):
        self.best_estimate = best_estimate
        super().__init__(message)
