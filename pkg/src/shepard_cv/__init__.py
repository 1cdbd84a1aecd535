"""Shepard scattered-data approximation on the unit torus with fast
leave-one-out cross-validation and concentration-bound calculators."""

from ._backend import BACKEND
from .bounds import (
    BoundParams,
    GammaResult,
    epsilon_bound,
    gamma_gumbel,
    gamma_upper,
    quantile_bound_shepard,
    tail_probability,
)
from .cross_validation import CvResult, loo_cv_fast, loo_cv_naive
from .experiment import (
    AggregateRow,
    ExperimentConfig,
    ExperimentRecord,
    estimate_event_probability,
    quantile,
    run_experiment,
)
from .kernels import KernelFamily, hat_kernel, kernel_by_name
from .shepard import (
    SampleSet,
    ShepardModel,
    TestFunction,
    fit,
    test_function_preset,
)
from .torus import NodeSet, canonicalize, torus_distance

__all__ = [
    "BACKEND",
    "AggregateRow",
    "BoundParams",
    "CvResult",
    "ExperimentConfig",
    "ExperimentRecord",
    "GammaResult",
    "KernelFamily",
    "NodeSet",
    "SampleSet",
    "ShepardModel",
    "TestFunction",
    "canonicalize",
    "epsilon_bound",
    "estimate_event_probability",
    "fit",
    "gamma_gumbel",
    "gamma_upper",
    "hat_kernel",
    "kernel_by_name",
    "loo_cv_fast",
    "loo_cv_naive",
    "quantile",
    "quantile_bound_shepard",
    "run_experiment",
    "tail_probability",
    "test_function_preset",
    "torus_distance",
]

__version__ = "0.1.0"
