"""Radial kernels with compact support [0, 1/h].

Only the hat kernel is built in.  User-supplied profiles must be
nonnegative, vanish for t >= 1/h, and accept numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .torus import torus_distance


@dataclass(frozen=True)
class KernelFamily:
    name: str
    h: float
    profile: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("support parameter h must be positive")

    @property
    def support_radius(self) -> float:
        return 1.0 / self.h

    def k0(self) -> float:
        """Profile value at distance zero (the self weight)."""
        return float(self.profile(np.float64(0.0)))

    def eval_pair(self, a, b):
        """Kernel value between two torus points (scalars or arrays)."""
        return self.profile(torus_distance(a, b))


def hat_kernel(h) -> KernelFamily:
    """Triangular profile t -> max(0, 1 - h*t), supported on [0, 1/h]."""
    h = float(h)
    if h <= 0:
        raise ValueError("support parameter h must be positive")
    return KernelFamily("hat", h, lambda t: np.maximum(0.0, 1.0 - h * t))


def kernel_by_name(name, h) -> KernelFamily:
    if name == "hat":
        return hat_kernel(h)
    raise ValueError(f"unknown kernel {name!r}")
