"""Geometry of the one-dimensional unit torus.

Points live in [0, 1) with wraparound distance.  A NodeSet keeps its
sample locations sorted and carries the cyclic gap structure, which makes
the mesh norm and all n leave-one-out mesh norms O(n) to compute.
"""

from __future__ import annotations

import numpy as np


def canonicalize(x):
    """Map positions into [0, 1) modulo 1 (scalar or array)."""
    return np.mod(x, 1.0)


def torus_distance(a, b):
    """Wraparound distance on the unit torus, in [0, 1/2]."""
    d = np.abs(canonicalize(a) - canonicalize(b))
    return np.minimum(d, 1.0 - d)


class NodeSet:
    """Immutable sorted sample locations with precomputed cyclic gaps."""

    __slots__ = ("nodes", "gaps")

    def __init__(self, points):
        pts = np.sort(canonicalize(np.asarray(points, dtype=np.float64)))
        if pts.size == 0:
            raise ValueError("NodeSet requires at least one node")
        if not np.all(np.isfinite(pts)):
            raise ValueError("nodes must be finite")
        gaps = np.empty_like(pts)
        gaps[:-1] = np.diff(pts)
        gaps[-1] = pts[0] + 1.0 - pts[-1]
        self.nodes = pts
        self.gaps = gaps
        self.nodes.flags.writeable = False
        self.gaps.flags.writeable = False

    def __len__(self):
        return self.nodes.size

    @classmethod
    def sample_uniform(cls, rng_seed, n) -> "NodeSet":
        """n iid uniform draws on [0, 1), sorted; bit-reproducible per seed.

        ``rng_seed`` may be anything numpy's SeedSequence accepts (an int or
        a sequence of ints for substreams).
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        rng = np.random.default_rng(rng_seed)
        return cls(rng.random(int(n)))

    def mesh_norm(self) -> float:
        """Largest distance from any torus point to its nearest node.

        Equals half the largest cyclic gap.
        """
        return float(np.max(self.gaps)) / 2.0

    def loo_mesh_norms(self) -> np.ndarray:
        """Mesh norm of the set with node i removed, for every i.

        Removing node i merges its two adjacent gaps; entry i is
        max(merged gap, largest untouched gap) / 2.
        """
        n = len(self)
        if n < 2:
            raise ValueError("leave-one-out mesh norms require >= 2 nodes")
        gaps = self.gaps
        # gap before node i is gaps[i-1] (cyclic), gap after is gaps[i]
        merged = gaps + np.roll(gaps, 1)
        # largest gap avoiding two given positions is always among the top 3
        top3 = np.argsort(gaps)[-3:][::-1]
        idx = np.arange(n)
        prev = (idx - 1) % n
        other = np.zeros(n)
        filled = np.zeros(n, dtype=bool)
        for j in top3:
            ok = ~filled & (idx != j) & (prev != j)
            other[ok] = gaps[j]
            filled |= ok
        return np.maximum(merged, other) / 2.0

    def xi_membership(self, h) -> bool:
        """True iff every leave-one-out mesh norm is strictly below 1/h."""
        if h <= 0:
            raise ValueError("h must be positive")
        return bool(np.max(self.loo_mesh_norms()) < 1.0 / h)
