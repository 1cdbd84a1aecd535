"""Pure-numpy fallback for the windowed kernel sums.

Computes dense query-by-node blocks in chunks; O(n*m) but fully
vectorized.  Selected via SHEPARD_CV_BACKEND=numpy.
"""

import numpy as np

_CHUNK = 1024


def hat_window_sums(nodes, values, queries, h):
    m = queries.size
    den = np.empty(m)
    num = np.empty(m)
    for s in range(0, m, _CHUNK):
        e = min(s + _CHUNK, m)
        d = np.abs(queries[s:e, None] - nodes[None, :])
        np.minimum(d, 1.0 - d, out=d)
        w = 1.0 - h * d
        np.maximum(w, 0.0, out=w)
        den[s:e] = w.sum(axis=1)
        num[s:e] = w @ values
    return den, num


def profile_window_sums(nodes, values, queries, support_radius, profile):
    """Same contract for an arbitrary vectorized kernel profile."""
    m = queries.size
    den = np.empty(m)
    num = np.empty(m)
    for s in range(0, m, _CHUNK):
        e = min(s + _CHUNK, m)
        d = np.abs(queries[s:e, None] - nodes[None, :])
        np.minimum(d, 1.0 - d, out=d)
        w = np.where(d < support_radius, profile(d), 0.0)
        den[s:e] = w.sum(axis=1)
        num[s:e] = w @ values
    return den, num
