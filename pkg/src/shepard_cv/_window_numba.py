"""numba-compiled windowed hat-kernel sums over sorted torus nodes."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _accumulate(nodes, values, x, h, i0, i1, acc):
    for i in range(i0, i1):
        d = abs(x - nodes[i])
        if d > 0.5:
            d = 1.0 - d
        w = 1.0 - h * d
        if w > 0.0:
            acc[0] += w
            acc[1] += w * values[i]


@njit(cache=True, nogil=True)
def hat_window_sums(nodes, values, queries, h):
    """Denominator and numerator of Shepard's model at each query point.

    nodes must be sorted ascending in [0, 1).  Only nodes inside the
    support window [x - 1/h, x + 1/h] (wrapped) are visited; summation is
    in ascending node index.
    """
    n = nodes.size
    m = queries.size
    den = np.zeros(m)
    num = np.zeros(m)
    r = 1.0 / h
    acc = np.zeros(2)
    for q in range(m):
        x = queries[q]
        acc[0] = 0.0
        acc[1] = 0.0
        if r >= 0.5:
            _accumulate(nodes, values, x, h, 0, n, acc)
        else:
            lo = x - r
            hi = x + r
            if lo >= 0.0 and hi <= 1.0:
                i0 = np.searchsorted(nodes, lo)
                i1 = np.searchsorted(nodes, hi)
                _accumulate(nodes, values, x, h, i0, i1, acc)
            else:
                if lo < 0.0:
                    i_head = np.searchsorted(nodes, hi)
                    i_tail = np.searchsorted(nodes, lo + 1.0)
                else:
                    i_head = np.searchsorted(nodes, hi - 1.0)
                    i_tail = np.searchsorted(nodes, lo)
                _accumulate(nodes, values, x, h, 0, i_head, acc)
                _accumulate(nodes, values, x, h, i_tail, n, acc)
        den[q] = acc[0]
        num[q] = acc[1]
    return den, num
