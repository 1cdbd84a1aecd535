"""Backend selection for the hot windowed-sum kernels.

SHEPARD_CV_BACKEND=numba forces the jit path, =numpy the vectorized
fallback; unset (or =auto) prefers numba when it imports.
"""

import os

_choice = os.environ.get("SHEPARD_CV_BACKEND", "auto").lower()

if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"SHEPARD_CV_BACKEND={_choice!r}, expected 'numba', 'numpy' or 'auto'"
    )

if _choice == "numpy":
    from ._window_numpy import hat_window_sums

    BACKEND = "numpy"
else:
    try:
        from ._window_numba import hat_window_sums

        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from ._window_numpy import hat_window_sums

        BACKEND = "numpy"

from ._window_numpy import profile_window_sums  # noqa: E402  (numpy-only path)

__all__ = ["hat_window_sums", "profile_window_sums", "BACKEND"]
