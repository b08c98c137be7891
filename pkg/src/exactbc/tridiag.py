"""Tridiagonal solves by Thomas elimination (no pivoting)."""
from __future__ import annotations

import numpy as np
from numba import njit


class ZeroPivotError(ArithmeticError):
    pass


@njit(cache=True)
def _thomas(lower, diag, upper, rhs):
    n = diag.shape[0]
    c = np.empty(n, dtype=np.complex128)
    x = np.empty(n, dtype=np.complex128)
    denom = diag[0]
    if denom == 0:
        return x, 0
    c[0] = upper[0] / denom
    x[0] = rhs[0] / denom
    for k in range(1, n):
        denom = diag[k] - lower[k] * c[k - 1]
        if denom == 0:
            return x, k
        c[k] = upper[k] / denom
        x[k] = (rhs[k] - lower[k] * x[k - 1]) / denom
    for k in range(n - 2, -1, -1):
        x[k] -= c[k] * x[k + 1]
    return x, -1


def solve_tridiagonal(lower, diag, upper, rhs):
    """Solve ``lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]``.

    ``lower[0]`` and ``upper[-1]`` are ignored.  Raises :class:`ZeroPivotError`
    on a vanishing pivot.
    """
    args = [np.ascontiguousarray(a, dtype=np.complex128) for a in (lower, diag, upper, rhs)]
    x, bad = _thomas(*args)
    if bad >= 0:
        raise ZeroPivotError(f"zero pivot in row {bad} of {len(args[1])}")
    return x


def diagonal_margin(lower, diag, upper) -> float:
    """Smallest ``|diag| - |lower| - |upper|`` over the rows."""
    off = np.abs(lower) + np.abs(upper)
    off[0] = abs(upper[0])
    off[-1] = abs(lower[-1])
    return float(np.min(np.abs(diag) - off))
