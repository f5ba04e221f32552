"""Finite-difference derivatives and the spatial Dirac operator on image grids."""

import numpy as np

from .clifford import CliffordNum, geometric_product


def central_diff(arr, axis, step):
    """Central difference along ``axis`` with edge-replicated padding.

    Interior points use ``(u[k+1] - u[k-1]) / (2 step)``; the two boundary
    points see a replicated neighbour, i.e. a half-weight one-sided difference.
    """
    arr = np.asarray(arr)
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (1, 1)
    p = np.pad(arr, pad, mode="edge")
    hi = [slice(None)] * arr.ndim
    lo = [slice(None)] * arr.ndim
    hi[axis] = slice(2, None)
    lo[axis] = slice(None, -2)
    return (p[tuple(hi)] - p[tuple(lo)]) / (2.0 * step)


def spatial_gradient(arr, dx, dy):
    """``(d/dx1, d/dx2)`` of an array whose last two axes are (rows = x2, cols = x1)."""
    return central_diff(arr, arr.ndim - 1, dx), central_diff(arr, arr.ndim - 2, dy)


def dirac_apply(x, dx=1.0, dy=1.0):
    """Left spatial Dirac operator ``sum_j e_j (d x / d x_j)`` of a Clifford field.

    ``x`` is a :class:`CliffordNum` over C^(2) or C^(3) whose coefficient
    arrays are images; only the two image axes are differentiated.
    """
    if not isinstance(x, CliffordNum) or len(x.shape) != 2:
        raise ValueError("dirac_apply expects a CliffordNum field with 2-D coefficient arrays")
    d1, d2 = spatial_gradient(x.coeffs, dx, dy)
    e1 = CliffordNum.blade(x.n, (1,))
    e2 = CliffordNum.blade(x.n, (2,))
    return geometric_product(e1, CliffordNum(x.n, d1)) + geometric_product(e2, CliffordNum(x.n, d2))
