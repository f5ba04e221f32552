"""Direct-summation kernels behind the quadrature oracles.

Every kernel has an explicit-loop version compiled with numba and a
vectorized numpy version.  The public wrappers pick one per call through
:func:`monolct._accel.numba_enabled`, so setting ``MONOLCT_NUMBA=0`` switches
the whole package to pure numpy.  Each output element is accumulated
serially in index order, so results do not depend on the thread count.
"""

import math

import numpy as np

from ._accel import apply_thread_cap, jit, numba_enabled, prange

_CHUNK = 256


# LCT kernel sum ----------------------------------------------------------


@jit
def _lct_direct_sum_nb(x, fw, omegas, a, b, d):
    m = omegas.size
    out = np.empty(m, dtype=np.complex128)
    for k in prange(m):
        w = omegas[k]
        acc = 0j
        for j in range(x.size):
            phase = (d * w * w - 2.0 * w * x[j] + a * x[j] * x[j]) / (2.0 * b)
            acc += fw[j] * complex(math.cos(phase), math.sin(phase))
        out[k] = acc
    return out


def _lct_direct_sum_np(x, fw, omegas, a, b, d):
    out = np.empty(omegas.size, dtype=np.complex128)
    for s in range(0, omegas.size, _CHUNK):
        w = omegas[s : s + _CHUNK, None]
        phase = (d * w * w - 2.0 * w * x[None, :] + a * x[None, :] ** 2) / (2.0 * b)
        out[s : s + _CHUNK] = np.exp(1j * phase) @ fw
    return out


def lct_direct_sum(x, fw, omegas, a, b, d):
    """``sum_j fw_j exp(i (d w^2 - 2 w x_j + a x_j^2) / (2b))`` for each ``w``."""
    args = (
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(fw, dtype=np.complex128),
        np.ascontiguousarray(omegas, dtype=np.float64),
        float(a),
        float(b),
        float(d),
    )
    if numba_enabled():
        apply_thread_cap()
        return _lct_direct_sum_nb(*args)
    return _lct_direct_sum_np(*args)


# 1-D principal-value Hilbert sum ---------------------------------------------------


@jit
def _hilbert_pv_nb(x, g, dx):
    n = x.size
    out = np.empty(n, dtype=np.complex128)
    for i in prange(n):
        acc = 0j
        for j in range(n):
            if j != i:
                acc += g[j] / (x[i] - x[j])
        out[i] = acc * dx / math.pi
    return out


def _hilbert_pv_np(x, g, dx):
    out = np.empty(x.size, dtype=np.complex128)
    for s in range(0, x.size, _CHUNK):
        diff = x[s : s + _CHUNK, None] - x[None, :]
        with np.errstate(divide="ignore"):
            inv = np.where(diff == 0, 0.0, 1.0 / np.where(diff == 0, 1.0, diff))
        out[s : s + _CHUNK] = inv @ g
    return out * dx / np.pi


def hilbert_pv_sum(x, g, dx):
    """``(1/pi) sum_{j != i} g_j dx / (x_i - x_j)``: p.v. sum with the singular cell removed."""
    args = (
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(g, dtype=np.complex128),
        float(dx),
    )
    if numba_enabled():
        apply_thread_cap()
        return _hilbert_pv_nb(*args)
    return _hilbert_pv_np(*args)


# 1-D Poisson / conjugate Poisson integrals -------------------------------------


@jit
def _poisson_1d_nb(t, gw, xs, ys):
    m = xs.size
    P = np.empty(m, dtype=np.complex128)
    Q = np.empty(m, dtype=np.complex128)
    for k in prange(m):
        accp = 0j
        accq = 0j
        for j in range(t.size):
            u = xs[k] - t[j]
            den = math.pi * (u * u + ys[k] * ys[k])
            accp += gw[j] * (ys[k] / den)
            accq += gw[j] * (u / den)
        P[k] = accp
        Q[k] = accq
    return P, Q


def _poisson_1d_np(t, gw, xs, ys):
    P = np.empty(xs.size, dtype=np.complex128)
    Q = np.empty(xs.size, dtype=np.complex128)
    for s in range(0, xs.size, _CHUNK):
        u = xs[s : s + _CHUNK, None] - t[None, :]
        y = ys[s : s + _CHUNK, None]
        den = np.pi * (u * u + y * y)
        P[s : s + _CHUNK] = (y / den) @ gw
        Q[s : s + _CHUNK] = (u / den) @ gw
    return P, Q


def poisson_1d_sum(t, gw, xs, ys):
    """Poisson and conjugate-Poisson sums of weighted samples ``gw`` at points ``(xs, ys)``."""
    args = (
        np.ascontiguousarray(t, dtype=np.float64),
        np.ascontiguousarray(gw, dtype=np.complex128),
        np.ascontiguousarray(xs, dtype=np.float64),
        np.ascontiguousarray(ys, dtype=np.float64),
    )
    if numba_enabled():
        apply_thread_cap()
        return _poisson_1d_nb(*args)
    return _poisson_1d_np(*args)


# 2-D Riesz principal-value sum -------------------------------------------------------

# Gamma(3/2) / pi^(3/2)
RIESZ_2D_CONST = 0.5 / np.pi


@jit
def _riesz_pv_2d_nb(x1, x2, gw):
    n = x1.size
    r1 = np.empty(n, dtype=np.complex128)
    r2 = np.empty(n, dtype=np.complex128)
    for p in prange(n):
        acc1 = 0j
        acc2 = 0j
        for q in range(n):
            if q != p:
                u1 = x1[p] - x1[q]
                u2 = x2[p] - x2[q]
                r = math.sqrt(u1 * u1 + u2 * u2)
                w = gw[q] / (r * r * r)
                acc1 += u1 * w
                acc2 += u2 * w
        r1[p] = acc1
        r2[p] = acc2
    return r1, r2


def _riesz_pv_2d_np(x1, x2, gw):
    n = x1.size
    r1 = np.empty(n, dtype=np.complex128)
    r2 = np.empty(n, dtype=np.complex128)
    for s in range(0, n, _CHUNK):
        u1 = x1[s : s + _CHUNK, None] - x1[None, :]
        u2 = x2[s : s + _CHUNK, None] - x2[None, :]
        r2_ = u1 * u1 + u2 * u2
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(r2_ == 0, 0.0, r2_ ** -1.5)
        r1[s : s + _CHUNK] = (u1 * inv) @ gw
        r2[s : s + _CHUNK] = (u2 * inv) @ gw
    return r1, r2


def riesz_pv_2d_sum(x1, x2, gw):
    """``sum_{q != p} (x_p - x_q) gw_q / |x_p - x_q|^3`` for every grid point p (both components)."""
    args = (
        np.ascontiguousarray(x1, dtype=np.float64),
        np.ascontiguousarray(x2, dtype=np.float64),
        np.ascontiguousarray(gw, dtype=np.complex128),
    )
    if numba_enabled():
        apply_thread_cap()
        r1, r2 = _riesz_pv_2d_nb(*args)
    else:
        r1, r2 = _riesz_pv_2d_np(*args)
    return r1 * RIESZ_2D_CONST, r2 * RIESZ_2D_CONST


# 2-D Poisson / conjugate Poisson in the upper half space ------------------------------------------


@jit
def _poisson_2d_nb(t1, t2, gw, x1, x2, x0):
    m = x1.size
    P = np.empty(m, dtype=np.complex128)
    Q1 = np.empty(m, dtype=np.complex128)
    Q2 = np.empty(m, dtype=np.complex128)
    for p in prange(m):
        accp = 0j
        acc1 = 0j
        acc2 = 0j
        for q in range(t1.size):
            u1 = x1[p] - t1[q]
            u2 = x2[p] - t2[q]
            s = x0 * x0 + u1 * u1 + u2 * u2
            w = gw[q] / (s * math.sqrt(s))
            accp += x0 * w
            acc1 -= u1 * w
            acc2 -= u2 * w
        P[p] = accp
        Q1[p] = acc1
        Q2[p] = acc2
    return P, Q1, Q2


def _poisson_2d_np(t1, t2, gw, x1, x2, x0):
    m = x1.size
    P = np.empty(m, dtype=np.complex128)
    Q1 = np.empty(m, dtype=np.complex128)
    Q2 = np.empty(m, dtype=np.complex128)
    for s in range(0, m, _CHUNK):
        u1 = x1[s : s + _CHUNK, None] - t1[None, :]
        u2 = x2[s : s + _CHUNK, None] - t2[None, :]
        inv = (x0 * x0 + u1 * u1 + u2 * u2) ** -1.5
        P[s : s + _CHUNK] = (x0 * inv) @ gw
        Q1[s : s + _CHUNK] = (-u1 * inv) @ gw
        Q2[s : s + _CHUNK] = (-u2 * inv) @ gw
    return P, Q1, Q2


def poisson_2d_sum(t1, t2, gw, x1, x2, x0):
    """Poisson and conjugate-Poisson (``conj(x)`` numerator) sums in the half space ``x0 > 0``."""
    args = (
        np.ascontiguousarray(t1, dtype=np.float64),
        np.ascontiguousarray(t2, dtype=np.float64),
        np.ascontiguousarray(gw, dtype=np.complex128),
        np.ascontiguousarray(x1, dtype=np.float64),
        np.ascontiguousarray(x2, dtype=np.float64),
        float(x0),
    )
    if numba_enabled():
        apply_thread_cap()
        P, Q1, Q2 = _poisson_2d_nb(*args)
    else:
        P, Q1, Q2 = _poisson_2d_np(*args)
    return P * RIESZ_2D_CONST, Q1 * RIESZ_2D_CONST, Q2 * RIESZ_2D_CONST
