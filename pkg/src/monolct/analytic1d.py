"""Parameter (a, b)-Hilbert transform and the generalized analytic signal.

The (a, b)-Hilbert transform conjugates the classical Hilbert transform by
the chirp ``exp(i a t^2 / (2b))``.  Its analytic signal has a one-sided LCT
spectrum and extends holomorphically to the upper half plane, where it
equals ``exp(-i a z^2/(2b)) [P_y * g + i Q_y * g](x)`` with
``g(t) = exp(i a t^2/(2b)) f(t)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from . import kernels
from ._accel import fft_workers
from .calculus import central_diff
from .grid import SampledSignal1D
from .lct import LctParams, kernel_constant, lct_forward_1d, lct_inverse_1d

TAIL_FRACTION = 0.1
TAIL_ENERGY_TOL = 1e-6


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"points must lie in the upper half plane (y > 0), got y={self.y}")


@dataclass(frozen=True, eq=False)
class GasSignal:
    """Generalized analytic signal ``f + i H^(a,b) f`` with its generating ``(a, b)``."""

    base: SampledSignal1D
    a: float
    b: float

    @property
    def samples(self):
        return self.base.samples


def _check_b(b):
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")


def sign_multiplier(n):
    """Discrete ``sgn`` on FFT frequency order; 0 at DC and, for even n, at Nyquist."""
    k = np.fft.fftfreq(n)
    s = np.sign(k)
    if n % 2 == 0:
        s[n // 2] = 0.0
    return s


def chirp(x, a, b):
    return np.exp(1j * a * x * x / (2.0 * b))


def pht(f, a, b):
    """(a, b)-Hilbert transform computed spectrally on the chirped signal."""
    _check_b(b)
    x = f.x
    g = chirp(x, a, b) * f.samples
    G = scipy.fft.fft(g, workers=fft_workers())
    Hg = scipy.fft.ifft(-1j * sign_multiplier(f.n) * G, workers=fft_workers())
    if a == 0 and not np.any(f.samples.imag):
        # the classical transform maps real signals to real signals
        Hg = Hg.real
    return f.with_samples(np.conj(chirp(x, a, b)) * Hg)


def pht_pv_oracle(f, a, b, cell_correction=True):
    """Slow principal-value quadrature of the (a, b)-Hilbert transform (test oracle).

    The sum skips the singular sample.  ``cell_correction`` adds back the
    skipped cell's contribution ``-dx g'(x) / pi`` (g is the chirped signal,
    g' by central differences), which removes the first-order error.
    """
    _check_b(b)
    x = f.x
    g = chirp(x, a, b) * f.samples
    h = kernels.hilbert_pv_sum(x, g, f.dx)
    if cell_correction:
        h = h - f.dx * central_diff(g, 0, f.dx) / np.pi
    return f.with_samples(np.conj(chirp(x, a, b)) * h)


def gas(f, a, b):
    return GasSignal(f.with_samples(f.samples + 1j * pht(f, a, b).samples), float(a), float(b))


def one_sided_weights(n):
    """``1 + sgn`` on the centered frequency grid: 2 for w > 0, 1 at w = 0, 0 for w < 0."""
    return 1.0 + np.fft.fftshift(sign_multiplier(n))


def gas_spectral(f, p):
    """Analytic signal by suppressing the negative half of the LCT spectrum."""
    if not isinstance(p, LctParams):
        raise TypeError("expected LctParams")
    _check_b(p.b)
    F = lct_forward_1d(f, p)
    half = F.with_samples(F.samples * one_sided_weights(F.n))
    out = lct_inverse_1d(half, p, start=f.start)
    return GasSignal(out, p.a, p.b)


def negative_frequency_fraction(F):
    """Share of spectral energy on the ``w < 0`` half of a centered grid."""
    total = np.sum(np.abs(F.samples) ** 2)
    if total == 0:
        return 0.0
    neg = np.sum(np.abs(F.samples[F.x < 0]) ** 2)
    return float(neg / total)


def tail_energy_fraction(F, fraction=TAIL_FRACTION):
    total = np.sum(np.abs(F.samples) ** 2)
    if total == 0:
        return 0.0
    edge = int(np.ceil(fraction * F.n))
    tail = np.sum(np.abs(F.samples[:edge]) ** 2) + np.sum(np.abs(F.samples[F.n - edge :]) ** 2)
    return float(tail / total)


def _points(pts):
    if len(pts) and isinstance(pts[0], HalfPlanePoint):
        xs = np.array([q.x for q in pts], dtype=float)
        ys = np.array([q.y for q in pts], dtype=float)
    else:
        arr = np.asarray(pts, dtype=float).reshape(-1, 2)
        xs, ys = arr[:, 0], arr[:, 1]
    if np.any(~(ys > 0)):
        raise ValueError("points must lie in the upper half plane (y > 0)")
    return xs, ys


def gas_extend(f, p, pts):
    """Evaluate ``2 int_0^inf K^(d,-b,-c,a)(z, w) F(w) dw`` at points ``z = x + iy``, ``y > 0``.

    The integral is a trapezoidal sum over the non-negative half of the
    computed spectrum.  Raises ValueError when the spectrum does not decay
    (tail energy above ``1e-6`` of the total).
    """
    if not isinstance(p, LctParams):
        raise TypeError("expected LctParams")
    _check_b(p.b)
    xs, ys = _points(pts)
    F = lct_forward_1d(f, p)
    if tail_energy_fraction(F) > TAIL_ENERGY_TOL:
        raise ValueError("LCT spectrum does not decay; the half-plane extension is not defined")
    keep = F.x >= 0
    w = F.x[keep]
    Fw = F.samples[keep] * np.where(w == 0, 1.0, 2.0) * F.dx
    a, b, d = p.a, p.b, p.d
    z = xs + 1j * ys
    out = np.empty(z.size, dtype=np.complex128)
    for s in range(0, z.size, 64):
        zz = z[s : s + 64, None]
        phase = -a * zz * zz + 2.0 * zz * w[None, :] - d * w[None, :] ** 2
        out[s : s + 64] = np.exp(1j * phase / (2.0 * b)) @ Fw
    return out * kernel_constant(-b)


def poisson_extend_1d(g, x, y):
    """Trapezoidal Poisson and conjugate-Poisson integrals of ``g`` at ``x + iy``.

    Returns ``(P, Q)`` with kernels ``y / (pi (x^2 + y^2))`` and ``x / (pi (x^2 + y^2))``.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ys = np.broadcast_to(np.atleast_1d(np.asarray(y, dtype=float)), xs.shape)
    if np.any(~(ys > 0)):
        raise ValueError("y must be positive")
    weights = np.full(g.n, g.dx)
    weights[0] = weights[-1] = 0.5 * g.dx
    P, Q = kernels.poisson_1d_sum(g.x, g.samples * weights, xs, np.ascontiguousarray(ys))
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return complex(P[0]), complex(Q[0])
    return P, Q


def poisson_representation(f, p, pts):
    """Half-plane values ``exp(-i a z^2/(2b)) [P_y * g + i Q_y * g](x)`` by direct quadrature."""
    _check_b(p.b)
    xs, ys = _points(pts)
    g = f.with_samples(chirp(f.x, p.a, p.b) * f.samples)
    P, Q = poisson_extend_1d(g, xs, ys)
    z = xs + 1j * ys
    return np.exp(-1j * p.a * z * z / (2.0 * p.b)) * (P + 1j * Q)
