"""Linear canonical transform on uniform grids.

For ``b > 0`` the transform

    F(w) = 1/sqrt(i 2 pi b) * int exp(i (d w^2/(2b) - w x/b + a x^2/(2b))) f(x) dx

is computed as pre-chirp, DFT, post-chirp.  The output grid is tied to ``b``:
``dw = 2 pi b / (N dx)``, centered at zero, so the discrete map is exactly
unitary (``sum |F|^2 dw == sum |f|^2 dx``) and :func:`lct_inverse_1d` undoes
:func:`lct_forward_1d` to rounding error.  In n dimensions the constant is
raised to the n-th power so the inversion and Parseval identities carry over.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft

from . import kernels
from ._accel import fft_workers
from .clifford import complex_sqrt
from .grid import Field2D, SampledSignal1D, centered_axis

DET_TOL = 1e-12


class ChirpSamplingWarning(UserWarning):
    """The input chirp advances by more than pi/4 per sample at the grid edge."""


@dataclass(frozen=True)
class LctParams:
    """Real parameters ``(a, b, c, d)`` with ``ad - bc = 1``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"LCT parameter {name} must be finite")
            object.__setattr__(self, name, value)
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) >= DET_TOL:
            raise ValueError(f"LCT parameters must satisfy ad - bc = 1 (got {det!r})")

    @classmethod
    def from_ab(cls, a, b, d=1.0):
        """Complete ``(a, b)`` with ``c = (ad - 1)/b``; ``d`` defaults to 1."""
        if b == 0:
            raise ValueError("cannot complete parameters from b = 0")
        return cls(a, b, (a * d - 1.0) / b, d)

    @classmethod
    def fourier(cls):
        return cls(0.0, 1.0, -1.0, 0.0)

    def inverse(self):
        """Parameters ``(d, -b, -c, a)`` of the inverse kernel."""
        return LctParams(self.d, -self.b, -self.c, self.a)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def to_dict(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def _require_positive_b(p):
    if not isinstance(p, LctParams):
        raise TypeError("expected LctParams")
    if p.b < 0:
        raise ValueError("b < 0 is not supported; use the equivalent b > 0 parameterization")
    if p.b == 0:
        raise ValueError("b = 0 is only supported by the 1-D chirp-multiplication branch")


def frequency_step(n, dx, b):
    """Output grid spacing ``2 pi |b| / (n dx)``."""
    return 2.0 * np.pi * abs(b) / (n * dx)


def check_chirp_sampling(x_max, dx, a, b, stacklevel=3):
    """Warn when ``|a| x_max dx / (2|b|) > pi/4``; returns the measured value."""
    value = abs(a) * x_max * dx / (2.0 * abs(b))
    if value > np.pi / 4:
        warnings.warn(
            f"input chirp under-sampled: |a| x_max dx / (2|b|) = {value:.3g} > pi/4",
            ChirpSamplingWarning,
            stacklevel=stacklevel,
        )
    return value


def kernel_constant(b):
    """``1 / sqrt(i 2 pi b)`` with the principal square root."""
    return 1.0 / complex_sqrt(2j * np.pi * b)


def _along(vec, axis, ndim):
    shape = [1] * ndim
    shape[axis] = vec.size
    return vec.reshape(shape)


def _kernel_axis(arr, axis, start_in, step_in, start_out, a, b, d):
    """Apply the kernel with parameters ``(a, b, ., d)`` (any sign of ``b != 0``) along one axis.

    Input samples sit at ``start_in + j*step_in``; output at
    ``start_out + m*du`` with ``du = 2 pi |b| / (N step_in)``.
    """
    n = arr.shape[axis]
    du = frequency_step(n, step_in, b)
    v = start_in + np.arange(n) * step_in
    u = start_out + np.arange(n) * du
    pre = np.exp(1j * (a * v * v / (2 * b) - start_out * v / b))
    g = arr * _along(pre, axis, arr.ndim)
    if b > 0:
        G = scipy.fft.fft(g, axis=axis, workers=fft_workers())
    else:
        G = scipy.fft.ifft(g, axis=axis, workers=fft_workers()) * n
    post = np.exp(1j * (d * u * u / (2 * b) - (u - start_out) * start_in / b))
    post = post * (step_in * kernel_constant(b))
    return G * _along(post, axis, arr.ndim), du


def lct_forward_1d(f, p):
    """LCT of a sampled signal; the result lives on the centered frequency grid."""
    if not isinstance(p, LctParams):
        raise TypeError("expected LctParams")
    if p.b < 0:
        raise ValueError("b < 0 is not supported")
    if p.b == 0:
        return _chirp_multiply(f, p.d, p.c)
    check_chirp_sampling(np.max(np.abs(f.x)), f.dx, p.a, p.b)
    n = f.n
    start_out = -(n // 2) * frequency_step(n, f.dx, p.b)
    out, dw = _kernel_axis(f.samples, 0, f.start, f.dx, start_out, p.a, p.b, p.d)
    return SampledSignal1D(out, start_out, dw)


def lct_inverse_1d(F, p, start=None):
    """Invert :func:`lct_forward_1d` by applying the ``(d, -b, -c, a)`` kernel.

    ``start`` is the first spatial coordinate of the result (centered grid by default).
    """
    if not isinstance(p, LctParams):
        raise TypeError("expected LctParams")
    if p.b < 0:
        raise ValueError("b < 0 is not supported")
    if p.b == 0:
        # inverse parameters (d, 0, -c, a): chirp multiplication with a > 0
        return _chirp_multiply(F, p.a, -p.c)
    if not F.is_centered():
        raise ValueError("grid mismatch: spectrum is not on a centered frequency grid")
    n = F.n
    dx = frequency_step(n, F.dx, p.b)
    if start is None:
        start = -(n // 2) * dx
    inv = p.inverse()
    out, _ = _kernel_axis(F.samples, 0, F.start, F.dx, start, inv.a, inv.b, inv.d)
    return SampledSignal1D(out, start, dx)


def _chirp_multiply(f, d, c):
    # b = 0 branch: sqrt(d) exp(i c d w^2 / 2) f(d w) on the input grid
    if d <= 0:
        raise ValueError("b = 0 requires d > 0")
    w = f.x
    src = d * w
    if np.allclose(src, w, rtol=0, atol=1e-12 * f.dx):
        resampled = f.samples
    else:
        xp = f.x
        resampled = np.interp(src, xp, f.samples.real, left=0.0, right=0.0) + 1j * np.interp(
            src, xp, f.samples.imag, left=0.0, right=0.0
        )
    out = np.sqrt(d) * np.exp(0.5j * c * d * w * w) * resampled
    return f.with_samples(out)


def lct_2d(f, p, direction="forward"):
    """Separable 2-D LCT of a centered :class:`Field2D` (constant ``(1/sqrt(i 2 pi b))**2``)."""
    _require_positive_b(p)
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    h, w = f.shape
    steps = {1: f.dx, 0: f.dy}
    if direction == "forward":
        x1, x2 = f.coords()
        r_max = max(np.max(np.abs(x1)), np.max(np.abs(x2)))
        check_chirp_sampling(r_max, max(f.dx, f.dy), p.a, p.b)
        ka, kb, kd = p.a, p.b, p.d
    else:
        inv = p.inverse()
        ka, kb, kd = inv.a, inv.b, inv.d
    out = f.samples
    new_steps = {}
    for axis in (1, 0):
        n = out.shape[axis]
        start_in = -(n // 2) * steps[axis]
        du = frequency_step(n, steps[axis], kb)
        out, new_steps[axis] = _kernel_axis(out, axis, start_in, steps[axis], -(n // 2) * du, ka, kb, kd)
    return Field2D(out, new_steps[1], new_steps[0])


def lct_quadrature_oracle(f, p, omegas):
    """Trapezoidal evaluation of the LCT integral at arbitrary ``omegas`` (O(N M))."""
    _require_positive_b(p)
    omegas = np.atleast_1d(np.asarray(omegas, dtype=np.float64))
    if omegas.size == 0:
        return np.zeros(0, dtype=np.complex128)
    weights = np.full(f.n, f.dx)
    weights[0] = weights[-1] = 0.5 * f.dx
    fw = f.samples * weights
    out = kernels.lct_direct_sum(f.x, fw, omegas, p.a, p.b, p.d)
    return out * kernel_constant(p.b)


def frequency_axis(n, dx, b):
    """Centered output coordinates of a length-``n`` transform."""
    return centered_axis(n, frequency_step(n, dx, b))
