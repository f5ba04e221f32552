"""Uniformly sampled signals and images."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def centered_axis(n, step):
    """Sample coordinates ``(j - n//2) * step`` for ``j = 0..n-1``."""
    return (np.arange(n) - n // 2) * step


@dataclass(frozen=True, eq=False)
class SampledSignal1D:
    """Complex samples ``f(start + j*dx)``."""

    samples: np.ndarray
    start: float
    dx: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("SampledSignal1D needs a 1-D array with at least 2 samples")
        if not self.dx > 0:
            raise ValueError(f"sample spacing must be positive, got {self.dx}")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "dx", float(self.dx))

    @classmethod
    def centered(cls, samples, dx):
        samples = np.asarray(samples)
        return cls(samples, -(samples.size // 2) * dx, dx)

    @classmethod
    def from_function(cls, func, n, dx):
        x = centered_axis(n, dx)
        return cls(func(x), x[0], dx)

    @property
    def n(self):
        return self.samples.size

    @property
    def x(self):
        return self.start + np.arange(self.n) * self.dx

    def is_centered(self, rtol=1e-9):
        return abs(self.start + (self.n // 2) * self.dx) <= rtol * self.dx * self.n

    def energy(self):
        return float(np.sum(np.abs(self.samples) ** 2) * self.dx)

    def with_samples(self, samples):
        return SampledSignal1D(samples, self.start, self.dx)


@dataclass(frozen=True, eq=False)
class Field2D:
    """Complex image on a centered grid.

    Axis 1 (columns) is the coordinate x1 with spacing ``dx``; axis 0 (rows)
    is x2 with spacing ``dy``.  Pixel ``(i, j)`` sits at
    ``x1 = (j - W//2) dx``, ``x2 = (i - H//2) dy``.
    """

    samples: np.ndarray
    dx: float = 1.0
    dy: float = 1.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 2 or min(s.shape) < 2:
            raise ValueError(f"Field2D needs a 2-D array with both sides >= 2, got shape {s.shape}")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("grid spacings must be positive")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "dy", float(self.dy))

    @classmethod
    def from_function(cls, func, shape, dx=1.0, dy=None):
        dy = dx if dy is None else dy
        x1, x2 = grid_coords(shape, dx, dy)
        return cls(func(x1, x2), dx, dy)

    @property
    def shape(self):
        return self.samples.shape

    def coords(self):
        """Broadcastable ``(x1, x2)`` coordinate arrays."""
        return grid_coords(self.shape, self.dx, self.dy)

    def energy(self):
        return float(np.sum(np.abs(self.samples) ** 2) * self.dx * self.dy)

    def with_samples(self, samples):
        return Field2D(samples, self.dx, self.dy)


def grid_coords(shape, dx, dy):
    h, w = shape
    x1 = centered_axis(w, dx)[None, :]
    x2 = centered_axis(h, dy)[:, None]
    return x1, x2


def raised_cosine_window(n, fraction=0.1):
    """Taper equal to 1 in the middle, raised-cosine over the outer ``fraction`` on each side."""
    from scipy.signal.windows import tukey

    return tukey(n, alpha=2 * fraction, sym=True)
