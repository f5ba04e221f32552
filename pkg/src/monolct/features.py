"""Polar form of the monogenic field: amplitude, phase, phase vector, attenuation.

Writing ``f_M = e^rho e^(I theta)`` with ``A = e^rho`` splits the Dirac
equation for ``e^(i a |x0 + x|^2/(2b)) f_M`` into a scalar and a vector
Cauchy-Riemann type system.  This module evaluates the terms of that system.

Derivatives of rho, theta and I are obtained by default from derivatives of
the field channels through the chain rule (``method="chain"``):

    d rho   = sum_k f_k d f_k / A^2
    d theta = (f0 d|v| - |v| d f0) / A^2
    d I_j   = (d f_j - I_j d|v|) / |v|

with ``d|v| = sum_j f_j d f_j / |v|``.  No logarithm or arctangent is
differentiated, so the result does not see branch cuts.  Channel
derivatives along x1, x2 are central differences of the de-chirped field
(the chirp itself is differentiated exactly); along x0 the spectral
:func:`monogenic.ddx0` is used.  ``method="fd"`` instead differences the
decomposed features themselves (spatially and across ``x0 +- delta``) and
masks pixels next to a branch jump.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .calculus import central_diff, spatial_gradient
from .clifford import CliffordNum, Paravector, complex_log, complex_sqrt, grade_parts, polar_decompose
from .grid import Field2D
from .monogenic import MonogenicField, _ab, ddx0, monogenic_extend

MASK_EPS = 1e-12
BRANCH_JUMP = np.pi / 2


@dataclass(frozen=True, eq=False)
class FeatureMaps:
    """Per-pixel polar features; ``I`` and ``r`` have shape ``(2, H, W)``."""

    A: np.ndarray
    theta: np.ndarray
    I: np.ndarray
    r: np.ndarray
    rho: np.ndarray
    defined_mask: np.ndarray
    dx: float = 1.0
    dy: float = 1.0

    @property
    def shape(self):
        return self.A.shape

    def field(self, name):
        return Field2D(getattr(self, name), self.dx, self.dy)

    def unit(self):
        """``e^(I theta)`` as a Clifford field."""
        return CliffordNum.vector(2, list(self.I * np.sin(self.theta)), scalar=np.cos(self.theta))

    def reconstruct(self):
        return self.unit() * np.exp(self.rho)


@dataclass(frozen=True, eq=False)
class FeatureDerivatives:
    """Derivatives along ``(x0, x1, x2)`` stacked on the first axis.

    ``rho`` and ``theta`` have shape ``(3, H, W)``; ``I`` has ``(3, 2, H, W)``.
    """

    rho: np.ndarray
    theta: np.ndarray
    I: np.ndarray
    mask: np.ndarray


class CrResiduals(NamedTuple):
    R1: np.ndarray
    R2: np.ndarray
    mask: np.ndarray


def _pseudo_norms(channels):
    vn2 = channels[1] ** 2 + channels[2] ** 2
    return complex_sqrt(channels[0] ** 2 + vn2), complex_sqrt(vn2)


def _defined(A, vn, eps):
    scale = np.max(np.abs(A)) if A.size else 0.0
    if scale == 0:
        return np.zeros(A.shape, dtype=bool)
    tol = eps * scale
    return (np.abs(A) > tol) & (np.abs(vn) > tol)


def compute_features(field, eps=MASK_EPS):
    """Polar decomposition of every pixel of a :class:`MonogenicField`.

    Pixels where ``|A|`` or the vector pseudo-norm falls below
    ``eps * max|A|`` are masked and hold zeros.
    """
    c = field.channels
    A_raw, vn = _pseudo_norms(c)
    ok = _defined(A_raw, vn, eps)
    pf = polar_decompose(Paravector(c[0], c[1:]))
    ok = ok & pf.defined
    A = np.where(ok, pf.A, 0.0)
    theta = np.where(ok, pf.theta, 0.0)
    I = np.where(ok, pf.I, 0.0)
    rho = np.where(ok, complex_log(np.where(ok, A, 1.0)), 0.0)
    return FeatureMaps(A, theta, I, I * theta, rho, ok, field.dx, field.dy)


# derivatives -----------------------------------------------------------------------


def _chain(channels, dchan, feats):
    """Chain-rule derivatives of rho, theta, I for one direction."""
    ok = feats.defined_mask
    A_raw, vn = _pseudo_norms(channels)
    A2 = np.where(ok, A_raw**2, 1.0)
    vn_s = np.where(ok, vn, 1.0)
    f0, v = channels[0], channels[1:]
    d0, dv = dchan[0], dchan[1:]
    drho = (f0 * d0 + np.sum(v * dv, axis=0)) / A2
    dvn = np.sum(v * dv, axis=0) / vn_s
    # the branch flip (theta + pi) leaves derivatives unchanged; the sign of vn
    # follows the branch actually chosen for I
    dtheta = (f0 * dvn - vn_s * d0) / A2
    I = np.where(ok, v / vn_s, 0.0)
    dI = (dv - I * dvn) / vn_s
    z = lambda u: np.where(ok, u, 0.0)  # noqa: E731
    return z(drho), z(dtheta), z(dI)


def channel_gradient(field):
    """Spatial derivatives of the channels of ``f_M``.

    Central differences act on the de-chirped field
    ``h = exp(i a |x0 + x|^2/(2b)) f_M``, which is smooth; the chirp is
    differentiated exactly: ``d_j f_M = h_j' / chirp - i (a/b) x_j f_M``.
    """
    c = field.channels
    chirp = field.chirp(+1)
    h1, h2 = spatial_gradient(chirp * c, field.dx, field.dy)
    x1, x2 = field.coords()
    k = 1j * field.a / field.b
    return h1 / chirp - k * x1 * c, h2 / chirp - k * x2 * c


def _chain_derivatives(field, feats):
    c = field.channels
    d0 = ddx0(field).channels
    g1, g2 = channel_gradient(field)
    parts = [_chain(c, d, feats) for d in (d0, g1, g2)]
    rho = np.stack([p[0] for p in parts])
    theta = np.stack([p[1] for p in parts])
    I = np.stack([p[2] for p in parts])
    return FeatureDerivatives(rho, theta, I, feats.defined_mask.copy())


def _jump_mask(u, limit=BRANCH_JUMP):
    """True where a pixel differs from a 4-neighbour by more than ``limit``."""
    bad = np.zeros(u.shape, dtype=bool)
    for axis in (0, 1):
        d = np.abs(np.diff(u, axis=axis)) > limit
        lo = [slice(None)] * 2
        hi = [slice(None)] * 2
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        bad[tuple(lo)] |= d
        bad[tuple(hi)] |= d
    return bad


def _fd_derivatives(field, feats, delta):
    if field.source is None:
        raise ValueError("field does not carry its generating image")
    p = (field.a, field.b)
    up = compute_features(monogenic_extend(field.source, p, field.x0 + delta, field.pad))
    dn = compute_features(monogenic_extend(field.source, p, field.x0 - delta, field.pad))
    # wrap-free scale differences: compare logs and phases through their exponentials
    drho0 = complex_log(np.where(up.defined_mask & dn.defined_mask, up.A / np.where(dn.A == 0, 1, dn.A), 1.0))
    drho0 = drho0 / (2 * delta)
    dth0 = (up.theta - dn.theta) / (2 * delta)
    dI0 = (up.I - dn.I) / (2 * delta)
    dx, dy = field.dx, field.dy
    rho = np.stack([drho0, central_diff(feats.rho, 1, dx), central_diff(feats.rho, 0, dy)])
    theta = np.stack([dth0, central_diff(feats.theta, 1, dx), central_diff(feats.theta, 0, dy)])
    I = np.stack([dI0, central_diff(feats.I, 2, dx), central_diff(feats.I, 1, dy)])
    mask = feats.defined_mask & up.defined_mask & dn.defined_mask
    mask &= ~_jump_mask(feats.rho.imag) & ~_jump_mask(feats.theta.real)
    mask &= np.abs(up.theta - dn.theta) < BRANCH_JUMP
    # sign of I may flip between scales together with theta
    mask &= np.all(np.abs(up.I - dn.I) < 1.0, axis=0)
    for nb in (np.roll(mask, 1, 0), np.roll(mask, -1, 0), np.roll(mask, 1, 1), np.roll(mask, -1, 1)):
        mask &= nb
    z = lambda u: np.where(mask, u, 0.0)  # noqa: E731
    return FeatureDerivatives(z(rho), z(theta), z(I), mask)


def feature_derivatives(field, feats=None, method="chain", delta=None):
    """Derivatives of rho, theta and I along ``(x0, x1, x2)``.

    ``method`` is ``"chain"`` (default) or ``"fd"``; ``delta`` is the scale
    step of the ``"fd"`` route (default ``x0/100``).
    """
    if not field.x0 > 0:
        raise ValueError("x0 must be positive")
    if feats is None:
        feats = compute_features(field)
    if method == "chain":
        return _chain_derivatives(field, feats)
    if method == "fd":
        return _fd_derivatives(field, feats, field.x0 / 100 if delta is None else float(delta))
    raise ValueError(f"unknown derivative method {method!r}")


# Cauchy-Riemann terms ------------------------------------------------------------------


def _vec(components):
    return CliffordNum.vector(2, list(components))


def dirac_I_times_I(feats, der):
    """``Vec[(D I) I]`` as a ``(2, H, W)`` array (D is the spatial Dirac operator)."""
    e1 = CliffordNum.blade(2, (1,))
    e2 = CliffordNum.blade(2, (2,))
    DI = e1 * _vec(der.I[1]) + e2 * _vec(der.I[2])
    _, v, _ = grade_parts(DI * _vec(feats.I))
    return v


def scalar_dirac_exp(feats, der):
    """``Sc[(D e^r) e^-r]`` with ``e^(+-r) = cos theta +- I sin theta``."""
    th, I = feats.theta, feats.I
    s, c = np.sin(th), np.cos(th)
    e1 = CliffordNum.blade(2, (1,))
    e2 = CliffordNum.blade(2, (2,))
    parts = []
    for j in (1, 2):
        dth = der.theta[j]
        parts.append(CliffordNum.vector(2, list(der.I[j] * s + I * c * dth), scalar=-s * dth))
    D_exp = e1 * parts[0] + e2 * parts[1]
    exp_neg = CliffordNum.vector(2, list(-I * s), scalar=c)
    sc, _, _ = grade_parts(D_exp * exp_neg)
    return sc


def phase_congruency_vector(feats, der):
    """``dr/dx0 - Vec[(D I) I] sin^2 theta + (sin theta cos theta - theta) dI/dx0``.

    Evaluated in the equivalent form ``I dtheta/dx0 + sin theta cos theta dI/dx0
    - Vec[(D I) I] sin^2 theta``, where the explicit theta terms cancel.
    """
    th = feats.theta
    s, c = np.sin(th), np.cos(th)
    V = feats.I * der.theta[0] + s * c * der.I[0] - dirac_I_times_I(feats, der) * s * s
    return np.where(feats.defined_mask, V, 0.0)


def dirac_rho(der):
    """Spatial gradient of rho as a ``(2, H, W)`` array (the vector ``D rho``)."""
    return der.rho[1:3]


def linear_term(field):
    """``i (a/b) x`` on the grid, shape ``(2, H, W)``."""
    x1, x2 = np.broadcast_arrays(*field.coords())
    return 1j * (field.a / field.b) * np.stack([x1, x2]).astype(np.complex128)


def cr_residuals(f, p, x0, method="chain", delta=None, pad=1):
    """Residuals of the scalar and vector Cauchy-Riemann type equations.

    ``R1 = i(a/b) x0 + d rho/dx0 + Sc[(D e^r) e^-r]`` and
    ``R2 = i(a/b) x + dr/dx0 + D rho - Vec[(D I) I] sin^2 theta + (sin theta cos theta - theta) dI/dx0``.
    Both vanish for an exact monogenic field; masked pixels hold 0.
    """
    a, b = _ab(p)
    if not x0 > 0:
        raise ValueError("x0 must be positive")
    field = monogenic_extend(f, (a, b), x0, pad)
    feats = compute_features(field)
    der = feature_derivatives(field, feats, method, delta)
    m = der.mask
    R1 = 1j * (a / b) * x0 + der.rho[0] + scalar_dirac_exp(feats, der)
    R2 = linear_term(field) + phase_congruency_vector(feats, der) + dirac_rho(der)
    return CrResiduals(np.where(m, R1, 0.0), np.where(m, R2, 0.0), m)


def vector_modulus(v):
    """Euclidean norm of the complex moduli over the leading component axis."""
    return np.sqrt(np.sum(np.abs(v) ** 2, axis=0))


def monogenic_features(f, p, x0, pad=1):
    """Convenience: extend ``f`` to scale ``x0`` and decompose."""
    field = monogenic_extend(f, p, x0, pad)
    return field, compute_features(field)


__all__ = [
    "FeatureMaps",
    "FeatureDerivatives",
    "CrResiduals",
    "MonogenicField",
    "compute_features",
    "feature_derivatives",
    "cr_residuals",
    "phase_congruency_vector",
    "dirac_I_times_I",
    "scalar_dirac_exp",
    "dirac_rho",
    "linear_term",
    "vector_modulus",
    "channel_gradient",
    "monogenic_features",
]
