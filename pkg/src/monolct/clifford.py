"""Complex Clifford algebra C^(n), n = 1..3, with generators e_i e_j + e_j e_i = -2 delta_ij.

A :class:`CliffordNum` stores one complex coefficient per basis blade.  The
coefficient array has the blade axis first, so a single number has shape
``(2**n,)`` and a per-pixel field has shape ``(2**n, H, W)``; every operation
broadcasts over the trailing axes.

Blades are ordered by grade, then lexicographically::

    n = 3:  1, e1, e2, e3, e12, e13, e23, e123
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DIM = 3


@lru_cache(maxsize=None)
def basis(n):
    """Ordered basis blades as tuples of generator indices (``()`` is the scalar)."""
    _check_dim(n)
    out = []
    for grade in range(n + 1):
        out.extend(itertools.combinations(range(1, n + 1), grade))
    return tuple(out)


def _check_dim(n):
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_DIM:
        raise ValueError(f"Clifford dimension must be an integer in 1..{MAX_DIM}, got {n!r}")


def _mask(blade):
    m = 0
    for i in blade:
        m |= 1 << (i - 1)
    return m


def _blade_sign(a, b):
    """Sign of e_A e_B relative to e_(A xor B), with e_i^2 = -1."""
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    squares = bin(a & b).count("1")
    return -1 if (swaps + squares) % 2 else 1


@lru_cache(maxsize=None)
def _product_table(n):
    blades = basis(n)
    index = {_mask(s): k for k, s in enumerate(blades)}
    size = len(blades)
    target = np.empty((size, size), dtype=np.intp)
    sign = np.empty((size, size), dtype=np.float64)
    for i, bi in enumerate(blades):
        for j, bj in enumerate(blades):
            mi, mj = _mask(bi), _mask(bj)
            target[i, j] = index[mi ^ mj]
            sign[i, j] = _blade_sign(mi, mj)
    return target, sign


@lru_cache(maxsize=None)
def _grade_of(n):
    return np.array([len(s) for s in basis(n)])


@dataclass(frozen=True, eq=False)
class CliffordNum:
    """Element of C^(n); ``coeffs[k]`` multiplies ``basis(n)[k]``."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_dim(self.n)
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim == 0 or c.shape[0] != 2**self.n:
            raise ValueError(f"expected {2 ** self.n} coefficients for n={self.n}, got shape {c.shape}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, n, shape=()):
        return cls(n, np.zeros((2**n,) + tuple(shape), dtype=np.complex128))

    @classmethod
    def scalar(cls, n, value):
        value = np.asarray(value, dtype=np.complex128)
        c = np.zeros((2**n,) + value.shape, dtype=np.complex128)
        c[0] = value
        return cls(n, c)

    @classmethod
    def blade(cls, n, indices, value=1.0):
        """Single blade ``value * e_{indices}``; indices need not be sorted."""
        indices = tuple(indices)
        if len(set(indices)) != len(indices) or any(not 1 <= i <= n for i in indices):
            raise ValueError(f"invalid blade {indices} for n={n}")
        # reorder into canonical form, tracking the sign of each swap
        sign = 1
        idx = list(indices)
        for i in range(len(idx)):
            for j in range(len(idx) - 1 - i):
                if idx[j] > idx[j + 1]:
                    idx[j], idx[j + 1] = idx[j + 1], idx[j]
                    sign = -sign
        value = np.asarray(value, dtype=np.complex128) * sign
        c = np.zeros((2**n,) + value.shape, dtype=np.complex128)
        c[basis(n).index(tuple(idx))] = value
        return cls(n, c)

    @classmethod
    def vector(cls, n, components, scalar=0.0):
        comps = [np.asarray(v, dtype=np.complex128) for v in components]
        if len(comps) != n:
            raise ValueError(f"expected {n} vector components, got {len(comps)}")
        shape = np.broadcast_shapes(np.shape(scalar), *(v.shape for v in comps))
        c = np.zeros((2**n,) + shape, dtype=np.complex128)
        c[0] = scalar
        for j, v in enumerate(comps):
            c[1 + j] = v
        return cls(n, c)

    # views ----------------------------------------------------------------
    @property
    def shape(self):
        return self.coeffs.shape[1:]

    def grade(self, k):
        mask = _grade_of(self.n) == k
        c = np.where(mask.reshape((-1,) + (1,) * len(self.shape)), self.coeffs, 0)
        return CliffordNum(self.n, c)

    def norm(self):
        """Inner-product norm ``sqrt(sum_S |x_S|^2)``."""
        return np.sqrt(np.sum(np.abs(self.coeffs) ** 2, axis=0))

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CliffordNum):
            if other.n != self.n:
                raise ValueError(f"dimension mismatch: C^({self.n}) vs C^({other.n})")
            return other
        return CliffordNum.scalar(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        return CliffordNum(self.n, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return CliffordNum(self.n, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CliffordNum(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CliffordNum):
            return geometric_product(self, other)
        # complex scalars (or per-pixel scalar arrays) commute with every blade
        return CliffordNum(self.n, self.coeffs * np.asarray(other, dtype=np.complex128))

    def __rmul__(self, other):
        return CliffordNum(self.n, np.asarray(other, dtype=np.complex128) * self.coeffs)

    def allclose(self, other, atol=1e-12):
        other = self._coerce(other)
        theirs = other.coeffs.reshape(other.coeffs.shape + (1,) * (self.coeffs.ndim - other.coeffs.ndim))
        return bool(np.max(np.abs(self.coeffs - theirs), initial=0.0) <= atol)

    def __repr__(self):
        if self.shape:
            return f"CliffordNum(n={self.n}, shape={self.shape})"
        return f"CliffordNum({to_string(self)})"


def geometric_product(x, y):
    """Clifford product ``x y`` (broadcast over trailing field axes)."""
    if not isinstance(x, CliffordNum) or not isinstance(y, CliffordNum):
        raise TypeError("geometric_product expects CliffordNum operands")
    if x.n != y.n:
        raise ValueError(f"dimension mismatch: C^({x.n}) vs C^({y.n})")
    target, sign = _product_table(x.n)
    size = 2**x.n
    shape = np.broadcast_shapes(x.shape, y.shape)
    out = np.zeros((size,) + shape, dtype=np.complex128)
    for i in range(size):
        xi = x.coeffs[i]
        if not np.any(xi):
            continue
        for j in range(size):
            out[target[i, j]] += sign[i, j] * (xi * y.coeffs[j])
    return CliffordNum(x.n, out)


def grade_parts(x):
    """Split ``x`` into ``(Sc(x), Vec(x), rest)``; the vector has the blade axis first."""
    scalar = x.coeffs[0].copy()
    vector = x.coeffs[1 : 1 + x.n].copy()
    rest = x.coeffs.copy()
    rest[: 1 + x.n] = 0
    if not x.shape:
        scalar = complex(scalar)
    return scalar, vector, CliffordNum(x.n, rest)


# serialization ---------------------------------------------------------------

_TERM = re.compile(r"^\s*(\(.*\)|[^*]+)\s*\*\s*e(\d*)\s*$")


def _blade_name(blade):
    return "e0" if not blade else "e" + "".join(str(i) for i in blade)


def to_string(x):
    """Debug form ``(re+imj)*eS + ...`` over all blades in basis order."""
    if x.shape:
        raise ValueError("to_string serializes single Clifford numbers only")
    terms = []
    for c, blade in zip(x.coeffs, basis(x.n)):
        terms.append(f"({c.real:.17g}{c.imag:+.17g}j)*{_blade_name(blade)}")
    return " + ".join(terms)


def from_string(text, n):
    """Inverse of :func:`to_string` (missing blades are zero)."""
    blades = basis(n)
    names = {_blade_name(b): k for k, b in enumerate(blades)}
    c = np.zeros(2**n, dtype=np.complex128)
    for term in text.split(" + "):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"malformed Clifford term {term!r}")
        name = "e" + (m.group(2) or "")
        if name not in names:
            raise ValueError(f"unknown blade {name!r} for n={n}")
        c[names[name]] += complex(m.group(1).replace(" ", ""))
    return CliffordNum(n, c)


# principal-branch complex functions --------------------------------------------------


def _canon(z):
    # +0.0 absorbs negative zeros so arg(-1 - 0j) is pi, not -pi
    z = np.asarray(z, dtype=np.complex128)
    return z.real + 1j * (z.imag + 0.0)


def complex_sqrt(z):
    """``|z|^(1/2) exp(i arg(z)/2)`` with ``arg`` in ``(-pi, pi]``."""
    out = np.sqrt(_canon(z))
    return complex(out) if out.ndim == 0 else out


def complex_log(z):
    """Principal logarithm ``ln|z| + i arg z``, ``arg`` in ``(-pi, pi]``."""
    with np.errstate(divide="ignore"):
        out = np.log(_canon(z))
    return complex(out) if out.ndim == 0 else out


def complex_arctan(z):
    """``arctan z = (1/2i) ln((1 + iz) / (1 - iz))`` on the principal log branch.

    Raises ValueError at the logarithmic singularities ``z = +-i``.
    """
    z = np.asarray(z, dtype=np.complex128)
    num = 1 + 1j * z
    den = 1 - 1j * z
    if np.any(num == 0) or np.any(den == 0):
        raise ValueError("complex_arctan is singular at z = +-i")
    out = complex_log(num / den) / 2j
    return complex(out) if np.ndim(out) == 0 else out


# paravectors and polar form -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Paravector:
    """Scalar-plus-vector element ``s + v_1 e_1 + ... + v_n e_n`` (the set C_v).

    ``v`` has the component axis first, so per-pixel fields are ``(n, H, W)``.
    """

    s: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=np.complex128)
        v = np.asarray(self.v, dtype=np.complex128)
        if v.ndim == 0:
            raise ValueError("vector part needs a leading component axis")
        _check_dim(v.shape[0])
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "v", v)

    @property
    def n(self):
        return self.v.shape[0]

    def conj(self):
        return Paravector(self.s, -self.v)

    def to_clifford(self):
        return CliffordNum.vector(self.n, list(self.v), scalar=self.s)

    @classmethod
    def from_clifford(cls, x):
        s, v, rest = grade_parts(x)
        if np.any(rest.coeffs != 0):
            raise ValueError("Clifford number has grade >= 2 content")
        return cls(s, v)


@dataclass(frozen=True, eq=False)
class PolarForm:
    """``A (cos theta + I sin theta)``; ``defined`` is False where a pseudo-norm vanishes."""

    A: np.ndarray
    theta: np.ndarray
    I: np.ndarray
    defined: np.ndarray

    def unit(self):
        """``exp(I theta) = cos theta + I sin theta`` as a Clifford number."""
        n = self.I.shape[0]
        return CliffordNum.vector(n, list(self.I * np.sin(self.theta)), scalar=np.cos(self.theta))

    def reconstruct(self):
        return self.unit() * self.A


def polar_decompose(p, tol=0.0):
    """Polar form of a paravector with complex "norm" A and complex "phase" theta.

    ``A = sqrt(y0^2 + ... + yn^2)`` and ``I = v / sqrt(y1^2 + ... + yn^2)``
    use :func:`complex_sqrt`.  ``theta`` is ``pi/2`` where ``y0 == 0`` and
    ``arctan(|v| / y0)`` otherwise, shifted by ``pi`` where the principal
    arctan would reconstruct ``-p`` (this happens e.g. for real ``y0 < 0``).

    Where either pseudo-norm has modulus ``<= tol`` (absolute) the form is
    flagged undefined and A, theta, I are zero there.
    """
    y0 = p.s
    v = p.v
    vn2 = np.sum(v * v, axis=0)
    A = np.asarray(complex_sqrt(y0 * y0 + vn2))
    vn = np.asarray(complex_sqrt(vn2))
    defined = (np.abs(A) > tol) & (np.abs(vn) > tol)

    safe_vn = np.where(defined, vn, 1.0)
    flat = defined & (y0 == 0)
    ratio = np.where(defined & ~flat, safe_vn / np.where(y0 == 0, 1.0, y0), 0.0)
    theta = np.where(flat, np.pi / 2, np.asarray(complex_arctan(ratio)))
    # branch choice so that A cos(theta) == y0
    flip = np.abs(A * np.cos(theta) + y0) < np.abs(A * np.cos(theta) - y0)
    theta = np.where(defined & flip, theta + np.pi, theta)

    I = np.where(defined, v / safe_vn, 0.0)
    theta = np.where(defined, theta, 0.0)
    A = np.where(defined, A, 0.0)
    if np.ndim(defined) == 0:
        return PolarForm(complex(A), complex(theta), I, bool(defined))
    return PolarForm(A, theta, I, defined)
