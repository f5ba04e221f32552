"""Edge maps from the local complex attenuation (LCA) and the modified
differential complex phase congruency (MDCPC), plus synthetic test scenes
and the Pratt figure of merit.

Both maps are built from the polar features of the monogenic field at a
scale ``x0``.  LCA is ``|D rho|``.  MDCPC is the norm of

    V = [i (a/b) x] + dr/dx0 - Vec[(D I) I] sin^2 theta + (sin theta cos theta - theta) dI/dx0

where the bracketed linear term is optional.  Norms of complex vectors are
Euclidean norms of the component moduli.  Raw strengths are divided by
their 99th percentile and clamped to [0, 1].

By default the image is mirrored to twice its size before the FFT stage
(``boundary="symmetric"``), so the periodic transform does not see a jump
between opposite borders.  Coordinates of the original pixels are kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import ndimage

from .calculus import dirac_apply
from .features import (
    compute_features,
    dirac_rho,
    feature_derivatives,
    linear_term,
    phase_congruency_vector,
    vector_modulus,
)
from .grid import Field2D
from .monogenic import _ab, monogenic_extend

PERCENTILE = 99.0
THRESHOLD = 0.3
PRATT_ALPHA = 1.0 / 9.0
BOUNDARIES = ("symmetric", "periodic")

__all__ = [
    "EdgeMap",
    "GroundTruth",
    "dirac_apply",
    "lca_map",
    "mdcpc_map",
    "edge_vectors",
    "synth_image",
    "pratt_fom",
    "normalize_strength",
    "column_argmax",
    "mean_boundary_distance",
]


@dataclass(frozen=True, eq=False)
class EdgeMap:
    """Edge strength in [0, 1] with the settings that produced it.

    ``raw`` keeps the un-normalized vector norm; ``scale`` is the percentile
    value it was divided by.
    """

    strength: np.ndarray
    method: str
    a: float
    b: float
    x0: float
    threshold: float | None = THRESHOLD
    percentile: float = PERCENTILE
    include_linear_term: bool = False
    raw: np.ndarray | None = None
    scale: float = 0.0

    def detections(self, threshold=None):
        t = self.threshold if threshold is None else threshold
        if t is None:
            raise ValueError("no threshold set")
        return self.strength >= t

    def to_dict(self):
        out = {
            "method": self.method,
            "a": self.a,
            "b": self.b,
            "x0": self.x0,
            "threshold": self.threshold,
            "percentile": self.percentile,
            "normalization_scale": self.scale,
        }
        if self.method == "mdcpc":
            out["include_linear_term"] = self.include_linear_term
        return out


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Boolean edge raster plus a description of the generator."""

    edge_pixels: np.ndarray
    description: dict = dc_field(default_factory=dict)

    @property
    def count(self):
        return int(np.count_nonzero(self.edge_pixels))


def normalize_strength(raw, percentile=PERCENTILE):
    """Divide by the given percentile and clamp to [0, 1]; all-zero input stays zero."""
    raw = np.asarray(raw, dtype=float)
    scale = float(np.percentile(raw, percentile)) if raw.size else 0.0
    if not scale > 0:
        top = float(np.max(raw)) if raw.size else 0.0
        if not top > 0:
            return np.zeros_like(raw), 0.0
        scale = top
    return np.clip(raw / scale, 0.0, 1.0), scale


def _mirror(f):
    h, w = f.shape
    top, left = h - h // 2, w - w // 2
    ext = np.pad(f.samples, ((top, h // 2), (left, w // 2)), mode="symmetric")
    return Field2D(ext, f.dx, f.dy), (slice(top, top + h), slice(left, left + w))


def edge_vectors(f, p, x0=1.0, boundary="symmetric", method="chain", delta=None):
    """``(D rho, V_without_linear_term, linear_term, mask)`` cropped to the image.

    Vectors have shape ``(2, H, W)``.
    """
    a, b = _ab(p)
    if not x0 > 0:
        raise ValueError("x0 must be positive")
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    if boundary == "symmetric":
        work, crop = _mirror(f)
    else:
        work, crop = f, (slice(None), slice(None))
    fld = monogenic_extend(work, (a, b), x0)
    feats = compute_features(fld)
    der = feature_derivatives(fld, feats, method, delta)
    mask = der.mask
    D_rho = np.where(mask, dirac_rho(der), 0.0)
    V = phase_congruency_vector(feats, der)
    V = np.where(mask, V, 0.0)
    lin = np.where(mask, linear_term(fld), 0.0)
    cut = (slice(None),) + crop
    return D_rho[cut], V[cut], lin[cut], mask[crop]


def _make_map(raw, method, a, b, x0, threshold, percentile, flag=False):
    strength, scale = normalize_strength(raw, percentile)
    return EdgeMap(strength, method, a, b, float(x0), threshold, float(percentile), flag, raw, scale)


def lca_map(f, p, x0=1.0, threshold=THRESHOLD, percentile=PERCENTILE, boundary="symmetric", method="chain"):
    """Edge strength ``|D rho|`` (gradient of the local complex attenuation)."""
    a, b = _ab(p)
    D_rho, _, _, _ = edge_vectors(f, (a, b), x0, boundary, method)
    return _make_map(vector_modulus(D_rho), "lca", a, b, x0, threshold, percentile)


def mdcpc_map(
    f,
    p,
    x0=1.0,
    include_linear_term=False,
    threshold=THRESHOLD,
    percentile=PERCENTILE,
    boundary="symmetric",
    method="chain",
):
    """Edge strength from the MDCPC vector; the ``i (a/b) x`` term is added only on request."""
    a, b = _ab(p)
    _, V, lin, _ = edge_vectors(f, (a, b), x0, boundary, method)
    if include_linear_term:
        V = V + lin
    return _make_map(vector_modulus(V), "mdcpc", a, b, x0, threshold, percentile, bool(include_linear_term))


# synthetic scenes ---------------------------------------------------------------------------

SYNTH_KINDS = ("step", "disk", "bars", "ramp")


def synth_image(kind, size=128, levels=(64.0, 192.0), noise=0.0, seed=0, radius=None, period=16, width=8):
    """Deterministic test image (gray levels, ``dx = dy = 1``) with a 1-pixel edge raster.

    * ``step``: left half ``levels[0]``, right half ``levels[1]``; edge at column ``size//2``.
    * ``disk``: disk of radius ``size//4`` (or ``radius``) at the center; edge
      is the raster circle of that radius.
    * ``bars``: vertical bars of width ``period`` starting at column ``period//2``;
      edges at every transition inside the image.
    * ``ramp``: step softened by a linear transition ``width`` pixels wide.

    ``noise`` is the standard deviation of additive Gaussian noise in gray
    levels, drawn from ``numpy.random.default_rng(seed)``.
    """
    from skimage.draw import circle_perimeter

    if kind not in SYNTH_KINDS:
        raise ValueError(f"unsupported kind {kind!r}; choose from {SYNTH_KINDS}")
    if size < 32:
        raise ValueError("size must be at least 32")
    lo, hi = float(levels[0]), float(levels[1])
    n = int(size)
    cols = np.arange(n)
    rows = cols[:, None]
    truth = np.zeros((n, n), dtype=bool)
    desc = {"kind": kind, "size": n, "levels": [lo, hi], "noise": float(noise), "seed": int(seed)}
    if kind == "step":
        img = np.where(cols[None, :] >= n // 2, hi, lo) * np.ones((n, 1))
        truth[:, n // 2] = True
        desc["edge_column"] = n // 2
    elif kind == "ramp":
        t = np.clip((cols - n // 2 + width / 2) / width, 0.0, 1.0)
        img = (lo + (hi - lo) * t)[None, :] * np.ones((n, 1))
        truth[:, n // 2] = True
        desc.update(edge_column=n // 2, width=width)
    elif kind == "disk":
        r = n // 4 if radius is None else int(radius)
        c = n // 2
        inside = (cols[None, :] - c) ** 2 + (rows - c) ** 2 <= r * r
        img = np.where(inside, hi, lo)
        rr, cc = circle_perimeter(c, c, r, shape=(n, n))
        truth[rr, cc] = True
        desc.update(radius=r, center=[c, c])
    else:
        off = period // 2
        phase = np.floor_divide(cols - off, period)
        img = np.where(phase % 2 == 0, hi, lo)[None, :] * np.ones((n, 1))
        edges = [c for c in range(1, n) if img[0, c] != img[0, c - 1]]
        truth[:, edges] = True
        desc.update(period=period, edge_columns=edges)
    if noise > 0:
        img = img + np.random.default_rng(seed).normal(0.0, noise, img.shape)
    return Field2D(img, 1.0, 1.0), GroundTruth(truth, desc)


# metrics -----------------------------------------------------------------------------------------


def pratt_fom(candidate, truth, threshold=None, alpha=PRATT_ALPHA):
    """Pratt figure of merit ``sum 1/(1 + alpha d_i^2) / max(N_d, N_t)``; 0 for an empty detection."""
    t = candidate.threshold if threshold is None else threshold
    if t is None or not 0 < t < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {t}")
    det = candidate.detections(t)
    nd, nt = int(det.sum()), truth.count
    if nd == 0 or nt == 0:
        return 0.0
    dist = ndimage.distance_transform_edt(~truth.edge_pixels)
    return float(np.sum(1.0 / (1.0 + alpha * dist[det] ** 2)) / max(nd, nt))


def column_argmax(strength, margin=0):
    """Column of the largest row-averaged strength, ignoring ``margin`` border columns.

    Pass the un-normalized map: clamping at the percentile creates ties.
    """
    s = np.asarray(strength)
    prof = s[margin : s.shape[0] - margin].mean(axis=0)
    if margin:
        prof[:margin] = -np.inf
        prof[len(prof) - margin :] = -np.inf
    return int(np.argmax(prof))


def mean_boundary_distance(candidate, truth, threshold=None):
    """Mean distance (pixels) from detected pixels to the nearest true edge pixel."""
    det = candidate.detections(threshold)
    if not det.any():
        return float("inf")
    dist = ndimage.distance_transform_edt(~truth.edge_pixels)
    return float(dist[det].mean())
