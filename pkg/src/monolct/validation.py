"""Numerical checks behind ``monolct validate`` and the acceptance tests.

Each ``check_*`` function runs one property at its stated tolerance and
returns a :class:`Check`.  :func:`classic_ft_edge_maps` is a separately
written real-arithmetic implementation of the classical (Fourier) monogenic
edge pipeline, used as the reference for the Fourier-reduction check.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import analytic1d, edge, features, lct, monogenic
from .grid import Field2D, SampledSignal1D, raised_cosine_window
from .lct import ChirpSamplingWarning, LctParams


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.value:.3e} (tol {self.tol:.1e}, {self.seconds:.1f}s)"

    def to_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "tol": self.tol,
            "passed": self.passed,
            "seconds": self.seconds,
            "detail": self.detail,
        }


def _timed(func):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ChirpSamplingWarning)
            out = func(*args, **kwargs)
        out.seconds = time.perf_counter() - t0
        return out

    run.__name__ = func.__name__
    run.__doc__ = func.__doc__
    return run


def _rel(a, b):
    return float(np.linalg.norm(np.ravel(a) - np.ravel(b)) / np.linalg.norm(np.ravel(b)))


def random_params(rng, count, b_range=(0.5, 3.0)):
    out = []
    for _ in range(count):
        a = rng.uniform(-2, 2)
        b = rng.uniform(*b_range)
        d = rng.uniform(-2, 2)
        out.append(LctParams.from_ab(a, b, d))
    return out


def random_bandlimited(rng, n, dx, band=0.125):
    """Random complex signal whose DFT is supported on the lowest ``band`` fraction of bins."""
    k = np.fft.fftfreq(n)
    spec = (rng.normal(size=n) + 1j * rng.normal(size=n)) * (np.abs(k) < band / 2)
    return SampledSignal1D.centered(np.fft.ifft(spec) * np.sqrt(n), dx)


# 1. unitarity --------------------------------------------------------------------------------------


@_timed
def check_lct_unitarity(n_signals=100, n_params=10, n=256, dx=0.1, seed=1):
    rng = np.random.default_rng(seed)
    params = random_params(rng, n_params)
    worst_parseval = 0.0
    worst_round = 0.0
    for _ in range(n_signals):
        f = random_bandlimited(rng, n, dx)
        ef = f.energy()
        for p in params:
            F = lct.lct_forward_1d(f, p)
            worst_parseval = max(worst_parseval, abs(F.energy() - ef) / ef)
            back = lct.lct_inverse_1d(F, p, start=f.start)
            worst_round = max(worst_round, _rel(back.samples, f.samples))
    value = max(worst_parseval / 1e-8, worst_round / 1e-7)
    return Check(
        "lct unitarity (Parseval < 1e-8, round trip < 1e-7)",
        value,
        1.0,
        value < 1.0,
        {"parseval": worst_parseval, "round_trip": worst_round, "signals": n_signals, "params": n_params},
    )


# 2. oracle equivalence ---------------------------------------------------------------------------

ORACLE_PARAMS = ((2.0, 1.0, 1.0, 1.0), (0.0, 1.0, -1.0, 0.0), (1.0, 2.0, 0.0, 1.0), (-1.0, 0.5, -6.0, 2.0))


@_timed
def check_lct_oracle(n=512):
    errs = {}
    for t in ORACLE_PARAMS:
        p = LctParams(*t)
        # at least 8 samples per chirp period at the grid edge
        dx = min(0.1, np.sqrt(2 * np.pi * p.b / (8 * max(abs(p.a), 1e-9) * (n // 2))))
        f = SampledSignal1D.from_function(lambda x: np.exp(-(x**2) / 2) * (1 + 0.3j * x), n, dx)
        F = lct.lct_forward_1d(f, p)
        errs[str(t)] = _rel(F.samples, lct.lct_quadrature_oracle(f, p, F.x))
    worst = max(errs.values())
    return Check("lct fast path vs quadrature oracle, N=512", worst, 1e-4, worst < 1e-4, errs)


RIESZ_CASES = ((0.0, 1.0), (0.05, 1.0))


def riesz_test_image(n=32, sigma=4.0, dx=1.0, axis=1):
    def func(x1, x2):
        lead = x1 if axis == 1 else x2
        return lead * np.exp(-(x1**2 + x2**2) / (2 * sigma**2))

    return Field2D.from_function(func, (n, n), dx)


@_timed
def check_riesz_oracle(n=32, pad=4):
    errs = {}
    for a, b in RIESZ_CASES:
        for axis in (1, 2):
            f = riesz_test_image(n, axis=axis)
            for j in (1, 2):
                fast = monogenic.riesz_spectral(f, a, b, j, pad=pad).samples
                slow = monogenic.riesz_spatial_oracle(f, a, b, j).samples
                errs[f"a={a},b={b},f_axis={axis},j={j}"] = _rel(fast, slow)
    worst = max(errs.values())
    return Check("riesz spectral vs p.v. spatial oracle, 32x32", worst, 5e-2, worst < 5e-2, errs)


# 3. one-sided spectrum -----------------------------------------------------------------------------

GAS_PARAMS = ((0.0, 1.0, -1.0, 0.0), (1.0, 1.0, 0.0, 1.0), (2.0, 1.0, 1.0, 1.0))


def windowed_signals(n=2048, dx=None):
    dx = 64.0 / n if dx is None else dx
    w = raised_cosine_window(n, 0.1)
    sigs = {
        "cos5": lambda x: np.cos(5 * x),
        "am": lambda x: (1 + 0.5 * np.cos(0.7 * x)) * np.sin(3 * x + 0.2),
        "gauss": lambda x: np.exp(-(x**2) / 8) * np.cos(2 * x),
    }
    return {k: SampledSignal1D.from_function(lambda x, g=g: w * g(x), n, dx) for k, g in sigs.items()}


@_timed
def check_gas_one_sided():
    fr = {}
    for t in GAS_PARAMS:
        p = LctParams(*t)
        # finer grid keeps the chirp resolved for a != 0
        for name, f in windowed_signals(4096, 32.0 / 4096).items():
            g = analytic1d.gas(f, p.a, p.b)
            F = lct.lct_forward_1d(g.base, p)
            fr[f"{t}:{name}"] = analytic1d.negative_frequency_fraction(F)
    worst = max(fr.values())
    return Check("GAS negative-frequency energy fraction", worst, 1e-6, worst < 1e-6, fr)


# 4. half-plane extension -------------------------------------------------------------------------


def halfplane_signal(n=32768, dx=0.02):
    return SampledSignal1D.from_function(lambda x: np.exp(-(x**2) / 2) * (1 + 0.5 * np.cos(3 * x)), n, dx)


@_timed
def check_halfplane(n_points=20, seed=4):
    rng = np.random.default_rng(seed)
    pts = np.column_stack([rng.uniform(-3, 3, n_points), rng.uniform(0.1, 2.0, n_points)])
    f = halfplane_signal()
    errs = {}
    for t in GAS_PARAMS:
        p = LctParams(*t)
        spec = analytic1d.gas_extend(f, p, pts)
        quad = analytic1d.poisson_representation(f, p, pts)
        errs[str(t)] = float(np.max(np.abs(spec - quad) / np.abs(quad)))
    worst = max(errs.values())
    return Check("half-plane extension vs chirped Poisson integrals", worst, 1e-3, worst < 1e-3, errs)


# 5. upper half-space extension ---------------------------------------------------------------------

HALFSPACE_CASES = ((0.0, 1.0), (1.0, 1.0))


def halfspace_image(n=16, dx=0.25, sigma=0.5):
    return Field2D.from_function(lambda x1, x2: np.exp(-(x1**2 + x2**2) / (2 * sigma**2)), (n, n), dx)


@_timed
def check_halfspace(x0=0.5, pad=8):
    f = halfspace_image()
    errs = {}
    for a, b in HALFSPACE_CASES:
        spec = monogenic.monogenic_extend(f, (a, b), x0, pad=pad).channels
        quad = monogenic.monogenic_extend_quadrature(f, (a, b), x0).channels
        errs[f"a={a},b={b}"] = _rel(spec, quad)
    worst = max(errs.values())
    return Check("monogenic extension vs Poisson quadrature, 16x16", worst, 1e-2, worst < 1e-2, errs)


# 6. almost monogenic ---------------------------------------------------------------------------------

MONOGENICITY_CASES = ((0.0, 1.0), (1.0, 1.0))


def gaussian_scene(n=64, dx=0.1875):
    return Field2D.from_function(
        lambda x1, x2: np.exp(-((x1 - 0.3) ** 2 + x2**2) / 2) + 0.6 * np.exp(-((x1 + 1.5) ** 2 + (x2 - 1) ** 2) / 0.8),
        (n, n),
        dx,
    )


@_timed
def check_monogenicity(x0=1.0):
    f = gaussian_scene()
    res = {}
    for a, b in MONOGENICITY_CASES:
        fld = monogenic.monogenic_extend(f, (a, b), x0)
        res[f"a={a},b={b}"] = monogenic.monogenicity_residual(fld)
        if a != 0:
            res[f"a={a},b={b},no_chirp"] = monogenic.monogenicity_residual(fld, with_chirp=False)
    worst = max(v for k, v in res.items() if "no_chirp" not in k)
    ratios = [res[k] / res[k.replace(",no_chirp", "")] for k in res if "no_chirp" in k]
    ok = worst < 5e-2 and all(r >= 10 for r in ratios)
    return Check(
        "Dirac residual of the chirped extension (ablation >= 10x)",
        worst,
        5e-2,
        ok,
        {**res, "ablation_ratio_min": min(ratios)},
    )


# 7. Cauchy-Riemann duality ---------------------------------------------------------------------------

DUALITY_CASES = ((0.0, 1.0), (1.0, 2.0))


def smooth_scene(n=128, dx=1.0):
    s = n / 16.0
    return Field2D.from_function(
        lambda x1, x2: 100
        + 80 * np.exp(-((x1 - s) ** 2 + (x2 + s / 2) ** 2) / (2 * (2 * s) ** 2))
        + 50 * np.exp(-((x1 + 2.5 * s) ** 2 + (x2 - 2 * s) ** 2) / (2 * s**2)),
        (n, n),
        dx,
    )


@_timed
def check_cr_duality(x0=1.0):
    scenes = {"blobs": smooth_scene(), "ramp": edge.synth_image("ramp", 128, width=16)[0]}
    corr = {}
    resid = {}
    for sname, f in scenes.items():
        for a, b in DUALITY_CASES:
            D, V, L, m = edge.edge_vectors(f, (a, b), x0)
            lca_s = features.vector_modulus(D)[m]
            mdc_s = features.vector_modulus(V + L)[m]
            key = f"{sname}:a={a},b={b}"
            corr[key] = float(np.corrcoef(lca_s, mdc_s)[0, 1])
            resid[key] = float(np.linalg.norm((V + L + D)[:, m]) / np.linalg.norm(D[:, m]))
    worst = min(corr.values())
    return Check(
        "correlation of |MDCPC| (linear term on) and |D rho|",
        worst,
        0.95,
        worst > 0.95,
        {"correlation": corr, "relative_residual": resid},
    )


# 8. Fourier reduction ----------------------------------------------------------------------------------


def _cdiff(u, axis):
    p = np.pad(u, [(1, 1) if k == axis else (0, 0) for k in range(u.ndim)], mode="edge")
    n = u.shape[axis]
    hi = np.take(p, np.arange(2, n + 2), axis=axis)
    lo = np.take(p, np.arange(0, n), axis=axis)
    return (hi - lo) / 2.0


def classic_ft_edge_maps(image, x0=1.0, percentile=99.0, eps=1e-12):
    """Classical Poisson-scale monogenic LA and MDPC maps in real arithmetic.

    Unit pixel grid, mirrored extension, numpy FFT.  Returns ``(la, mdpc)``
    strength maps normalized like :mod:`monolct.edge`.
    """
    u = np.asarray(image, dtype=float)
    h, w = u.shape
    top, left = h - h // 2, w - w // 2
    ext = np.pad(u, ((top, h // 2), (left, w // 2)), mode="symmetric")
    H, W = ext.shape
    k1 = 2 * np.pi * np.fft.fftfreq(W)[None, :] * np.ones((H, 1))
    k2 = 2 * np.pi * np.fft.fftfreq(H)[:, None] * np.ones((1, W))
    mag = np.hypot(k1, k2)
    if W % 2 == 0:
        k1[:, W // 2] = 0
    if H % 2 == 0:
        k2[H // 2, :] = 0
    with np.errstate(invalid="ignore", divide="ignore"):
        q1 = np.where(mag > 0, k1 / mag, 0.0)
        q2 = np.where(mag > 0, k2 / mag, 0.0)
    U = np.fft.fft2(ext)
    P = np.exp(-x0 * mag)
    spec = [P * U, 1j * q1 * P * U, 1j * q2 * P * U]
    f = [np.fft.ifft2(s).real for s in spec]
    f0x = [np.fft.ifft2(-mag * s).real for s in spec]

    A2 = f[0] ** 2 + f[1] ** 2 + f[2] ** 2
    vn = np.sqrt(f[1] ** 2 + f[2] ** 2)
    ok = (np.sqrt(A2) > eps * np.sqrt(A2).max()) & (vn > eps * np.sqrt(A2).max())
    A2s = np.where(ok, A2, 1.0)
    vns = np.where(ok, vn, 1.0)
    theta = np.arctan2(vn, f[0])
    I1, I2 = f[1] / vns, f[2] / vns

    def parts(df):
        dvn = (f[1] * df[1] + f[2] * df[2]) / vns
        drho = (f[0] * df[0] + f[1] * df[1] + f[2] * df[2]) / A2s
        dth = (f[0] * dvn - vns * df[0]) / A2s
        dI1 = (df[1] - I1 * dvn) / vns
        dI2 = (df[2] - I2 * dvn) / vns
        return drho, dth, dI1, dI2

    d_x1 = parts([_cdiff(c, 1) for c in f])
    d_x2 = parts([_cdiff(c, 0) for c in f])
    d_x0 = parts(f0x)

    la = np.sqrt(d_x1[0] ** 2 + d_x2[0] ** 2)
    div = d_x1[2] + d_x2[3]
    curl = d_x1[3] - d_x2[2]
    vec1 = -div * I1 - curl * I2
    vec2 = -div * I2 + curl * I1
    s, c = np.sin(theta), np.cos(theta)
    V1 = I1 * d_x0[1] + s * c * d_x0[2] - vec1 * s * s
    V2 = I2 * d_x0[1] + s * c * d_x0[3] - vec2 * s * s
    mdpc = np.sqrt(V1**2 + V2**2)
    crop = (slice(top, top + h), slice(left, left + w))
    out = []
    for m in (np.where(ok, la, 0.0)[crop], np.where(ok, mdpc, 0.0)[crop]):
        scale = np.percentile(m, percentile)
        out.append(np.clip(m / scale, 0, 1) if scale > 0 else np.zeros_like(m))
    return tuple(out)


@_timed
def check_fourier_reduction(x0=1.0):
    imgs = {
        "step": edge.synth_image("step")[0],
        "disk": edge.synth_image("disk")[0],
        "bars_noisy": edge.synth_image("bars", noise=8.0, seed=3)[0],
        "blobs": smooth_scene(),
    }
    p = LctParams.fourier()
    errs = {}
    for name, f in imgs.items():
        la_ref, mdpc_ref = classic_ft_edge_maps(f.samples.real, x0)
        errs[f"{name}:lca"] = float(np.max(np.abs(edge.lca_map(f, p, x0).strength - la_ref)))
        errs[f"{name}:mdcpc"] = float(np.max(np.abs(edge.mdcpc_map(f, p, x0).strength - mdpc_ref)))
    worst = max(errs.values())
    return Check("Fourier parameters vs classic FT monogenic pipeline", worst, 1e-8, worst < 1e-8, errs)


# 9. localization -----------------------------------------------------------------------------------------

LOCALIZATION_PARAMS = ((0.0, 1.0), (0.5, 1.0), (1.0, 2.0))
LOCALIZATION_SCALES = (0.5, 1.0, 2.0)


def localization_table(size=128, params=LOCALIZATION_PARAMS, scales=LOCALIZATION_SCALES):
    step, step_truth = edge.synth_image("step", size)
    disk, disk_truth = edge.synth_image("disk", size)
    col = step_truth.description["edge_column"]
    rows = []
    for a, b in params:
        for x0 in scales:
            for method in ("lca", "mdcpc"):
                fn = edge.lca_map if method == "lca" else edge.mdcpc_map
                es = fn(step, (a, b), x0)
                ed = fn(disk, (a, b), x0)
                arg = edge.column_argmax(es.raw)
                rows.append(
                    {
                        "method": method,
                        "a": a,
                        "b": b,
                        "x0": x0,
                        "step_argmax": arg,
                        "step_offset": abs(arg - col),
                        "disk_mean_distance": edge.mean_boundary_distance(ed, disk_truth),
                        "fom_step": edge.pratt_fom(es, step_truth),
                        "fom_disk": edge.pratt_fom(ed, disk_truth),
                    }
                )
    return rows


@_timed
def check_localization():
    rows = localization_table()
    bad = []
    for r in rows:
        if r["step_offset"] > 1 or not r["disk_mean_distance"] < 1.5 or min(r["fom_step"], r["fom_disk"]) < 0.85:
            bad.append(r)
    worst_offset = max(r["step_offset"] for r in rows)
    return Check(
        "edge localization (step argmax <= 1 px, disk distance < 1.5 px, FOM >= 0.85)",
        float(len(bad)),
        0.0,
        not bad,
        {"failing_rows": len(bad), "rows": rows, "worst_step_offset": worst_offset},
    )


# 10. comparison harness ------------------------------------------------------------------------------------


@_timed
def check_compare_harness():
    from .cli import compare_table

    kw = dict(kind="disk", size=64, noises=(0.0, 16.0), seed=7, grid=((0.0, 1.0), (0.25, 1.0), (1.0, 2.0)), x0=1.0)
    first = compare_table(**kw)
    second = compare_table(**kw)
    from .io import dumps_report

    same = dumps_report(first) == dumps_report(second)
    n_rows = len(first["rows"])
    ok = same and n_rows == 2 * len(kw["noises"]) * len(kw["grid"])
    return Check("compare harness emits a deterministic FOM table", float(not ok), 0.0, ok, {"rows": n_rows, "identical": same})


# suites ---------------------------------------------------------------------------------------------------------

ACCEPTANCE = (
    ("1", check_lct_unitarity),
    ("2a", check_lct_oracle),
    ("2b", check_riesz_oracle),
    ("3", check_gas_one_sided),
    ("4", check_halfplane),
    ("5", check_halfspace),
    ("6", check_monogenicity),
    ("7", check_cr_duality),
    ("8", check_fourier_reduction),
    ("9", check_localization),
    ("10", check_compare_harness),
)

SUITES = {
    "lct": ("1", "2a"),
    "analytic": ("3", "4"),
    "monogenic": ("2b", "5", "6"),
    "features": ("7",),
    "edge": ("8", "9"),
    "harness": ("10",),
}
SUITES["all"] = tuple(k for k, _ in ACCEPTANCE)


def run_suite(name):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    table = dict(ACCEPTANCE)
    return [(key, table[key]()) for key in SUITES[name]]
