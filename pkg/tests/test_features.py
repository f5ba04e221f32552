import numpy as np
import pytest

from monolct.clifford import CliffordNum
from monolct.features import (
    compute_features,
    cr_residuals,
    dirac_rho,
    feature_derivatives,
    monogenic_features,
    phase_congruency_vector,
    vector_modulus,
)
from monolct.grid import Field2D
from monolct.monogenic import MonogenicField, monogenic_extend
from monolct.validation import gaussian_scene


def blob_scene(n=64, dx=0.25):
    return gaussian_scene(n, dx)


def median_rel(res, scale, margin=4):
    inner = (slice(margin, -margin), slice(margin, -margin))
    m = res.mask[inner]
    r = np.abs(res.R1[inner])[m], vector_modulus(res.R2[(slice(None),) + inner])[m]
    return [float(np.median(v) / scale) for v in r]


@pytest.fixture(scope="module")
def blobs():
    return blob_scene()


@pytest.mark.parametrize("ab", [(0, 1), (0.3, 1), (1, 2)])
def test_reconstruction(blobs, ab):
    field, feats = monogenic_features(blobs, ab, 1.0)
    m = feats.defined_mask
    assert m.mean() > 0.99
    rec = feats.reconstruct().coeffs
    ref = field.channels
    err = np.sqrt(np.sum(np.abs(rec[:3] - ref) ** 2, axis=0))
    size = np.sqrt(np.sum(np.abs(ref) ** 2, axis=0))
    assert np.max((err / size)[m]) < 1e-8
    np.testing.assert_array_equal(rec[3], 0)


def test_unit_vector_squares_to_minus_one(blobs):
    _, feats = monogenic_features(blobs, (1, 2), 1.0)
    I = CliffordNum.vector(2, list(feats.I))
    sq = (I * I).coeffs
    m = feats.defined_mask
    assert np.max(np.abs(sq[0] + 1)[m]) < 1e-10
    assert np.max(np.abs(sq[1:])[:, m]) < 1e-10


def test_real_reduction(blobs):
    _, feats = monogenic_features(blobs, (0, 1), 1.0)
    m = feats.defined_mask
    assert np.max(np.abs(feats.A.imag)) < 1e-9
    assert np.max(np.abs(feats.theta.imag)) < 1e-9
    assert np.all(feats.A.real[m] >= 0)


def test_theta_range_real_image():
    # positive image: f0 > 0 everywhere, so theta stays in [0, pi/2)
    _, feats = monogenic_features(blob_scene(), (0, 1), 1.0)
    th = feats.theta.real[feats.defined_mask]
    assert th.min() >= 0 and th.max() < np.pi / 2
    # a sign-changing image puts theta in (pi/2, pi] where f0 < 0, so A cos theta = f0 holds
    img = Field2D.from_function(lambda x1, x2: np.cos(0.8 * x1) * np.exp(-(x2**2) / 20), (64, 64), 0.5)
    fld, feats = monogenic_features(img, (0, 1), 0.5)
    m = feats.defined_mask
    th = feats.theta.real[m]
    assert th.min() > -np.pi / 2 and th.max() <= np.pi
    assert np.any(th > np.pi / 2)
    np.testing.assert_allclose((feats.A * np.cos(feats.theta))[m], fld.f0[m], atol=1e-10)


def test_closed_form_polar_fields():
    phi = np.linspace(0.1, 1.4, 16).reshape(4, 4)
    chans = np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)])
    feats = compute_features(MonogenicField(chans, 0, 1, 1.0))
    np.testing.assert_allclose(feats.A, 1, atol=1e-14)
    np.testing.assert_allclose(feats.theta, phi, atol=1e-14)
    np.testing.assert_allclose(feats.I[0], 1)
    np.testing.assert_allclose(feats.I[1], 0)
    np.testing.assert_allclose(feats.rho, 0, atol=1e-14)
    np.testing.assert_allclose(feats.r, feats.I * phi)


def test_constant_image_is_masked():
    fld = monogenic_extend(Field2D(np.full((32, 32), 5.0)), (0, 1), 1.0)
    assert compute_features(fld).defined_mask.mean() < 0.01


def test_zero_image_fully_masked():
    res = cr_residuals(Field2D(np.zeros((16, 16))), (1, 2), 1.0)
    assert not res.mask.any()
    np.testing.assert_array_equal(res.R1, 0)
    np.testing.assert_array_equal(res.R2, 0)


def test_amplitude_chirp_invariance(blobs):
    a, b = 0.4, 1.3
    _, f_ab = monogenic_features(blobs, (a, b), 1.0)
    x1, x2 = blobs.coords()
    chirped = blobs.with_samples(np.exp(1j * a * (x1**2 + x2**2) / (2 * b)) * blobs.samples)
    _, f_01 = monogenic_features(chirped, (0, 1), 1.0)
    np.testing.assert_allclose(np.abs(f_ab.A), np.abs(f_01.A), atol=1e-8)


@pytest.mark.parametrize("ab", [(0, 1), (0.2, 1), (1, 2)])
def test_cauchy_riemann_certificate(blobs, ab):
    res = cr_residuals(blobs, ab, 1.0, pad=2)
    _, feats = monogenic_features(blobs, ab, 1.0, pad=2)
    der = feature_derivatives(monogenic_extend(blobs, ab, 1.0, pad=2), feats)
    scale = float(np.median(vector_modulus(dirac_rho(der))[der.mask]))
    r1, r2 = median_rel(res, scale)
    assert r1 < 5e-2 and r2 < 5e-2


def test_fd_route_agrees(blobs):
    res = cr_residuals(blobs, (0, 1), 1.0, method="fd", pad=2)
    fld = monogenic_extend(blobs, (0, 1), 1.0, pad=2)
    der = feature_derivatives(fld, compute_features(fld))
    scale = float(np.median(vector_modulus(dirac_rho(der))[der.mask]))
    r1, r2 = median_rel(res, scale)
    assert r1 < 5e-2 and r2 < 5e-2


def test_chain_and_fd_derivatives_close(blobs):
    fld = monogenic_extend(blobs, (0, 1), 1.0)
    feats = compute_features(fld)
    chain = feature_derivatives(fld, feats, "chain")
    fd = feature_derivatives(fld, feats, "fd")
    m = chain.mask & fd.mask
    m[:4], m[-4:], m[:, :4], m[:, -4:] = False, False, False, False
    for k in range(3):
        diff = np.abs(chain.rho[k] - fd.rho[k])[m]
        assert np.median(diff) < 1e-2 * np.median(np.abs(chain.rho[1])[m])


def test_residual_convergence():
    coarse = cr_residuals(blob_scene(64, 0.25), (0, 1), 1.0, pad=2)
    fine = cr_residuals(blob_scene(128, 0.125), (0, 1), 1.0, pad=2)
    r_coarse = np.median(vector_modulus(coarse.R2)[coarse.mask])
    r_fine = np.median(vector_modulus(fine.R2)[fine.mask])
    assert r_coarse / r_fine >= 1.7


def test_mdcpc_is_minus_drho_where_cr_holds(blobs):
    fld = monogenic_extend(blobs, (0, 1), 1.0, pad=2)
    feats = compute_features(fld)
    der = feature_derivatives(fld, feats)
    V = phase_congruency_vector(feats, der)
    D = dirac_rho(der)
    m = der.mask
    gap = vector_modulus(V + D)[m]
    assert np.median(gap) < 5e-2 * np.median(vector_modulus(D)[m])


def test_argument_checks(blobs):
    with pytest.raises(ValueError):
        cr_residuals(blobs, (0, 1), 0.0)
    fld = monogenic_extend(blobs, (0, 1), 1.0)
    with pytest.raises(ValueError):
        feature_derivatives(fld, method="spline")
