import numpy as np
import pytest

from monolct.clifford import CliffordNum
from monolct.edge import (
    EdgeMap,
    GroundTruth,
    column_argmax,
    dirac_apply,
    edge_vectors,
    lca_map,
    mdcpc_map,
    mean_boundary_distance,
    normalize_strength,
    pratt_fom,
    synth_image,
)
from monolct.features import compute_features, feature_derivatives
from monolct.grid import Field2D, grid_coords
from monolct.monogenic import monogenic_extend

MAPS = {"lca": lca_map, "mdcpc": mdcpc_map}


def scalar_field(values):
    return CliffordNum.scalar(2, values)


# Dirac operator -------------------------------------------------------------------------------------


def test_dirac_of_linear_field():
    x1, x2 = np.broadcast_arrays(*grid_coords((9, 11), 0.5, 0.25))
    D = dirac_apply(scalar_field(x1), 0.5, 0.25)
    inner = (slice(1, -1), slice(1, -1))
    np.testing.assert_allclose(D.coeffs[1][inner], 1, atol=1e-13)
    np.testing.assert_allclose(D.coeffs[2][inner], 0, atol=1e-13)


def test_dirac_of_quadratic_field():
    x1, x2 = np.broadcast_arrays(*grid_coords((9, 11), 0.5, 0.25))
    D = dirac_apply(scalar_field(x1**2 + x2**2), 0.5, 0.25)
    inner = (slice(1, -1), slice(1, -1))
    np.testing.assert_allclose(D.coeffs[1][inner], 2 * x1[inner], atol=1e-12)
    np.testing.assert_allclose(D.coeffs[2][inner], 2 * x2[inner], atol=1e-12)
    np.testing.assert_allclose(D.coeffs[0], 0)
    np.testing.assert_allclose(D.coeffs[3], 0)


def test_dirac_of_vector_field_has_scalar_and_bivector():
    x1, x2 = np.broadcast_arrays(*grid_coords((8, 8), 1.0, 1.0))
    v = CliffordNum.vector(2, [x1, x2])
    D = dirac_apply(v)
    inner = (slice(1, -1), slice(1, -1))
    # e1 e1 + e2 e2 = -2; the curl part vanishes for a gradient field
    np.testing.assert_allclose(D.coeffs[0][inner], -2)
    np.testing.assert_allclose(D.coeffs[3][inner], 0, atol=1e-13)


def test_dirac_rejects_non_field():
    with pytest.raises(ValueError):
        dirac_apply(CliffordNum.scalar(2, 1.0))


def test_D_I_times_I_has_no_pseudoscalar_part():
    f = Field2D.from_function(lambda x1, x2: np.exp(-(x1**2 + x2**2) / 50), (48, 48))
    fld = monogenic_extend(f, (0, 1), 1.0)
    feats = compute_features(fld)
    der = feature_derivatives(fld, feats)
    I = CliffordNum.vector(2, list(feats.I))
    DI = CliffordNum.blade(2, (1,)) * CliffordNum.vector(2, list(der.I[1])) + CliffordNum.blade(
        2, (2,)
    ) * CliffordNum.vector(2, list(der.I[2]))
    prod = DI * I
    # grade 2 is the top grade for n = 2; (D I) I has only grades 0..2 and no grade-3 content exists
    assert prod.coeffs.shape[0] == 4
    # for a circularly symmetric blob I is radial, so the curl part of D I vanishes
    assert np.median(np.abs(prod.coeffs[3])) < 1e-2 * np.median(np.abs(prod.coeffs[1:3]))


# synthetic scenes -------------------------------------------------------------------------------------


def test_step_truth():
    img, truth = synth_image("step", 128)
    assert truth.edge_pixels[:, 64].all() and truth.count == 128
    assert img.samples[0, 63] == 64 and img.samples[0, 64] == 192
    assert img.dx == img.dy == 1.0


def test_disk_truth_is_circle_of_radius_32():
    img, truth = synth_image("disk", 128)
    rr, cc = np.nonzero(truth.edge_pixels)
    r = np.hypot(rr - 64, cc - 64)
    assert np.all(np.abs(r - 32) < 1)
    assert truth.description["radius"] == 32


def test_bars_truth():
    _, truth = synth_image("bars", 128, period=16)
    assert len(truth.description["edge_columns"]) == 8
    cols = np.nonzero(truth.edge_pixels[0])[0]
    np.testing.assert_array_equal(cols, truth.description["edge_columns"])


def test_ramp_levels():
    img, truth = synth_image("ramp", 64, width=8)
    row = img.samples[0].real
    assert row[0] == 64 and row[-1] == 192
    assert np.all(np.diff(row) >= 0)
    assert truth.edge_pixels[:, 32].all()


def test_synth_noise_is_seeded():
    a, _ = synth_image("disk", 64, noise=8, seed=3)
    b, _ = synth_image("disk", 64, noise=8, seed=3)
    c, _ = synth_image("disk", 64, noise=8, seed=4)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_synth_rejects_bad_input():
    with pytest.raises(ValueError):
        synth_image("triangle")
    with pytest.raises(ValueError):
        synth_image("step", 16)


# Pratt figure of merit ------------------------------------------------------------------------------


def edge_map(det):
    return EdgeMap(det.astype(float), "lca", 0, 1, 1.0)


def test_pratt_identical():
    _, truth = synth_image("step", 64)
    assert pratt_fom(edge_map(truth.edge_pixels), truth) == pytest.approx(1.0)


def test_pratt_one_pixel_shift():
    _, truth = synth_image("step", 64)
    shifted = np.roll(truth.edge_pixels, 1, axis=1)
    assert pratt_fom(edge_map(shifted), truth) == pytest.approx(0.9)


def test_pratt_empty_detection():
    _, truth = synth_image("step", 64)
    assert pratt_fom(edge_map(np.zeros((64, 64), bool)), truth) == 0.0


def test_pratt_threshold_checked():
    _, truth = synth_image("step", 64)
    with pytest.raises(ValueError):
        pratt_fom(edge_map(truth.edge_pixels), truth, threshold=1.0)


def test_mean_boundary_distance():
    _, truth = synth_image("step", 64)
    shifted = np.roll(truth.edge_pixels, 2, axis=1)
    assert mean_boundary_distance(edge_map(shifted), truth) == pytest.approx(2.0)
    assert mean_boundary_distance(edge_map(np.zeros((64, 64), bool)), truth) == float("inf")


def test_normalize_strength():
    raw = np.arange(1000.0)
    s, scale = normalize_strength(raw)
    assert scale == pytest.approx(np.percentile(raw, 99))
    assert s.max() == 1.0 and s.min() == 0.0
    z, zscale = normalize_strength(np.zeros(10))
    assert zscale == 0.0 and not z.any()


def test_column_argmax_margin():
    s = np.zeros((10, 20))
    s[:, 0] = 5
    s[:, 7] = 1
    assert column_argmax(s) == 0
    assert column_argmax(s, margin=2) == 7


# edge maps --------------------------------------------------------------------------------------------


@pytest.mark.parametrize("method", ["lca", "mdcpc"])
def test_constant_image_gives_zero_map(method):
    img = Field2D(np.full((32, 32), 100.0))
    em = MAPS[method](img, (0, 1), 1.0)
    assert not em.strength.any()


def test_constant_image_is_not_flat_for_nonzero_a():
    # the chirped constant has a broad spectrum, so its monogenic field is not degenerate
    img = Field2D(np.full((32, 32), 100.0))
    assert lca_map(img, (1, 2), 1.0).raw.max() > 1e-3


@pytest.mark.parametrize("method", ["lca", "mdcpc"])
def test_strength_in_unit_interval(method):
    img, _ = synth_image("disk", 64, noise=8)
    em = MAPS[method](img, (0.5, 1), 1.0)
    assert em.strength.min() >= 0 and em.strength.max() <= 1
    assert em.scale > 0
    d = em.to_dict()
    assert d["percentile"] == 99.0 and d["threshold"] == 0.3


@pytest.mark.parametrize("method", ["lca", "mdcpc"])
def test_step_response_peaks_next_to_the_step(method):
    # the strongest column sits on the dark side of the step, within three pixels
    img, truth = synth_image("step", 128)
    em = MAPS[method](img, (0, 1), 1.0)
    assert abs(column_argmax(em.raw) - 63.5) <= 1.5 + 1


def test_mdcpc_linear_term_flag():
    img, _ = synth_image("disk", 64)
    off = mdcpc_map(img, (1, 2), 1.0)
    on = mdcpc_map(img, (1, 2), 1.0, include_linear_term=True)
    assert on.to_dict()["include_linear_term"] is True
    assert not np.allclose(off.raw, on.raw)
    # the a = 0 map has no linear term at all
    np.testing.assert_array_equal(mdcpc_map(img, (0, 1)).raw, mdcpc_map(img, (0, 1), include_linear_term=True).raw)


def test_periodic_boundary_option():
    img, _ = synth_image("step", 64)
    sym = lca_map(img, (0, 1), 1.0)
    per = lca_map(img, (0, 1), 1.0, boundary="periodic")
    # the periodic transform sees a second step at the wrap-around
    assert per.raw[:, :3].mean() > 10 * sym.raw[:, :3].mean()
    with pytest.raises(ValueError):
        lca_map(img, (0, 1), boundary="reflect")


def test_edge_vectors_shapes_and_checks():
    img, _ = synth_image("disk", 48)
    D, V, L, m = edge_vectors(img, (1, 2), 1.0)
    assert D.shape == V.shape == L.shape == (2, 48, 48)
    assert m.shape == (48, 48)
    with pytest.raises(ValueError):
        edge_vectors(img, (1, 2), 0.0)


@pytest.mark.parametrize("method", ["lca", "mdcpc"])
@pytest.mark.parametrize("kind", ["step", "disk"])
def test_fourier_case_degrades_with_noise(method, kind):
    foms = []
    for sigma in (0, 8, 16, 32):
        img, truth = synth_image(kind, 128, noise=sigma, seed=11)
        foms.append(pratt_fom(MAPS[method](img, (0, 1), 1.0), truth))
    assert all(f1 >= f2 for f1, f2 in zip(foms, foms[1:])), foms


def test_ground_truth_count():
    g = GroundTruth(np.eye(4, dtype=bool), {"kind": "diag"})
    assert g.count == 4



@pytest.mark.xfail(
    strict=True,
    reason="at a != 0 the maps are dominated by the deterministic chirp response; noise barely moves the FOM and can raise it",
)
def test_chirped_case_degrades_with_noise():
    bad = []
    for ab in ((0.5, 1), (1, 2)):
        for kind in ("step", "disk"):
            for method, fn in MAPS.items():
                foms = []
                for sigma in (0, 8, 16, 32):
                    img, truth = synth_image(kind, 128, noise=sigma, seed=11)
                    foms.append(pratt_fom(fn(img, ab, 1.0), truth))
                if any(f2 > f1 for f1, f2 in zip(foms, foms[1:])):
                    bad.append((ab, kind, method, foms))
    assert not bad, bad
