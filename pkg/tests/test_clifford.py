import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monolct.clifford import (
    CliffordNum,
    Paravector,
    basis,
    complex_arctan,
    complex_log,
    complex_sqrt,
    from_string,
    geometric_product,
    grade_parts,
    polar_decompose,
    to_string,
)

# x = (1+i) + (2+5i)e1 + (1+2i)e2 + (3+i)e3 + (2+6i)e12 + (5+3i)e13 + (1+i)e23 + (6+9i)e123
EXAMPLE = CliffordNum(3, [1 + 1j, 2 + 5j, 1 + 2j, 3 + 1j, 2 + 6j, 5 + 3j, 1 + 1j, 6 + 9j])


def e(n, *idx):
    return CliffordNum.blade(n, idx)


def test_basis_order():
    assert basis(3) == ((), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3))
    assert basis(1) == ((), (1,))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generators_square_to_minus_one(n):
    for i in range(1, n + 1):
        assert (e(n, i) * e(n, i)).allclose(-1.0)


@pytest.mark.parametrize("n", [2, 3])
def test_anticommutation(n):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                s = e(n, i) * e(n, j) + e(n, j) * e(n, i)
                assert s.allclose(0.0)


def test_e1_e2_products():
    assert (e(2, 1) * e(2, 2)).allclose(e(2, 1, 2))
    assert (e(2, 2) * e(2, 1)).allclose(-e(2, 1, 2))
    assert e(3, 2, 1).allclose(-e(3, 1, 2))


def test_identity_element():
    x = CliffordNum.scalar(1, 1.0) + e(1, 1)
    assert (x * CliffordNum.scalar(1, 1.0)).allclose(x)


def test_pseudoscalar_square():
    # (e1 e2 e3)^2 = +1 in this signature
    assert (e(3, 1, 2, 3) * e(3, 1, 2, 3)).allclose(1.0)
    assert (e(2, 1, 2) * e(2, 1, 2)).allclose(-1.0)


def test_grade_parts_of_worked_example():
    s, v, rest = grade_parts(EXAMPLE)
    assert s == 1 + 1j
    np.testing.assert_array_equal(v, [2 + 5j, 1 + 2j, 3 + 1j])
    total = CliffordNum.vector(3, list(v), scalar=s) + rest
    assert total.allclose(EXAMPLE)
    np.testing.assert_array_equal(rest.coeffs[:4], 0)


def test_grade_parts_of_zero():
    s, v, rest = grade_parts(CliffordNum.zero(3))
    assert s == 0
    np.testing.assert_array_equal(v, np.zeros(3))
    assert rest.allclose(0.0)


def test_norm_is_coefficient_sum():
    expected = np.sqrt(sum(abs(c) ** 2 for c in EXAMPLE.coeffs))
    assert EXAMPLE.norm() == pytest.approx(expected)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        geometric_product(e(2, 1), e(3, 1))
    with pytest.raises(ValueError):
        CliffordNum(4, np.zeros(16))
    with pytest.raises(ValueError):
        CliffordNum(2, np.zeros(3))


def test_string_round_trip():
    text = to_string(EXAMPLE)
    assert text.startswith("(1+1j)*e0 + (2+5j)*e1")
    assert from_string(text, 3).allclose(EXAMPLE, atol=0)


def test_from_string_rejects_unknown_blade():
    with pytest.raises(ValueError):
        from_string("(1+0j)*e4", 3)


def test_broadcast_over_fields(rng):
    a = CliffordNum(2, rng.normal(size=(4, 5, 6)) + 1j * rng.normal(size=(4, 5, 6)))
    b = CliffordNum(2, rng.normal(size=(4, 5, 6)))
    ab = a * b
    k = (2, 3)
    single = CliffordNum(2, a.coeffs[:, 2, 3]) * CliffordNum(2, b.coeffs[:, 2, 3])
    np.testing.assert_allclose(ab.coeffs[(slice(None),) + k], single.coeffs, atol=1e-14)


coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_associativity(n, data):
    size = 2**n
    x, y, z = (CliffordNum(n, data.draw(st.lists(coeff, min_size=size, max_size=size))) for _ in range(3))
    left = (x * y) * z
    right = x * (y * z)
    scale = max(1.0, float(np.max(np.abs(left.coeffs))))
    assert np.max(np.abs(left.coeffs - right.coeffs)) < 1e-12 * scale


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_bilinearity(n, data):
    size = 2**n
    x, y, z = (CliffordNum(n, data.draw(st.lists(coeff, min_size=size, max_size=size))) for _ in range(3))
    lam = data.draw(coeff)
    assert (x * (y + z * lam)).allclose(x * y + (x * z) * lam, atol=1e-9)


# branch conventions ----------------------------------------------------------------------


def test_complex_sqrt_examples():
    assert complex_sqrt(-1) == pytest.approx(1j)
    assert complex_sqrt(-1 - 0j) == pytest.approx(1j)
    assert complex_sqrt(4) == pytest.approx(2)
    assert complex_sqrt(2j * np.pi) == pytest.approx(np.sqrt(2 * np.pi) * np.exp(1j * np.pi / 4))
    assert complex_sqrt(0) == 0


def test_complex_sqrt_branch(rng):
    z = rng.normal(size=500) + 1j * rng.normal(size=500)
    z = np.concatenate([z, [-1, -4, 1j, -1j, 0]])
    w = complex_sqrt(z)
    np.testing.assert_allclose(w * w, z, atol=1e-12)
    arg = np.angle(w)
    assert np.all((arg > -np.pi / 2) & (arg <= np.pi / 2))


def test_complex_log_principal():
    assert complex_log(-1) == pytest.approx(1j * np.pi)
    assert complex_log(1j) == pytest.approx(0.5j * np.pi)


def test_complex_arctan_examples():
    assert complex_arctan(0) == 0
    assert complex_arctan(1) == pytest.approx(np.pi / 4)
    assert complex_arctan(0.5j) == pytest.approx(1j * np.log(3) / 2)
    x = np.linspace(-50, 50, 101)
    np.testing.assert_allclose(complex_arctan(x).real, np.arctan(x), atol=1e-13)


@pytest.mark.parametrize("z", [1j, -1j])
def test_complex_arctan_singular(z):
    with pytest.raises(ValueError):
        complex_arctan(z)


# polar form ---------------------------------------------------------------------------------


def polar(s, v):
    return polar_decompose(Paravector(s, np.asarray(v, dtype=complex)))


def test_polar_pure_vector():
    pf = polar(0, [1, 0])
    assert pf.defined
    assert pf.A == pytest.approx(1)
    assert pf.theta == pytest.approx(np.pi / 2)
    np.testing.assert_allclose(pf.I, [1, 0])


def test_polar_one_plus_e1():
    pf = polar(1, [1, 0])
    assert pf.A == pytest.approx(np.sqrt(2))
    assert pf.theta == pytest.approx(np.pi / 4)
    np.testing.assert_allclose(pf.I, [1, 0])


def test_polar_imaginary_vector():
    pf = polar(0, [1j, 0])
    assert pf.A == pytest.approx(1j)
    assert pf.theta == pytest.approx(np.pi / 2)
    np.testing.assert_allclose(pf.I, [1, 0])
    assert pf.reconstruct().allclose(CliffordNum.vector(2, [1j, 0]))


def test_polar_negative_scalar_shifts_theta():
    # principal arctan alone would reconstruct -p here
    pf = polar(-1, [1, 0])
    assert pf.theta.real == pytest.approx(3 * np.pi / 4)
    assert pf.reconstruct().allclose(CliffordNum.vector(2, [1, 0], scalar=-1))


def test_polar_undefined():
    assert not polar(1, [0, 0]).defined
    assert not polar(0, [1, 1j]).defined  # isotropic vector, sum of squares is zero
    assert not polar(1j, [1, 0]).defined  # A^2 = 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_polar_reconstruction_random(rng, n):
    s = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    v = rng.normal(size=(n, 1000)) + 1j * rng.normal(size=(n, 1000))
    p = Paravector(s, v)
    pf = polar_decompose(p, tol=1e-9)
    assert pf.defined.all()
    rec = pf.reconstruct()
    err = np.sqrt(np.abs(rec.coeffs[0] - s) ** 2 + np.sum(np.abs(rec.coeffs[1 : n + 1] - v) ** 2, axis=0))
    size = np.sqrt(np.abs(s) ** 2 + np.sum(np.abs(v) ** 2, axis=0))
    assert np.all(err < 1e-10 * size)
    np.testing.assert_array_equal(rec.coeffs[n + 1 :], 0)


def test_unit_vector_squares_to_minus_one(rng):
    v = rng.normal(size=(3, 50)) + 1j * rng.normal(size=(3, 50))
    pf = polar_decompose(Paravector(rng.normal(size=50), v))
    I = CliffordNum.vector(3, list(pf.I))
    assert (I * I).allclose(-1.0, atol=1e-10)


def test_paravector_rejects_higher_grades():
    with pytest.raises(ValueError):
        Paravector.from_clifford(EXAMPLE)
    p = Paravector.from_clifford(CliffordNum.vector(3, [1, 2, 3], scalar=4))
    assert p.to_clifford().allclose(CliffordNum.vector(3, [1, 2, 3], scalar=4))
