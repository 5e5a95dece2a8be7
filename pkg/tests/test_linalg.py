import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entcalc import linalg


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2.0


def random_psd(dim, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g @ g.conj().T


def test_tensor_matches_kron():
    a = random_hermitian(2, 0)
    b = random_hermitian(3, 1)
    np.testing.assert_allclose(linalg.tensor(a, b), np.kron(a, b), atol=1e-14)


def test_tensor_of_products_traces():
    a = random_psd(2, 2)
    b = random_psd(2, 3)
    t = linalg.tensor(a, b)
    assert np.isclose(np.trace(t), np.trace(a) * np.trace(b))


def test_partial_trace_of_product_factors():
    a = random_psd(2, 4)
    a /= np.trace(a)
    b = random_psd(3, 5)
    b /= np.trace(b)
    m = np.kron(a, b)
    np.testing.assert_allclose(linalg.partial_trace(m, (2, 3), "B"), a, atol=1e-12)
    np.testing.assert_allclose(linalg.partial_trace(m, (2, 3), "A"), b, atol=1e-12)


def test_partial_trace_preserves_trace():
    m = random_psd(6, 6)
    for sub in ("A", "B"):
        assert np.isclose(np.trace(linalg.partial_trace(m, (2, 3), sub)), np.trace(m))


def test_partial_trace_rejects_bad_subsystem():
    m = random_psd(4, 7)
    with pytest.raises(ValueError):
        linalg.partial_trace(m, (2, 2), "C")


def test_partial_transpose_is_involution():
    m = random_hermitian(4, 8)
    once = linalg.partial_transpose(m, (2, 2), "B")
    twice = linalg.partial_transpose(once, (2, 2), "B")
    np.testing.assert_allclose(twice, m, atol=1e-14)


def test_partial_transpose_on_product():
    a = random_hermitian(2, 9)
    b = random_hermitian(2, 10)
    m = np.kron(a, b)
    np.testing.assert_allclose(
        linalg.partial_transpose(m, (2, 2), "B"), np.kron(a, b.T), atol=1e-14
    )
    np.testing.assert_allclose(
        linalg.partial_transpose(m, (2, 2), "A"), np.kron(a.T, b), atol=1e-14
    )


def test_partial_transpose_sides_related_by_full_transpose():
    # transposing both subsystems transposes everything
    m = random_hermitian(6, 11)
    lhs = linalg.partial_transpose(m, (2, 3), "A")
    rhs = linalg.partial_transpose(m, (2, 3), "B").T
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)


def test_eig_hermitian_reconstructs_and_sorts():
    m = random_hermitian(4, 12)
    spec = linalg.eig_hermitian(m)
    rebuilt = spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.conj().T
    np.testing.assert_allclose(rebuilt, m, atol=1e-12)
    assert np.all(np.diff(spec.eigenvalues) <= 1e-12)
    np.testing.assert_allclose(
        np.sort(spec.eigenvalues), np.sort(np.linalg.eigvalsh(m)), atol=1e-12
    )


def test_eig_hermitian_rejects_nonhermitian():
    m = random_hermitian(3, 13)
    m[0, 1] += 1e-6
    with pytest.raises(ValueError):
        linalg.eig_hermitian(m)


def test_matrix_exp_log_inverse_pair():
    h = random_hermitian(4, 14)
    m = linalg.matrix_exp(h)
    np.testing.assert_allclose(linalg.matrix_log(m), h, atol=1e-10)


def test_matrix_exp_against_series():
    h = 0.1 * random_hermitian(3, 15)
    total = np.zeros_like(h)
    power = np.eye(3, dtype=complex)
    fact = 1.0
    for k in range(25):
        total = total + power / fact
        power = power @ h
        fact *= k + 1.0
    np.testing.assert_allclose(linalg.matrix_exp(h), total, atol=1e-12)


def test_matrix_log_clamps_tiny_eigenvalues():
    m = np.diag([1.0, 0.0]).astype(complex)
    out = linalg.matrix_log(m)
    assert np.isclose(out[1, 1].real, np.log(linalg.LOG_CLAMP))


def test_matrix_log_rejects_negative_eigenvalue():
    m = np.diag([1.0, -1e-6]).astype(complex)
    with pytest.raises(ValueError):
        linalg.matrix_log(m)


def test_frechet_kernel_known_values():
    assert linalg.frechet_kernel(1.0, 1.0) == pytest.approx(1.0)
    assert linalg.frechet_kernel(0.5, 0.5) == pytest.approx(1.0)
    assert linalg.frechet_kernel(0.0, 0.7) == 0.0
    p, q = 0.9, 0.1
    expected = np.sqrt(p * q) * np.log(p / q) / (p - q)
    assert linalg.frechet_kernel(p, q) == pytest.approx(expected, rel=1e-12)


def test_frechet_kernel_rejects_double_zero_and_range():
    with pytest.raises(ValueError):
        linalg.frechet_kernel(0.0, 0.0)
    with pytest.raises(ValueError):
        linalg.frechet_kernel(-0.1, 0.5)
    with pytest.raises(ValueError):
        linalg.frechet_kernel(0.5, 1.5)


@given(
    p=st.floats(min_value=1e-12, max_value=1.0),
    q=st.floats(min_value=1e-12, max_value=1.0),
)
@settings(max_examples=200, deadline=None)
def test_frechet_kernel_symmetric_and_bounded(p, q):
    # geometric mean never exceeds the logarithmic mean, so the ratio is in (0, 1]
    g = linalg.frechet_kernel(p, q)
    assert g == pytest.approx(linalg.frechet_kernel(q, p), rel=1e-12)
    assert 0.0 < g <= 1.0 + 1e-12


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_eig_hermitian_reconstruction_property(seed):
    m = random_hermitian(4, seed)
    spec = linalg.eig_hermitian(m)
    rebuilt = spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.conj().T
    assert np.max(np.abs(rebuilt - m)) < 1e-11
    identity = spec.eigenvectors.conj().T @ spec.eigenvectors
    assert np.max(np.abs(identity - np.eye(4))) < 1e-12


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_partial_transpose_preserves_hermiticity_and_trace(seed):
    m = random_hermitian(4, seed)
    pt = linalg.partial_transpose(m, (2, 2), "B")
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-13
    assert np.isclose(np.trace(pt), np.trace(m))
