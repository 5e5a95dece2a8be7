import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entcalc import _kernel, measures, states
from entcalc._kernel import fallback

compiled = pytest.mark.skipif(
    _kernel.BACKEND != "compiled", reason="compiled extension not built"
)


def random_angles(seed):
    return np.random.default_rng(seed).uniform(0.1, 1.4, size=fallback.N_ANGLES)


def test_backend_reports_an_implementation():
    assert _kernel.BACKEND in ("compiled", "python")


def test_mixing_weights_against_direct_product_formula():
    rng = np.random.default_rng(0)
    phi = rng.uniform(0.0, math.pi, size=15)
    w = _kernel.mixing_weights(phi)
    expected = np.empty(16)
    for i in range(16):
        p = 1.0 if i == 0 else math.sin(phi[i - 1])
        for j in range(i, 15):
            p *= math.cos(phi[j])
        expected[i] = p * p
    assert np.max(np.abs(w - expected)) < 1e-14
    assert w.sum() == pytest.approx(1.0, abs=1e-12)


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=50, deadline=None)
def test_mixing_weight_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0.1, 1.5, size=15)
    dw = _kernel.mixing_weight_gradient(phi)
    step = 1e-6
    for m in range(15):
        up = phi.copy()
        up[m] += step
        dn = phi.copy()
        dn[m] -= step
        numeric = (_kernel.mixing_weights(up) - _kernel.mixing_weights(dn)) / (2 * step)
        assert np.max(np.abs(dw[:, m] - numeric)) < 1e-8


def test_product_terms_reconstruct_density():
    x = random_angles(3)
    w, v = _kernel.product_terms(x)
    rho = sum(w[i] * np.outer(v[i], v[i].conj()) for i in range(16))
    assert np.max(np.abs(rho - _kernel.separable_density(x))) < 1e-14
    norms = np.linalg.norm(v, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-12


def test_ree_cross_matches_direct_evaluation():
    x = random_angles(4)
    sigma = states.random_density((2, 2), rank=4, seed=9).matrix
    rho = _kernel.separable_density(x)
    vals, vecs = np.linalg.eigh(rho)
    rc = np.maximum(vals, 1e-12)
    log_rho = vecs @ np.diag(np.log(rc)) @ vecs.conj().T
    expected = -float(np.trace(sigma @ log_rho).real)
    assert _kernel.ree_cross(x, sigma, 1e-12) == pytest.approx(expected, abs=1e-10)


def test_ree_cross_and_grad_value_consistent():
    x = random_angles(5)
    sigma = states.random_density((2, 2), rank=4, seed=10).matrix
    value, grad = _kernel.ree_cross_and_grad(x, sigma, 1e-12)
    assert value == pytest.approx(_kernel.ree_cross(x, sigma, 1e-12), abs=1e-12)
    assert grad.shape == (79,)


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=20, deadline=None)
def test_ree_gradient_matches_finite_differences(seed):
    x = np.random.default_rng(seed).uniform(0.2, 1.2, size=79)
    sigma = states.random_density((2, 2), rank=4, seed=seed).matrix
    _, grad = _kernel.ree_cross_and_grad(x, sigma, 1e-12)
    step = 1e-6
    rng = np.random.default_rng(seed + 1)
    for m in rng.choice(79, size=6, replace=False):
        up = x.copy()
        up[m] += step
        dn = x.copy()
        dn[m] -= step
        numeric = (
            _kernel.ree_cross(up, sigma, 1e-12) - _kernel.ree_cross(dn, sigma, 1e-12)
        ) / (2 * step)
        assert grad[m] == pytest.approx(numeric, abs=5e-5)


def test_bures_value_matches_measure():
    x = random_angles(6)
    sigma = states.random_density((2, 2), rank=4, seed=11)
    vals, vecs = np.linalg.eigh(sigma.matrix)
    sqrt_sigma = vecs @ np.diag(np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    rho = states.DensityMatrix(_kernel.separable_density(x), (2, 2))
    expected = measures.bures_distance(sigma, rho)
    assert _kernel.bures_value(x, sqrt_sigma) == pytest.approx(expected, abs=1e-9)


def test_eigh_agrees_with_numpy():
    rng = np.random.default_rng(12)
    for n in (2, 4, 9, 16, 20):  # 20 exercises the large-matrix fallback route
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = (m + m.conj().T) / 2
        vals, vecs = _kernel.eigh(m)
        assert np.all(np.diff(vals) <= 1e-12)
        assert np.max(np.abs(np.sort(vals) - np.linalg.eigvalsh(m))) < 1e-12 * max(
            1.0, float(np.abs(m).max())
        ) * n
        recon = vecs @ np.diag(vals) @ vecs.conj().T
        assert np.max(np.abs(recon - m)) < 1e-12 * n


@compiled
def test_compiled_matches_fallback_everywhere():
    from entcalc._kernel import _core

    rng = np.random.default_rng(13)
    for trial in range(20):
        x = rng.uniform(0.1, 1.4, size=79)
        sigma = states.random_density((2, 2), rank=4, seed=trial + 60).matrix
        vals, vecs = np.linalg.eigh(sigma)
        sqrt_sigma = vecs @ np.diag(np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T

        w1, v1 = _core.product_terms(x)
        w2, v2 = fallback.product_terms(x)
        assert np.max(np.abs(w1 - w2)) < 1e-14
        assert np.max(np.abs(v1 - v2)) < 1e-14
        assert np.max(
            np.abs(_core.separable_density(x) - fallback.separable_density(x))
        ) < 1e-14
        assert _core.ree_cross(x, sigma, 1e-12) == pytest.approx(
            fallback.ree_cross(x, sigma, 1e-12), abs=1e-11
        )
        f1, g1 = _core.ree_cross_and_grad(x, sigma, 1e-12)
        f2, g2 = fallback.ree_cross_and_grad(x, sigma, 1e-12)
        assert abs(f1 - f2) < 1e-11
        assert np.max(np.abs(g1 - g2)) < 1e-10
        assert _core.bures_value(x, sqrt_sigma) == pytest.approx(
            fallback.bures_value(x, sqrt_sigma), abs=1e-11
        )


@compiled
def test_compiled_eigh_rejects_oversized_input():
    from entcalc._kernel import _core

    with pytest.raises(ValueError):
        _core.eigh(np.eye(17, dtype=complex))
