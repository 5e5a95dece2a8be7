"""Pure numpy implementation of the numerical kernels.

This is the reference backend: the compiled extension (`_core`) must agree
with these functions to near machine precision and is cross-checked against
them in the test suite.

Angle vector layout (79 components):

    x[0:15]   phi    mixing angles (phi_0 = pi/2 is fixed, not a parameter)
    x[15:31]  alpha  first-factor amplitude angles
    x[31:47]  eta    first-factor phase angles
    x[47:63]  beta   second-factor amplitude angles
    x[63:79]  mu     second-factor phase angles

The realized state is rho = sum_i w_i |a_i b_i><a_i b_i| with 16 terms,
w_i = (sin phi_{i-1} * prod_{j>=i} cos phi_j)^2, |a_i> = (cos alpha_i,
sin alpha_i e^{i eta_i}) and |b_i> analogously from beta, mu.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

N_ANGLES = 79
N_TERMS = 16


def eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition with eigenvalues sorted descending."""
    values, vectors = np.linalg.eigh(matrix)
    return values[::-1].copy(), vectors[:, ::-1].copy()


def _split(x: np.ndarray):
    x = np.asarray(x, dtype=float)
    if x.shape != (N_ANGLES,):
        raise ValueError(f"angle vector must have shape ({N_ANGLES},), got {x.shape}")
    return x[0:15], x[15:31], x[31:47], x[47:63], x[63:79]


def mixing_weights(phi: np.ndarray) -> np.ndarray:
    """Weights w_i = p_i^2 of the 16-term mixture; they sum to 1 identically."""
    phi = np.asarray(phi, dtype=float)
    c = np.cos(phi)
    s = np.sin(phi)
    suffix = np.empty(N_TERMS)  # suffix[i] = prod_{j >= i} c[j], suffix[15] = 1
    suffix[15] = 1.0
    for j in range(14, -1, -1):
        suffix[j] = c[j] * suffix[j + 1]
    p = np.empty(N_TERMS)
    p[0] = suffix[0]  # sin(phi_0) = 1
    p[1:] = s * suffix[1:]
    return p * p


def mixing_weight_gradient(phi: np.ndarray) -> np.ndarray:
    """d w_i / d phi_m as a (16, 15) array."""
    phi = np.asarray(phi, dtype=float)
    c = np.cos(phi)
    s = np.sin(phi)
    cc = c * c
    csuffix = np.empty(N_TERMS)  # csuffix[i] = prod_{k >= i} cc[k], csuffix[15] = 1
    csuffix[15] = 1.0
    for k in range(14, -1, -1):
        csuffix[k] = cc[k] * csuffix[k + 1]
    se2 = np.empty(N_TERMS)
    se2[0] = 1.0
    se2[1:] = s * s
    dw = np.zeros((N_TERMS, 15))
    for i in range(N_TERMS):
        if i >= 1:
            # the sin^2(phi_{i-1}) factor of w_i
            dw[i, i - 1] = 2.0 * s[i - 1] * c[i - 1] * csuffix[i]
        # the cos^2(phi_m) factors, m >= i; products kept explicit so that
        # zero cosines never require a division
        inner = se2[i]
        for m in range(i, 15):
            dw[i, m] = -2.0 * c[m] * s[m] * inner * csuffix[m + 1]
            inner *= cc[m]
    return dw


def _local_states(amp: np.ndarray, phase: np.ndarray) -> np.ndarray:
    """(16, 2) array of local pure states (cos amp, sin amp e^{i phase})."""
    return np.stack([np.cos(amp) + 0j, np.sin(amp) * np.exp(1j * phase)], axis=1)


def product_terms(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mixture weights (16,) and product vectors (16, 4) for an angle vector."""
    phi, alpha, eta, beta, mu = _split(x)
    w = mixing_weights(phi)
    a = _local_states(alpha, eta)
    b = _local_states(beta, mu)
    v = np.einsum("ia,ib->iab", a, b).reshape(N_TERMS, 4)
    return w, v


def separable_density(x: np.ndarray) -> np.ndarray:
    """The realized 4x4 separable density matrix."""
    w, v = product_terms(x)
    return np.einsum("i,ia,ib->ab", w, v, v.conj())


def _log_quotient_matrix(rc: np.ndarray) -> np.ndarray:
    """Divided differences of ln at the (clamped, positive) eigenvalues.

    G[i][j] = (ln r_i - ln r_j)/(r_i - r_j) off the diagonal, 1/r_i on it.
    """
    p = rc[:, None]
    q = rc[None, :]
    d = p - q
    near = np.abs(d) <= 1e-14 * (p + q)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.log1p(d / q) / d
    g[near] = (2.0 / (p + q))[near]
    return g


def ree_cross(x: np.ndarray, sigma: np.ndarray, clamp: float) -> float:
    """-tr(sigma ln rho(x)) with rho eigenvalues clamped below at `clamp`."""
    rho = separable_density(x)
    r, vecs = eigh(rho)
    rc = np.maximum(r, clamp)
    diag = np.einsum("ai,ab,bi->i", vecs.conj(), sigma, vecs).real
    return -float(diag @ np.log(rc))


def ree_cross_and_grad(
    x: np.ndarray, sigma: np.ndarray, clamp: float
) -> tuple[float, np.ndarray]:
    """Clamped cross term -tr(sigma ln rho(x)) and its 79-component gradient.

    Gradient component for a parameter t is -tr(K drho/dt) where
    K = V (G o V^H sigma V) V^H is the log Frechet witness in rho's
    eigenbasis (G the divided-difference matrix, o elementwise). The
    structure of drho/dt reduces every component to a small contraction.
    """
    phi, alpha, eta, beta, mu = _split(x)
    w = mixing_weights(phi)
    dw = mixing_weight_gradient(phi)

    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    ea = np.exp(1j * eta)
    eb = np.exp(1j * mu)
    a = np.stack([ca + 0j, sa * ea], axis=1)
    b = np.stack([cb + 0j, sb * eb], axis=1)
    da = np.stack([-sa + 0j, ca * ea], axis=1)  # d a / d alpha
    de = np.stack([np.zeros(N_TERMS, dtype=complex), 1j * sa * ea], axis=1)
    db = np.stack([-sb + 0j, cb * eb], axis=1)
    dm = np.stack([np.zeros(N_TERMS, dtype=complex), 1j * sb * eb], axis=1)

    v = np.einsum("ia,ib->iab", a, b).reshape(N_TERMS, 4)
    rho = np.einsum("i,ia,ib->ab", w, v, v.conj())
    r, vecs = eigh(rho)
    rc = np.maximum(r, clamp)
    st = vecs.conj().T @ sigma @ vecs
    cross = -float(np.diag(st).real @ np.log(rc))

    g = _log_quotient_matrix(rc)
    k = vecs @ (g * st) @ vecs.conj().T

    # mixing angles: drho/dphi_m = sum_i dw[i, m] v_i v_i^H
    quad = np.einsum("ia,ab,ib->i", v.conj(), k, v).real
    grad_phi = -(dw * quad[:, None]).sum(axis=0)

    # local angles: drho/dt = w_i (dv v^H + v dv^H) -> -2 w_i Re(dv^H K v)
    kv = v @ k.T  # row i = K v_i
    dva = np.einsum("ia,ib->iab", da, b).reshape(N_TERMS, 4)
    dve = np.einsum("ia,ib->iab", de, b).reshape(N_TERMS, 4)
    dvb = np.einsum("ia,ib->iab", a, db).reshape(N_TERMS, 4)
    dvm = np.einsum("ia,ib->iab", a, dm).reshape(N_TERMS, 4)
    grad_alpha = -2.0 * w * np.einsum("ia,ia->i", dva.conj(), kv).real
    grad_eta = -2.0 * w * np.einsum("ia,ia->i", dve.conj(), kv).real
    grad_beta = -2.0 * w * np.einsum("ia,ia->i", dvb.conj(), kv).real
    grad_mu = -2.0 * w * np.einsum("ia,ia->i", dvm.conj(), kv).real

    grad = np.concatenate([grad_phi, grad_alpha, grad_eta, grad_beta, grad_mu])
    return cross, grad


def bures_value(x: np.ndarray, sqrt_sigma: np.ndarray) -> float:
    """2 - 2 tr sqrt(sqrt_sigma rho(x) sqrt_sigma), the Bures distance."""
    rho = separable_density(x)
    m = sqrt_sigma @ rho @ sqrt_sigma
    vals = np.linalg.eigvalsh(m)
    return float(2.0 - 2.0 * np.sqrt(np.clip(vals, 0.0, None)).sum())
