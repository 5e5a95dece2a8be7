"""Distance and entropy functionals between quantum states.

All entropic quantities are in nats (natural logarithm); +infinity is
represented by the ordinary float infinity. Conversion to bits is a
presentation concern and happens only in the CLI.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .states import DensityMatrix

# support(sigma) within support(rho) is decided by these two thresholds: a
# rho eigenvalue below SUPPORT_THRESHOLD counts as a null direction, and a
# sigma overlap above OVERLAP_THRESHOLD with a null direction means the
# relative entropy diverges.
SUPPORT_THRESHOLD = 1e-10
OVERLAP_THRESHOLD = 1e-8

# plain spectral weights below this contribute nothing to x ln x sums
_ENTROPY_FLOOR = 1e-15


def _check_same_dims(sigma: DensityMatrix, rho: DensityMatrix):
    if sigma.dims != rho.dims:
        raise ValueError(f"dimension mismatch: {sigma.dims} vs {rho.dims}")


def _xlogx(values: np.ndarray) -> float:
    v = values[values > _ENTROPY_FLOOR]
    return float((v * np.log(v)).sum())


def _sqrtm_psd(matrix: np.ndarray) -> np.ndarray:
    spec = linalg.eig_hermitian(matrix)
    roots = np.sqrt(np.clip(spec.eigenvalues, 0.0, None))
    return (spec.eigenvectors * roots) @ spec.eigenvectors.conj().T


def relative_entropy(
    sigma: DensityMatrix,
    rho: DensityMatrix,
    support_threshold: float = SUPPORT_THRESHOLD,
    overlap_threshold: float = OVERLAP_THRESHOLD,
) -> float:
    """Quantum relative entropy tr{sigma (ln sigma - ln rho)} in nats.

    Returns +inf when sigma has weight outside rho's support: that is, when
    some eigenvector of rho with eigenvalue below `support_threshold` picks
    up more than `overlap_threshold` of sigma. Otherwise finite and >= 0
    (up to rounding), vanishing exactly when the states coincide.
    """
    _check_same_dims(sigma, rho)
    sigma_spec = linalg.eig_hermitian(sigma.matrix)
    rho_spec = linalg.eig_hermitian(rho.matrix)
    entropy_term = _xlogx(np.clip(sigma_spec.eigenvalues, 0.0, None))
    overlaps = np.einsum(
        "ai,ab,bi->i", rho_spec.eigenvectors.conj(), sigma.matrix, rho_spec.eigenvectors
    ).real
    overlaps = np.clip(overlaps, 0.0, None)
    null = rho_spec.eigenvalues < support_threshold
    if np.any(overlaps[null] > overlap_threshold):
        return math.inf
    keep = ~null
    cross = float((overlaps[keep] * np.log(rho_spec.eigenvalues[keep])).sum())
    return entropy_term - cross


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-tr(rho ln rho) in nats; zero for pure states, ln(dim) when maximally mixed."""
    values = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, None)
    return -_xlogx(values)


def _fidelity_root(sigma: DensityMatrix, rho: DensityMatrix) -> float:
    """tr sqrt(sqrt(sigma) rho sqrt(sigma)), the square root of the fidelity."""
    a = _sqrtm_psd(sigma.matrix)
    m = a @ rho.matrix @ a
    values = linalg.eig_hermitian(m).eigenvalues
    return float(np.sqrt(np.clip(values, 0.0, None)).sum())


def fidelity(sigma: DensityMatrix, rho: DensityMatrix) -> float:
    """Uhlmann fidelity, in [0, 1], equal to 1 iff the states coincide.

    For pure sigma = |psi><psi| this reduces to <psi|rho|psi>.
    """
    _check_same_dims(sigma, rho)
    root = _fidelity_root(sigma, rho)
    return float(np.clip(root * root, 0.0, 1.0))


def bures_distance(sigma: DensityMatrix, rho: DensityMatrix) -> float:
    """Bures distance 2 - 2 sqrt(F(sigma, rho)), in [0, 2]."""
    _check_same_dims(sigma, rho)
    root = _fidelity_root(sigma, rho)
    return float(np.clip(2.0 - 2.0 * root, 0.0, 2.0))


def mutual_information(rho: DensityMatrix) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB) in nats; non-negative."""
    red_a = linalg.partial_trace(rho.matrix, rho.dims, "B")
    red_b = linalg.partial_trace(rho.matrix, rho.dims, "A")
    ent = [-_xlogx(np.clip(np.linalg.eigvalsh(m), 0.0, None)) for m in (red_a, red_b)]
    return ent[0] + ent[1] - von_neumann_entropy(rho)


def classical_relative_entropy(p, q) -> float:
    """Kullback-Leibler divergence sum_i p_i ln(p_i/q_i) in nats."""
    p = np.asarray(p, dtype=float).reshape(-1)
    q = np.asarray(q, dtype=float).reshape(-1)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape[0]} vs {q.shape[0]}")
    for name, vec in (("p", p), ("q", q)):
        if vec.min() < -1e-12:
            raise ValueError(f"{name} has negative entries")
        if abs(vec.sum() - 1.0) > 1e-10:
            raise ValueError(f"{name} sums to {vec.sum():.12g}, not 1")
    p = np.clip(p, 0.0, None)
    q = np.clip(q, 0.0, None)
    mass = p > _ENTROPY_FLOOR
    if np.any(q[mass] <= 0.0):
        return math.inf
    return float((p[mass] * np.log(p[mass] / q[mass])).sum())


def sanov_confusion_probability(sigma: DensityMatrix, rho: DensityMatrix, n: int) -> float:
    """Asymptotic probability e^{-n S(sigma||rho)} of mistaking sigma for rho
    after n identical measurements; 0 when the relative entropy diverges."""
    n = int(n)
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    s = relative_entropy(sigma, rho)
    if math.isinf(s):
        return 0.0
    return math.exp(-n * s)


def classical_correlations(rho_star: DensityMatrix) -> float:
    """Relative entropy of a state to the product of its marginals.

    Numerically identical to the mutual information; kept as a separate
    entry point because it is the natural reading of "classical part of the
    correlations" for a closest separable state.
    """
    red_a = linalg.partial_trace(rho_star.matrix, rho_star.dims, "B")
    red_b = linalg.partial_trace(rho_star.matrix, rho_star.dims, "A")
    product = DensityMatrix(linalg.tensor(red_a, red_b), rho_star.dims)
    return relative_entropy(rho_star, product)
