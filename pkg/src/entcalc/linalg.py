"""Dense complex-Hermitian linear algebra for small bipartite systems.

Everything here operates on plain numpy arrays in the lexicographic product
basis {|00>, |01>, |10>, |11>} (and its obvious generalization for other
dimensions). Density-matrix semantics live in `states`; this module only
knows about matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel

HERMITIAN_TOLERANCE = 1e-10
EIGENVALUE_FLOOR = -1e-10
LOG_CLAMP = 1e-12


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_dims(m: np.ndarray, dims: tuple[int, int]) -> tuple[int, int]:
    da, db = int(dims[0]), int(dims[1])
    if da < 1 or db < 1:
        raise ValueError(f"dimensions must be positive, got {dims}")
    if m.shape[0] != da * db:
        raise ValueError(
            f"matrix dimension {m.shape[0]} does not match product {da}*{db}"
        )
    return da, db


def tensor(a, b) -> np.ndarray:
    """Kronecker product; composes operators on a joint system."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m, dims: tuple[int, int], subsystem: str) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    subsystem "A" removes the first factor (the result acts on B alone),
    "B" the second.
    """
    m = _as_square(m)
    da, db = _check_dims(m, dims)
    t = m.reshape(da, db, da, db)
    if subsystem == "A":
        return np.einsum("abad->bd", t)
    if subsystem == "B":
        return np.einsum("abcb->ac", t)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def partial_transpose(m, dims: tuple[int, int], subsystem: str = "B") -> np.ndarray:
    """Transpose one tensor factor of a bipartite operator."""
    m = _as_square(m)
    da, db = _check_dims(m, dims)
    t = m.reshape(da, db, da, db)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(da * db, da * db).copy()


@dataclass
class Spectrum:
    """Eigenvalues (descending) and the unitary of eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(m) -> Spectrum:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending."""
    m = _as_square(m)
    deviation = np.abs(m - m.conj().T).max()
    if deviation > HERMITIAN_TOLERANCE:
        raise ValueError(
            f"matrix is not Hermitian: max|M - M^H| = {deviation:.3e} "
            f"exceeds {HERMITIAN_TOLERANCE}"
        )
    h = np.ascontiguousarray((m + m.conj().T) / 2.0)
    values, vectors = _kernel.eigh(h)
    return Spectrum(values, vectors)


def matrix_exp(m) -> np.ndarray:
    """Matrix exponential of a Hermitian matrix via its spectral form."""
    spec = eig_hermitian(m)
    scaled = spec.eigenvectors * np.exp(spec.eigenvalues)
    return scaled @ spec.eigenvectors.conj().T


def matrix_log(m, clamp: float = LOG_CLAMP) -> np.ndarray:
    """Matrix logarithm of a Hermitian PSD matrix.

    Eigenvalues are clamped below at `clamp` before the scalar log, so
    rank-deficient inputs give a finite answer; genuinely negative spectra
    are rejected.
    """
    if clamp <= 0.0:
        raise ValueError(f"clamp must be positive, got {clamp}")
    spec = eig_hermitian(m)
    smallest = spec.eigenvalues.min()
    if smallest < EIGENVALUE_FLOOR:
        raise ValueError(
            f"matrix has negative eigenvalue {smallest:.3e}, not PSD"
        )
    logs = np.log(np.maximum(spec.eigenvalues, clamp))
    return (spec.eigenvectors * logs) @ spec.eigenvectors.conj().T


def frechet_kernel(p: float, q: float) -> float:
    """The divided-difference kernel g(p, q) = sqrt(pq) (ln q - ln p)/(q - p).

    g(p, p) = 1, and 0 <= g <= 1 on the unit square. This is the scalar
    weight that turns an eigenbasis congruence into the derivative of the
    matrix logarithm.
    """
    p = float(p)
    q = float(q)
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError(f"arguments must lie in [0, 1], got p={p}, q={q}")
    if p == 0.0 and q == 0.0:
        raise ValueError("g(0, 0) is undefined")
    if p == 0.0 or q == 0.0:
        return 0.0  # sqrt(pq) ln(..) -> 0 limit
    d = q - p
    if abs(d) <= 1e-14 * (p + q):
        return 1.0
    # evaluate with the smaller value in the denominator: log1p near -1
    # loses the symmetry g(p, q) = g(q, p) to cancellation
    lo, hi = (p, q) if p < q else (q, p)
    return math.sqrt(p * q) * math.log1p((hi - lo) / lo) / (hi - lo)
