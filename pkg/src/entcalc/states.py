"""Construction, validation and parametrization of quantum states.

Density matrices and pure states carry bipartite dimension metadata and are
validated on construction. The separable set of two qubits is coordinatized
by 79 angles (15 mixing + 4 x 16 local); `realize` maps angle coordinates to
the density matrix they encode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel, linalg

HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-10
EIGENVALUE_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-12
SCHMIDT_TOLERANCE = 1e-12


@dataclass
class DensityMatrix:
    """A validated bipartite density matrix.

    Treated as immutable after construction; all library functions return
    fresh instances instead of mutating.
    """

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        da, db = int(self.dims[0]), int(self.dims[1])
        if da < 1 or db < 1 or da * db != m.shape[0]:
            raise ValueError(
                f"dims {self.dims} incompatible with matrix dimension {m.shape[0]}"
            )
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITIAN_TOLERANCE:
            raise ValueError(f"not Hermitian: max deviation {herm:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOLERANCE:
            raise ValueError(f"trace is {tr:.12g}, not 1")
        m = (m + m.conj().T) / 2.0
        smallest = float(np.linalg.eigvalsh(m).min())
        if smallest < -EIGENVALUE_TOLERANCE:
            raise ValueError(f"negative eigenvalue {smallest:.3e}")
        self.matrix = m
        self.dims = (da, db)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def reduced(self, subsystem: str) -> "DensityMatrix":
        """Reduced state of one subsystem (partial trace over the other)."""
        other = "B" if subsystem == "A" else "A"
        red = linalg.partial_trace(self.matrix, self.dims, other)
        d = self.dims[0] if subsystem == "A" else self.dims[1]
        return DensityMatrix(red, (d, 1) if subsystem == "A" else (1, d))


@dataclass
class PureState:
    """A unit vector on a bipartite system."""

    amplitudes: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        a = np.ascontiguousarray(self.amplitudes, dtype=complex).reshape(-1)
        da, db = int(self.dims[0]), int(self.dims[1])
        if da * db != a.shape[0]:
            raise ValueError(
                f"dims {self.dims} incompatible with amplitude length {a.shape[0]}"
            )
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"state norm is {norm:.12g}, not 1")
        self.amplitudes = a
        self.dims = (da, db)

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass
class SeparableAngles:
    """Angle coordinates of a separable two-qubit state.

    phi are the 15 free mixing angles (the zeroth mixing angle is fixed at
    pi/2 and not stored); alpha/eta are amplitude and phase angles of the
    first local factor of each of the 16 product terms, beta/mu of the
    second. All angles are 2*pi periodic.
    """

    phi: np.ndarray
    alpha: np.ndarray
    eta: np.ndarray
    beta: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        self.phi = np.ascontiguousarray(self.phi, dtype=float).reshape(-1)
        for name in ("alpha", "eta", "beta", "mu"):
            setattr(
                self, name, np.ascontiguousarray(getattr(self, name), dtype=float).reshape(-1)
            )
        if self.phi.shape != (15,):
            raise ValueError(f"phi must have 15 entries, got {self.phi.shape[0]}")
        for name in ("alpha", "eta", "beta", "mu"):
            if getattr(self, name).shape != (16,):
                raise ValueError(f"{name} must have 16 entries")

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.phi, self.alpha, self.eta, self.beta, self.mu])

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "SeparableAngles":
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (_kernel.N_ANGLES,):
            raise ValueError(f"expected {_kernel.N_ANGLES} angles, got {x.shape[0]}")
        return cls(x[0:15], x[15:31], x[31:47], x[47:63], x[63:79])

    def weights(self) -> np.ndarray:
        """The 16 mixture weights induced by the mixing angles; sum to 1."""
        return _kernel.mixing_weights(self.phi)


@dataclass
class BellDiagonal:
    """Weights of a Bell-diagonal state, ordered (Phi+, Phi-, Psi+, Psi-)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=float).reshape(-1)
        if w.shape != (4,):
            raise ValueError("need exactly 4 weights")
        if w.min() < -1e-12 or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must form a probability vector")
        self.weights = np.clip(w, 0.0, None)

    def state(self) -> DensityMatrix:
        m = np.zeros((4, 4), dtype=complex)
        for w, name in zip(self.weights, ("phi+", "phi-", "psi+", "psi-")):
            b = bell_state(name).amplitudes
            m += w * np.outer(b, b.conj())
        return DensityMatrix(m, (2, 2))


def realize(angles: SeparableAngles) -> DensityMatrix:
    """The separable density matrix encoded by an angle vector."""
    rho = _kernel.separable_density(angles.to_vector())
    return DensityMatrix(rho, (2, 2))


def mixing_angles_from_weights(weights) -> np.ndarray:
    """Mixing angles phi whose induced 16-term weights equal `weights`.

    Inverse of SeparableAngles.weights for any probability vector; angles
    come out in [0, pi/2].
    """
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.shape != (16,):
        raise ValueError("need exactly 16 weights")
    if w.min() < -1e-12:
        raise ValueError("weights must be non-negative")
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise ValueError("weights sum to zero")
    w = w / total
    partial = np.cumsum(w)
    phi = np.zeros(15)
    for i in range(15, 0, -1):
        if partial[i] > 0.0:
            ratio = min(1.0, math.sqrt(w[i] / partial[i]))
            phi[i - 1] = math.asin(ratio)
    return phi


def schmidt(psi: PureState):
    """Schmidt decomposition of a bipartite pure state.

    Returns (coeffs, (a_basis, b_basis)) with coefficients non-negative and
    descending, so that psi = sum_k coeffs[k] * a_basis[:, k] kron b_basis[:, k].
    """
    da, db = psi.dims
    mat = psi.amplitudes.reshape(da, db)
    swapped = da > db
    if swapped:
        mat = mat.T
        da, db = db, da
    spec = linalg.eig_hermitian(mat @ mat.conj().T)
    coeffs = np.sqrt(np.clip(spec.eigenvalues, 0.0, None))
    u = spec.eigenvectors
    v = np.zeros((db, da), dtype=complex)
    good = coeffs > SCHMIDT_TOLERANCE
    if good.any():
        v[:, good] = (mat.T @ u[:, good].conj()) / coeffs[good]
    if not good.all():
        # null directions: any orthonormal completion will do
        stacked = np.concatenate([v[:, good], np.eye(db, dtype=complex)], axis=1)
        q, _ = np.linalg.qr(stacked)
        n_good = int(good.sum())
        v[:, ~good] = q[:, n_good:da]
    if swapped:
        return coeffs, (v, u)
    return coeffs, (u, v)


_BELL_AMPLITUDES = {
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2),
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2),
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2),
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2),
}


def bell_state(which: str) -> PureState:
    """One of the four Bell states, named 'phi+', 'phi-', 'psi+' or 'psi-'."""
    key = which.strip().lower()
    if key not in _BELL_AMPLITUDES:
        raise ValueError(f"unknown Bell state {which!r}")
    return PureState(_BELL_AMPLITUDES[key].copy(), (2, 2))


def werner(F: float) -> DensityMatrix:
    """Werner state: Bell-diagonal with leading weight F on Phi+ and the
    remaining weight split equally over the other three Bell states."""
    F = float(F)
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"F must lie in [0, 1], got {F}")
    rest = (1.0 - F) / 3.0
    return BellDiagonal(np.array([F, rest, rest, rest])).state()


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """A Haar-distributed unitary, via QR of a complex Gaussian matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    # fix the phase ambiguity of QR so the distribution is exactly Haar
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_pure(dims: tuple[int, int], seed: int) -> PureState:
    """A Haar-random pure state on the given bipartite system."""
    rng = np.random.default_rng(seed)
    da, db = int(dims[0]), int(dims[1])
    a = rng.standard_normal(da * db) + 1j * rng.standard_normal(da * db)
    return PureState(a / np.linalg.norm(a), (da, db))


def random_density(dims: tuple[int, int], rank: int, seed: int) -> DensityMatrix:
    """A random density matrix of the given rank (induced measure: partial
    trace of a random pure state on a rank-dimensional ancilla)."""
    da, db = int(dims[0]), int(dims[1])
    d = da * db
    rank = int(rank)
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / m.trace().real, (da, db))


def random_local_unitary(seed: int) -> tuple[np.ndarray, np.ndarray]:
    """An independent Haar pair (U_A, U_B) of single-qubit unitaries."""
    rng = np.random.default_rng(seed)
    return haar_unitary(2, rng), haar_unitary(2, rng)
