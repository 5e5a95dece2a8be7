"""Closed-form entanglement values and the reference states carrying them.

The worked examples construct (sigma, closest separable rho, value) triples
whose value always equals the relative entropy of the pair, so they can be
used as oracles for the optimizer. Scalar formulas are written in the form
that is consistent with the actual spectra of the states involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, measures
from .states import (
    BellDiagonal,
    DensityMatrix,
    PureState,
    bell_state,
    schmidt,
)

LN2 = math.log(2.0)


def _xlogx(v: float) -> float:
    return v * math.log(v) if v > 1e-15 else 0.0


def _binary_entropy(x: float) -> float:
    return -_xlogx(x) - _xlogx(1.0 - x)


@dataclass
class ClosedFormCase:
    """A state with a known closest separable state and exact value (nats)."""

    name: str
    parameters: dict
    sigma: DensityMatrix
    closest: DensityMatrix
    value: float


def pure_state_ree(psi: PureState) -> float:
    """Entanglement of a pure state: the von Neumann entropy of a reduction."""
    coeffs, _ = schmidt(psi)
    probs = coeffs * coeffs
    return -sum(_xlogx(float(p)) for p in probs)


def pure_state_bures(psi: PureState) -> float:
    """The quoted Bures-measure value 4 a^2 (1 - a^2) for a two-qubit pure
    state, a being the leading Schmidt coefficient.

    Note this is the published closed form, kept verbatim as an oracle; see
    the package tests for how it relates to the distance actually attained
    by minimization.
    """
    coeffs, _ = schmidt(psi)
    a2 = float(coeffs[0] * coeffs[0])
    return 4.0 * a2 * (1.0 - a2)


def _case1(lam: float) -> ClosedFormCase:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    phi = bell_state("phi+").amplitudes
    sigma = lam * np.outer(phi, phi.conj())
    sigma[1, 1] += 1.0 - lam
    a = 0.5 * lam * (1.0 - 0.5 * lam)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = a
    rho[1, 1] = (1.0 - 0.5 * lam) ** 2
    rho[2, 2] = 0.25 * lam * lam
    value = (lam - 2.0) * math.log(1.0 - 0.5 * lam) + _xlogx(1.0 - lam)
    return ClosedFormCase(
        "example1", {"lam": lam}, DensityMatrix(sigma, (2, 2)), DensityMatrix(rho, (2, 2)), value
    )


def _case2(lam: float) -> ClosedFormCase:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    phi = bell_state("phi+").amplitudes
    sigma = lam * np.outer(phi, phi.conj())
    sigma[0, 0] += 1.0 - lam
    rho = np.diag([1.0 - 0.5 * lam, 0.0, 0.0, 0.5 * lam]).astype(complex)
    # s+- are the eigenvalues of sigma2: trace 1, det lam(1-lam)/2 block
    disc = 1.0 - 2.0 * lam * (1.0 - lam)
    root = math.sqrt(max(disc, 0.0))
    s_plus = 0.5 * (1.0 + root)
    s_minus = 0.5 * (1.0 - root)
    value = (
        _xlogx(s_plus)
        + _xlogx(s_minus)
        - _xlogx(1.0 - 0.5 * lam)
        - _xlogx(0.5 * lam)
    )
    return ClosedFormCase(
        "example2", {"lam": lam}, DensityMatrix(sigma, (2, 2)), DensityMatrix(rho, (2, 2)), value
    )


def _case3(A: float, B: float) -> ClosedFormCase:
    if not 0.0 <= A <= 1.0:
        raise ValueError(f"A must lie in [0, 1], got {A}")
    if B * B > A * (1.0 - A) + 1e-12:
        raise ValueError(f"need B^2 <= A(1-A) for positivity, got A={A}, B={B}")
    sigma = np.zeros((4, 4), dtype=complex)
    sigma[0, 0] = A
    sigma[3, 3] = 1.0 - A
    sigma[0, 3] = B
    sigma[3, 0] = B
    rho = np.diag([A, 0.0, 0.0, 1.0 - A]).astype(complex)
    # e+- are the eigenvalues of sigma3: trace 1, det A(1-A) - B^2
    disc = (1.0 - 2.0 * A) ** 2 + 4.0 * B * B
    root = math.sqrt(max(disc, 0.0))
    e_plus = 0.5 * (1.0 + root)
    e_minus = 0.5 * (1.0 - root)
    value = _xlogx(e_plus) + _xlogx(e_minus) - _xlogx(A) - _xlogx(1.0 - A)
    return ClosedFormCase(
        "example3", {"A": A, "B": B}, DensityMatrix(sigma, (2, 2)), DensityMatrix(rho, (2, 2)), value
    )


def _case4(A: float, B: float) -> ClosedFormCase:
    if not 0.0 <= A <= 0.5:
        raise ValueError(f"A must lie in [0, 1/2], got {A}")
    if abs(B) > A + 1e-12:
        raise ValueError(f"need |B| <= A for positivity, got A={A}, B={B}")
    den = (1.0 - A) ** 2 - B * B
    if den <= 1e-12:
        raise ValueError("degenerate parameters: (1-A)^2 - B^2 must stay positive")
    sigma = np.zeros((4, 4), dtype=complex)
    sigma[0, 0] = sigma[3, 3] = A
    sigma[0, 3] = sigma[3, 0] = B
    sigma[1, 1] = 1.0 - 2.0 * A
    e = (1.0 - 2.0 * A) * (1.0 - A) ** 2 / den
    c = 1.0 - A - e
    d = (1.0 - 2.0 * A) * (1.0 - A) * B / den
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = c
    rho[0, 3] = rho[3, 0] = d
    rho[1, 1] = e
    rho[2, 2] = 1.0 - 2.0 * c - e
    sigma_dm = DensityMatrix(sigma, (2, 2))
    rho_dm = DensityMatrix(rho, (2, 2))
    value = measures.relative_entropy(sigma_dm, rho_dm)
    return ClosedFormCase("example4", {"A": A, "B": B}, sigma_dm, rho_dm, value)


def example_case(which: int, **params) -> ClosedFormCase:
    """Worked example `which` in 1..4 with its parameters.

    Example 1 and 2 take lam; Examples 3 and 4 take A and B (real).
    """
    which = int(which)
    try:
        if which == 1:
            return _case1(float(params.pop("lam")))
        if which == 2:
            return _case2(float(params.pop("lam")))
        if which == 3:
            return _case3(float(params.pop("A")), float(params.pop("B")))
        if which == 4:
            return _case4(float(params.pop("A")), float(params.pop("B")))
    except KeyError as missing:
        raise ValueError(f"example {which} needs parameter {missing}") from None
    raise ValueError(f"example number must be 1..4, got {which}")


def bell_diagonal_ree(weights) -> float:
    """Relative entropy of entanglement of a Bell-diagonal state via its
    largest weight F: F ln F + (1-F) ln(1-F) + ln 2 for F > 1/2, else 0."""
    if isinstance(weights, BellDiagonal):
        w = weights.weights
    else:
        w = BellDiagonal(np.asarray(weights, dtype=float)).weights
    f = float(w.max())
    if f <= 0.5:
        return 0.0
    return f * math.log(f) + _xlogx(1.0 - f) + LN2


# Bell-phase ("magic") basis columns: Phi+, i Phi-, i Psi+, Psi-. In this
# basis the maximally entangled states are exactly the real unit combinations.
_MAGIC = np.array(
    [
        [1.0, 1.0j, 0.0, 0.0],
        [0.0, 0.0, 1.0j, 1.0],
        [0.0, 0.0, 1.0j, -1.0],
        [1.0, -1.0j, 0.0, 0.0],
    ],
    dtype=complex,
) / math.sqrt(2.0)


def max_singlet_fidelity(sigma: DensityMatrix) -> float:
    """max <psi|sigma|psi> over maximally entangled two-qubit states psi.

    Equals the largest eigenvalue of the real part of sigma in the
    Bell-phase basis.
    """
    if sigma.dims != (2, 2):
        raise ValueError(f"two-qubit states only, got dims {sigma.dims}")
    m = _MAGIC.conj().T @ sigma.matrix @ _MAGIC
    real_part = np.ascontiguousarray(m.real + m.real.T) / 2.0
    top = linalg.eig_hermitian(real_part.astype(complex)).eigenvalues[0]
    return float(np.clip(top, 0.0, 1.0))


def werner_lower_bound(sigma: DensityMatrix) -> float:
    """Twirling bound: E(sigma) >= E(W_F) at F the maximal singlet fidelity."""
    f = max_singlet_fidelity(sigma)
    if f <= 0.5:
        return 0.0
    return f * math.log(f) + _xlogx(1.0 - f) + LN2


_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


def concurrence(sigma: DensityMatrix) -> float:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4) with l_i the
    descending square roots of the spectrum of sqrt(rho) rho~ sqrt(rho)."""
    if sigma.dims != (2, 2):
        raise ValueError(f"two-qubit states only, got dims {sigma.dims}")
    yy = linalg.tensor(_SIGMA_Y, _SIGMA_Y)
    tilde = yy @ sigma.matrix.conj() @ yy
    root = measures._sqrtm_psd(sigma.matrix)
    r = root @ tilde @ root
    values = linalg.eig_hermitian((r + r.conj().T) / 2.0).eigenvalues
    lam = np.sqrt(np.clip(values, 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_two_qubit(sigma: DensityMatrix) -> float:
    """Entanglement of formation of a two-qubit state, in nats.

    Concurrence closed form: h((1 + sqrt(1 - C^2))/2) with h the binary
    entropy. Coincides with pure_state_ree on pure states.
    """
    c = concurrence(sigma)
    if c <= 0.0:
        return 0.0
    x = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c)))
    return _binary_entropy(x)
