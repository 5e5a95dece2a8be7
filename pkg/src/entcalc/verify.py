"""Executable properties: separability checks, the monotonicity axioms, and
sampled local-operation harnesses.

Each check_* function runs one trial and returns a PropertyReport with a
signed margin; non-negative margin means the property held (tolerances are
folded into the margin). Reports merge deterministically by trial order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, measures
from .analytic import eof_two_qubit
from .optimizer import OptimizerConfig, certify_minimum, minimize
from .states import DensityMatrix, PureState, haar_unitary, random_local_unitary, schmidt

PPT_TOLERANCE = 1e-10
COMPLETENESS_TOLERANCE = 1e-10
MONOTONE_TOLERANCE = 1e-3
CERTIFICATE_TOLERANCE = 1e-6
TENSOR_IDENTITY_TOLERANCE = 1e-9
_NEGLIGIBLE_BRANCH = 1e-12


@dataclass
class LocalOperation:
    """A finite family of product Kraus pairs (A_i, B_i) forming a channel."""

    kraus_pairs: list

    def __post_init__(self):
        pairs = []
        for a, b in self.kraus_pairs:
            a = np.ascontiguousarray(a, dtype=complex)
            b = np.ascontiguousarray(b, dtype=complex)
            if a.shape != (2, 2) or b.shape != (2, 2):
                raise ValueError("Kraus factors must be 2x2")
            pairs.append((a, b))
        self.kraus_pairs = pairs
        residual = self.completeness_residual()
        if residual > COMPLETENESS_TOLERANCE:
            raise ValueError(f"completeness violated: residual {residual:.3e}")

    def completeness_residual(self) -> float:
        total = np.zeros((4, 4), dtype=complex)
        for a, b in self.kraus_pairs:
            k = np.kron(a, b)
            total += k.conj().T @ k
        return float(np.abs(total - np.eye(4)).max())

    def __len__(self) -> int:
        return len(self.kraus_pairs)


@dataclass
class PropertyReport:
    property_id: str
    trials: int
    violations: int
    worst_margin: float
    violating_seeds: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _single(property_id: str, margin: float, seed) -> PropertyReport:
    violated = margin < 0.0
    return PropertyReport(
        property_id, 1, int(violated), float(margin), [seed] if violated else []
    )


def merge_reports(property_id: str, reports) -> PropertyReport:
    reports = list(reports)
    if not reports:
        return PropertyReport(property_id, 0, 0, float("inf"), [])
    seeds = []
    for r in reports:
        seeds.extend(r.violating_seeds)
    return PropertyReport(
        property_id,
        sum(r.trials for r in reports),
        sum(r.violations for r in reports),
        min(r.worst_margin for r in reports),
        seeds,
    )


def is_ppt_separable(sigma: DensityMatrix) -> bool:
    """Peres-Horodecki test: positivity of the partial transpose decides
    separability exactly for 2x2 and 2x3 systems."""
    if sigma.dims not in ((2, 2), (2, 3)):
        raise ValueError(f"PPT is decisive only for dims (2,2)/(2,3), got {sigma.dims}")
    pt = linalg.partial_transpose(sigma.matrix, sigma.dims, "B")
    smallest = linalg.eig_hermitian(pt).eigenvalues[-1]
    return bool(smallest >= -PPT_TOLERANCE)


def _kraus_family(m: int, rng: np.random.Generator) -> list:
    """m-outcome qubit instrument: slices of a Haar-random isometry."""
    u = haar_unitary(2 * m, rng)
    iso = u[:, :2]
    return [np.ascontiguousarray(iso[2 * j : 2 * j + 2, :]) for j in range(m)]


def sample_local_operation(branches: int, seed: int, correlated: bool = True) -> LocalOperation:
    """A random LGM+CC operation with the given number of product branches.

    correlated=True draws a conditioned two-stage instrument: Alice measures
    first and Bob's instrument may depend on her outcome, which realizes the
    correlated completeness sum exactly. correlated=False uses one Bob
    instrument for all of Alice's outcomes (product completeness).
    """
    branches = int(branches)
    if branches < 1:
        raise ValueError(f"branches must be >= 1, got {branches}")
    rng = np.random.default_rng(seed)
    if correlated:
        m_a = int(rng.integers(1, branches + 1))
        if m_a > 1:
            cuts = np.sort(rng.choice(branches - 1, size=m_a - 1, replace=False))
            bounds = np.concatenate([[0], cuts + 1, [branches]])
        else:
            bounds = np.array([0, branches])
        parts = np.diff(bounds)
        alice = _kraus_family(m_a, rng)
        pairs = []
        for a, count in zip(alice, parts):
            for b in _kraus_family(int(count), rng):
                pairs.append((a, b))
    else:
        divisors = [d for d in range(1, branches + 1) if branches % d == 0]
        m_a = int(rng.choice(divisors))
        alice = _kraus_family(m_a, rng)
        bob = _kraus_family(branches // m_a, rng)
        pairs = [(a, b) for a in alice for b in bob]
    return LocalOperation(pairs)


def apply_branch(sigma: DensityMatrix, op: LocalOperation, i: int):
    """(unnormalized post-branch matrix, branch probability) for branch i."""
    if not 0 <= i < len(op.kraus_pairs):
        raise ValueError(f"branch index {i} out of range for {len(op.kraus_pairs)} branches")
    a, b = op.kraus_pairs[i]
    k = np.kron(a, b)
    out = k @ sigma.matrix @ k.conj().T
    return out, float(out.trace().real)


def check_E3(
    sigma: DensityMatrix,
    op: LocalOperation,
    measure: str = "ree",
    seed: int = 0,
) -> PropertyReport:
    """Expected entanglement after a local operation never exceeds the input
    entanglement: sum_i p_i E(sigma_i) <= E(sigma) + tolerance.

    An apparent violation triggers one re-run at tightened optimizer
    settings before being reported.
    """

    def both_sides(cfg: OptimizerConfig):
        rhs = minimize(sigma, cfg).value
        lhs = 0.0
        for i in range(len(op)):
            out, p = apply_branch(sigma, op, i)
            if p < _NEGLIGIBLE_BRANCH:
                continue
            branch = DensityMatrix(out / p, sigma.dims)
            lhs += p * minimize(branch, cfg).value
        return lhs, rhs

    lhs, rhs = both_sides(OptimizerConfig(functional=measure, seed=seed))
    margin = rhs + MONOTONE_TOLERANCE - lhs
    if margin < 0.0:
        tightened = OptimizerConfig(
            functional=measure, seed=seed, restarts=8, max_iterations=4000
        )
        lhs, rhs = both_sides(tightened)
        margin = rhs + MONOTONE_TOLERANCE - lhs
    return _single("E3-monotonicity", margin, seed)


def check_convexity(
    sigma1: DensityMatrix,
    sigma2: DensityMatrix,
    x: float,
    measure: str = "ree",
    seed: int = 0,
) -> PropertyReport:
    """Mixing does not increase entanglement:
    E(x s1 + (1-x) s2) <= x E(s1) + (1-x) E(s2) + tolerance."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {x}")
    cfg = OptimizerConfig(functional=measure, seed=seed)
    mixed = DensityMatrix(x * sigma1.matrix + (1.0 - x) * sigma2.matrix, sigma1.dims)
    lhs = minimize(mixed, cfg).value
    rhs = x * minimize(sigma1, cfg).value + (1.0 - x) * minimize(sigma2, cfg).value
    return _single("theorem5-convexity", rhs + MONOTONE_TOLERANCE - lhs, seed)


def check_local_unitary_invariance(sigma: DensityMatrix, seed: int = 0) -> PropertyReport:
    """E2: local unitary rotations leave the measure unchanged."""
    ua, ub = random_local_unitary(seed)
    u = np.kron(ua, ub)
    rotated = DensityMatrix(u @ sigma.matrix @ u.conj().T, sigma.dims)
    cfg = OptimizerConfig(seed=seed)
    delta = abs(minimize(sigma, cfg).value - minimize(rotated, cfg).value)
    return _single("E2-local-unitary", MONOTONE_TOLERANCE - delta, seed)


def closest_pure_state_mixture(psi: PureState) -> DensityMatrix:
    """The Schmidt-diagonal mixture sum_n p_n |u_n v_n><u_n v_n|, which is
    the closest separable state to a pure state."""
    coeffs, (abasis, bbasis) = schmidt(psi)
    m = np.zeros((psi.dims[0] * psi.dims[1],) * 2, dtype=complex)
    for k in range(coeffs.shape[0]):
        vec = np.kron(abasis[:, k], bbasis[:, k])
        m += float(coeffs[k] ** 2) * np.outer(vec, vec.conj())
    return DensityMatrix(m, psi.dims)


def check_theorem4(psi: PureState, x: float, seed: int = 0) -> PropertyReport:
    """The pure state's minimizer stays the minimizer along the segment
    sigma_x = (1-x)|psi><psi| + x rho*: certificate slack >= -1e-6."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    rho_star = closest_pure_state_mixture(psi)
    mix = DensityMatrix(
        (1.0 - x) * psi.density().matrix + x * rho_star.matrix, psi.dims
    )
    slack = certify_minimum(mix, rho_star, samples=64, seed=seed)
    return _single("theorem4-segment", slack + CERTIFICATE_TOLERANCE, seed)


def check_theorem6(sigma: DensityMatrix, seed: int = 0) -> PropertyReport:
    """Relative entropy of entanglement never exceeds entanglement of
    formation (up to optimizer tolerance)."""
    ree = minimize(sigma, OptimizerConfig(seed=seed)).value
    eof = eof_two_qubit(sigma)
    return _single("theorem6-ordering", eof + MONOTONE_TOLERANCE - ree, seed)


def probe_subadditivity(sigma: DensityMatrix, seed: int = 0) -> PropertyReport:
    """Upper-bound witness for two copies: S(s x s || r* x r*) = 2 E(s).

    The product of closest states is separable for the doubled system, so
    the tensor identity pins E(s x s) <= 2 E(s); the check verifies the
    identity itself to tight tolerance.
    """
    result = minimize(sigma, OptimizerConfig(seed=seed))
    doubled_sigma = DensityMatrix(
        np.kron(sigma.matrix, sigma.matrix), (4, 4)
    )
    doubled_rho = DensityMatrix(
        np.kron(result.closest.matrix, result.closest.matrix), (4, 4)
    )
    witness = measures.relative_entropy(doubled_sigma, doubled_rho)
    deviation = abs(witness - 2.0 * result.value)
    return _single("subadditivity-witness", TENSOR_IDENTITY_TOLERANCE - deviation, seed)
