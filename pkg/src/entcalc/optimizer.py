"""Minimization of distance functionals over the separable two-qubit set.

The search runs in the 79-angle coordinates of `states.SeparableAngles`.
The distance is convex over the separable set itself but the angle chart is
not convex, so the engine combines multiple restarts with a directional
derivative certificate at the winner: a result counts as certified only
when no pure product direction can decrease the objective to first order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import _kernel, linalg, measures
from .states import DensityMatrix, SeparableAngles, mixing_angles_from_weights

FUNCTIONAL_REE = "ree"
FUNCTIONAL_BURES = "bures"

EIGENVALUE_CLAMP = 1e-12
INITIAL_STEP = 1.0
SUFFICIENT_DECREASE = 1e-4
RELATIVE_CHANGE_TOLERANCE = 1e-10
MAX_BACKTRACKS = 60
CERTIFIED_SLACK = -1e-6
_SWEEP_TOLERANCE = 1e-13
_MAX_SWEEPS = 200
_INF_PENALTY = 1e6
# plain descent can stall at points where opening or closing a mixture term
# has zero parameter gradient (the weights are quadratic in the mixing
# angles), so the winner is polished: insert the most-violating certificate
# direction as a new term, re-solve the weights multiplicatively over the
# fixed terms, and refine, until the slack clears this target
_POLISH_TARGET = -1e-8
_POLISH_ROUNDS = 30
_RESOLVE_ROUNDS = 200
_POLISH_GRADIENT_TOLERANCE = 1e-8


@dataclass
class OptimizerConfig:
    functional: str = FUNCTIONAL_REE
    max_iterations: int = 2000
    gradient_tolerance: float = 1e-6
    step_shrink: float = 0.5
    restarts: int = 5
    seed: int = 0
    finite_difference_step: float = 1e-5
    certificate_samples: int = 64

    def __post_init__(self):
        self.functional = str(self.functional).strip().lower()
        if self.functional not in (FUNCTIONAL_REE, FUNCTIONAL_BURES):
            raise ValueError(f"unknown functional {self.functional!r}")
        if self.max_iterations < 1 or self.restarts < 1:
            raise ValueError("max_iterations and restarts must be positive")
        for name in ("gradient_tolerance", "step_shrink", "finite_difference_step"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.step_shrink < 1.0:
            raise ValueError("step_shrink must lie in (0, 1)")
        if self.certificate_samples < 0:
            raise ValueError("certificate_samples must be non-negative")


@dataclass
class MeasureResult:
    value: float
    closest: DensityMatrix
    angles: SeparableAngles
    iterations: int
    gradient_norm: float
    restarts_used: int
    certificate_slack: float

    @property
    def certified(self) -> bool:
        return self.certificate_slack >= CERTIFIED_SLACK


def _check_two_qubit(sigma: DensityMatrix):
    if sigma.dims != (2, 2):
        raise ValueError(f"optimizer handles two-qubit states only, got dims {sigma.dims}")


def objective(sigma: DensityMatrix, angles: SeparableAngles, functional: str = FUNCTIONAL_REE) -> float:
    """The selected distance functional at the realized angle state.

    Infinite relative entropy is reported as the finite penalty 1e6 so the
    value is always usable in comparisons.
    """
    _check_two_qubit(sigma)
    from .states import realize

    rho = realize(angles)
    functional = functional.strip().lower()
    if functional == FUNCTIONAL_REE:
        value = measures.relative_entropy(sigma, rho)
        return _INF_PENALTY if math.isinf(value) else value
    if functional == FUNCTIONAL_BURES:
        return measures.bures_distance(sigma, rho)
    raise ValueError(f"unknown functional {functional!r}")


def analytic_gradient(sigma: DensityMatrix, angles: SeparableAngles) -> np.ndarray:
    """Exact gradient of the relative-entropy objective in angle coordinates.

    The sigma ln sigma term is constant, so this is the gradient of
    -tr(sigma ln rho(angles)), computed through the divided-difference form
    of the log derivative at clamped eigenvalues.
    """
    _check_two_qubit(sigma)
    _, grad = _kernel.ree_cross_and_grad(angles.to_vector(), sigma.matrix, EIGENVALUE_CLAMP)
    return grad


def _finite_difference_gradient(fn, x: np.ndarray, step: float) -> np.ndarray:
    grad = np.empty_like(x)
    for k in range(x.shape[0]):
        forward = x.copy()
        backward = x.copy()
        forward[k] += step
        backward[k] -= step
        grad[k] = (fn(forward) - fn(backward)) / (2.0 * step)
    return grad


def _descend(x0: np.ndarray, value, value_and_grad, cfg: OptimizerConfig):
    """Gradient descent with backtracking. Returns (f, x, iters, grad_norm)."""
    x = x0.copy()
    f, g = value_and_grad(x)
    iterations = 0
    gnorm = float(np.linalg.norm(g))
    for _ in range(cfg.max_iterations):
        if gnorm < cfg.gradient_tolerance:
            break
        gsq = gnorm * gnorm
        step = INITIAL_STEP
        trial_f = None
        for _ in range(MAX_BACKTRACKS):
            trial = x - step * g
            ft = value(trial)
            if ft <= f - SUFFICIENT_DECREASE * step * gsq:
                trial_f = ft
                break
            step *= cfg.step_shrink
        if trial_f is None:
            break  # no decrease along -g at the smallest step: stalled
        drop = f - trial_f
        x = trial
        f, g = value_and_grad(x)
        gnorm = float(np.linalg.norm(g))
        iterations += 1
        if drop < RELATIVE_CHANGE_TOLERANCE * max(abs(f), 1.0):
            break
    return f, x, iterations, gnorm


def _diagonal_start(sigma: DensityMatrix) -> np.ndarray:
    """Angles realizing the diagonal of sigma in the product basis."""
    diag = np.clip(np.diagonal(sigma.matrix).real, 0.0, None)
    weights = np.zeros(_kernel.N_TERMS)
    weights[:4] = diag / diag.sum()
    phi = mixing_angles_from_weights(weights)
    half_pi = 0.5 * math.pi
    alpha = np.zeros(16)
    beta = np.zeros(16)
    alpha[:4] = [0.0, 0.0, half_pi, half_pi]
    beta[:4] = [0.0, half_pi, 0.0, half_pi]
    zeros = np.zeros(16)
    return np.concatenate([phi, alpha, zeros, beta, zeros])


def _restart_starts(sigma: DensityMatrix, cfg: OptimizerConfig) -> list[np.ndarray]:
    starts = [_diagonal_start(sigma)]
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    for r in range(1, cfg.restarts):
        rng = np.random.default_rng(children[r])
        starts.append(rng.uniform(0.0, 2.0 * math.pi, _kernel.N_ANGLES))
    return starts


def _thread_count() -> int:
    raw = os.environ.get("ENTCALC_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def minimize(sigma: DensityMatrix, config: OptimizerConfig | None = None) -> MeasureResult:
    """Minimize the configured functional over separable two-qubit states.

    Runs the configured number of restarts (first one seeded at sigma's
    decohered diagonal, the rest at uniform random angles), keeps the best
    value with ties broken by lowest restart index, and always computes the
    directional-derivative certificate at the winner. Deterministic for a
    fixed config; restarts may execute concurrently when ENTCALC_THREADS
    is set above 1.
    """
    _check_two_qubit(sigma)
    cfg = config if config is not None else OptimizerConfig()

    if cfg.functional == FUNCTIONAL_REE:
        sigma_matrix = sigma.matrix
        entropy_term = measures._xlogx(
            np.clip(np.linalg.eigvalsh(sigma_matrix), 0.0, None)
        )

        def value(x):
            return entropy_term + _kernel.ree_cross(x, sigma_matrix, EIGENVALUE_CLAMP)

        def value_and_grad(x):
            cross, grad = _kernel.ree_cross_and_grad(x, sigma_matrix, EIGENVALUE_CLAMP)
            return entropy_term + cross, grad

    else:
        sqrt_sigma = measures._sqrtm_psd(sigma.matrix)

        def value(x):
            return _kernel.bures_value(x, sqrt_sigma)

        def value_and_grad(x):
            return value(x), _finite_difference_gradient(
                value, x, cfg.finite_difference_step
            )

    if cfg.functional == FUNCTIONAL_REE:

        def witness(x):
            rho_m = _kernel.separable_density(x)
            return 1.0, _log_witness_matrix(sigma_matrix, rho_m, EIGENVALUE_CLAMP)

    else:

        def witness(x):
            rho_m = _kernel.separable_density(x)
            return _bures_witness_matrix(sqrt_sigma, rho_m, EIGENVALUE_CLAMP)

    starts = _restart_starts(sigma, cfg)
    threads = _thread_count()

    def run(start):
        return _descend(start, value, value_and_grad, cfg)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(starts))) as pool:
            outcomes = list(pool.map(run, starts))
    else:
        outcomes = [run(s) for s in starts]

    best_index = min(range(len(outcomes)), key=lambda i: (outcomes[i][0], i))
    best_f, best_x, _, best_gnorm = outcomes[best_index]
    total_iterations = sum(o[2] for o in outcomes)

    best_f, best_x, polish_iterations, best_gnorm = _certificate_polish(
        best_f, best_x, best_gnorm, value, value_and_grad, witness, cfg
    )
    total_iterations += polish_iterations

    angles = SeparableAngles.from_vector(best_x)
    closest = DensityMatrix(_kernel.separable_density(best_x), (2, 2))
    if cfg.functional == FUNCTIONAL_REE:
        final_value = measures.relative_entropy(sigma, closest)
        slack = certify_minimum(sigma, closest, cfg.certificate_samples, cfg.seed)
    else:
        final_value = measures.bures_distance(sigma, closest)
        slack = _bures_certificate(sigma, closest, cfg.certificate_samples, cfg.seed)

    return MeasureResult(
        value=float(final_value),
        closest=closest,
        angles=angles,
        iterations=total_iterations,
        gradient_norm=best_gnorm,
        restarts_used=len(outcomes),
        certificate_slack=slack,
    )


def _vector_angles(c: np.ndarray):
    """(amplitude, phase) angles of a normalized qubit vector: the state
    (cos a, sin a e^{i p}) equals c up to a global phase."""
    amplitude = math.atan2(abs(c[1]), abs(c[0]))
    phase = float(np.angle(c[1] * np.conj(c[0])))
    return amplitude, phase


def _insert_direction(x: np.ndarray, a_vec: np.ndarray, b_vec: np.ndarray, value_fn, f0: float):
    """Swap the least-weighted mixture term for the product state a x b and
    move weight onto it along a halving grid, keeping the best strict
    decrease of the objective. Returns (f, x) or None when nothing helps.
    """
    weights = _kernel.mixing_weights(x[:15])
    j = int(np.argmin(weights))
    aa, ea = _vector_angles(a_vec)
    bb, mb = _vector_angles(b_vec)
    x2 = x.copy()
    x2[15 + j] = aa
    x2[31 + j] = ea
    x2[47 + j] = bb
    x2[63 + j] = mb

    best = None
    t = 0.5
    for _ in range(44):
        shifted = (1.0 - t) * weights
        shifted[j] += t
        x2[:15] = mixing_angles_from_weights(shifted)
        ft = value_fn(x2)
        if ft < f0 and (best is None or ft < best[0]):
            best = (ft, x2.copy())
        t *= 0.5
    return best


def _weight_resolve(x: np.ndarray, witness, value_fn):
    """Convex re-solve of the mixing weights over the current fixed terms.

    Multiplicative updates: a junk term's weight decays geometrically here,
    which plain descent in the angle chart cannot do (the weights are
    quadratic in the mixing angles, so the gradient dies with the weight).
    Monotone in the objective; returns (f, x).
    """
    _, atoms = _kernel.product_terms(x)
    w = _kernel.mixing_weights(x[:15])
    x2 = x.copy()

    def with_weights(wvec):
        x2[:15] = mixing_angles_from_weights(wvec)
        return x2

    f = value_fn(with_weights(w))
    eta = 1.0
    for _ in range(_RESOLVE_ROUNDS):
        _, a = witness(with_weights(w))
        g = -np.einsum("ia,ab,ib->i", atoms.conj(), a, atoms).real
        g -= g.min()
        improved = False
        while eta >= 1e-12:
            trial = w * np.exp(-eta * g)
            total = trial.sum()
            if total > 0.0:
                trial /= total
                ft = value_fn(with_weights(trial))
                if ft < f:
                    w, f = trial, ft
                    improved = True
                    eta = min(2.0 * eta, 1e3)
                    break
            eta *= 0.5
        if not improved:
            break

    # flat junk (near-duplicate atoms) is invisible to the objective, but
    # its spread fakes extra rank in the mixture; drop any weight whose
    # removal costs nothing measurable
    flat = 1e-15 * max(abs(f), 1.0)
    for j in np.argsort(w):
        if w[j] <= 0.0:
            continue
        trial = w.copy()
        trial[j] = 0.0
        total = trial.sum()
        if total <= 0.0:
            continue
        trial = trial / total
        ft = value_fn(with_weights(trial))
        if ft <= f + flat:
            w, f = trial, ft
    return f, with_weights(w).copy()


def _refine(x0: np.ndarray, value_and_grad, cfg: OptimizerConfig):
    """Quasi-Newton refinement. The restart phase uses plain descent, which
    crawls on the ill-conditioned landscapes near rank-deficient optima, so
    polish rounds tighten the winner with l-bfgs instead."""
    outcome = scipy.optimize.minimize(
        value_and_grad,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={
            "maxiter": cfg.max_iterations,
            "gtol": min(cfg.gradient_tolerance, _POLISH_GRADIENT_TOLERANCE),
            "ftol": 1e-17,
            "maxcor": 20,
        },
    )
    gnorm = float(np.linalg.norm(np.asarray(outcome.jac, dtype=float)))
    return float(outcome.fun), np.asarray(outcome.x, dtype=float), int(outcome.nit), gnorm


def _certificate_polish(f0, x0, gnorm0, value, value_and_grad, witness, cfg):
    """Alternate certificate-guided term insertion, a convex weight re-solve,
    and quasi-Newton refinement until the first-order slack clears the
    polish target. Returns the possibly improved (f, x, extra_iterations,
    grad_norm)."""
    f, x, gnorm = f0, x0, gnorm0
    iterations = 0
    rf, rx, extra, rgnorm = _refine(x, value_and_grad, cfg)
    iterations += extra
    if rf < f:
        f, x, gnorm = rf, rx, rgnorm
    # the slack is only meaningful right after a weight re-solve: descent
    # leaves junk weights behind, and their spurious near-null directions
    # poison the witness, so every round ends on a re-solve
    rf, rx = _weight_resolve(x, witness, value)
    if rf <= f + 1e-15 * max(abs(f), 1.0):
        f, x = rf, rx
    for _ in range(_POLISH_ROUNDS):
        threshold, a = witness(x)
        top, a_vec, b_vec = _max_product_state(a, cfg.certificate_samples, cfg.seed)
        if threshold - top >= _POLISH_TARGET:
            break
        round_start = f
        inserted = _insert_direction(x, a_vec, b_vec, value, f)
        if inserted is not None:
            f, x = inserted
        f, x, extra, gnorm = _refine(x, value_and_grad, cfg)
        iterations += extra + 1
        rf, rx = _weight_resolve(x, witness, value)
        if rf <= f + 1e-15 * max(abs(f), 1.0):
            f, x = rf, rx
        if f > round_start - 1e-16 * max(abs(round_start), 1.0):
            break  # the round moved nothing measurable: stop retrying
    return f, x, iterations, gnorm


def _max_product_state(a_matrix: np.ndarray, samples: int, seed: int):
    """max over product states |alpha beta> of <alpha beta|A|alpha beta>,
    returning (value, alpha, beta).

    Alternating maximization over the two local factors (each step is an
    exact 2x2 top-eigenvector problem) from deterministic plus sampled
    starting points.
    """
    a4 = np.ascontiguousarray(a_matrix, dtype=complex).reshape(2, 2, 2, 2)
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    starts = [(e0, e0), (e0, e1), (e1, e0), (e1, e1), (plus, plus)]
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        starts.append((a / np.linalg.norm(a), b / np.linalg.norm(b)))

    best = -math.inf
    best_a = e0
    best_b = e0
    for a, b in starts:
        val, a, b = _sweep_product_pair(a4, a, b)
        if val > best:
            best, best_a, best_b = val, a, b
    return best, best_a, best_b


def _sweep_product_pair(a4: np.ndarray, a: np.ndarray, b: np.ndarray):
    prev = -math.inf
    val = prev
    for _ in range(_MAX_SWEEPS):
        m_a = np.einsum("j,ijkl,l->ik", b.conj(), a4, b)
        a = _top_eigvec_2x2(m_a)
        m_b = np.einsum("i,ijkl,k->jl", a.conj(), a4, a)
        b = _top_eigvec_2x2(m_b)
        val = float(np.einsum("j,jl,l->", b.conj(), m_b, b).real)
        if val - prev <= _SWEEP_TOLERANCE:
            break
        prev = val
    return val, a, b


def _top_eigvec_2x2(m: np.ndarray) -> np.ndarray:
    p = m[0, 0].real
    q = m[1, 1].real
    w = m[0, 1]
    if abs(w) < 1e-300:
        return (
            np.array([1.0, 0.0], dtype=complex)
            if p >= q
            else np.array([0.0, 1.0], dtype=complex)
        )
    half = 0.5 * (p - q)
    top = 0.5 * (p + q) + math.hypot(half, abs(w))
    v = np.array([w, top - p], dtype=complex)
    return v / np.linalg.norm(v)


def _log_witness_matrix(
    sigma_matrix: np.ndarray, candidate_matrix: np.ndarray, clamp: float
) -> np.ndarray:
    """A = sum_ij |i><i| sigma |j><j| k(r_i, r_j) in the candidate eigenbasis,
    k(p, q) = (ln p - ln q)/(p - q) with k(p, p) = 1/p, at clamped eigenvalues."""
    spec = linalg.eig_hermitian(candidate_matrix)
    if spec.eigenvalues.min() < -1e-10:
        raise ValueError("candidate has a negative eigenvalue beyond the clamp floor")
    rc = np.maximum(spec.eigenvalues, clamp)
    p = rc[:, None]
    q = rc[None, :]
    d = p - q
    near = np.abs(d) <= 1e-14 * (p + q)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.log1p(d / q) / d
    g[near] = (2.0 / (p + q))[near]
    st = spec.eigenvectors.conj().T @ sigma_matrix @ spec.eigenvectors
    a = spec.eigenvectors @ (g * st) @ spec.eigenvectors.conj().T
    return (a + a.conj().T) / 2.0


def certify_minimum(
    sigma: DensityMatrix,
    candidate: DensityMatrix,
    samples: int = 64,
    seed: int = 0,
    clamp: float = EIGENVALUE_CLAMP,
) -> float:
    """Directional-derivative slack of the relative entropy at `candidate`.

    Moving from the candidate toward any separable state changes the
    relative entropy at first order by 1 - tr(A rho); the extreme points
    are pure product states, so the returned slack is 1 minus the largest
    product expectation of A. Non-negative slack (within tolerance)
    certifies the candidate as the global minimum over the separable set.
    """
    _check_two_qubit(sigma)
    _check_two_qubit(candidate)
    a = _log_witness_matrix(sigma.matrix, candidate.matrix, clamp)
    return 1.0 - _max_product_state(a, samples, seed)[0]


def _bures_certificate(
    sigma: DensityMatrix,
    candidate: DensityMatrix,
    samples: int = 64,
    seed: int = 0,
    clamp: float = EIGENVALUE_CLAMP,
) -> float:
    """First-order slack for the Bures distance at `candidate`.

    With M = sqrt(sigma) rho sqrt(sigma), moving toward a separable state
    tau changes sqrt(F) at first order by (tr(Q tau) - sqrt(F))/2 where
    Q = sqrt(sigma) M^{-1/2} sqrt(sigma); the distance decreases in some
    product direction iff some product expectation of Q exceeds sqrt(F).
    """
    _check_two_qubit(sigma)
    _check_two_qubit(candidate)
    sqrt_sigma = measures._sqrtm_psd(sigma.matrix)
    root_sum, q = _bures_witness_matrix(sqrt_sigma, candidate.matrix, clamp)
    return root_sum - _max_product_state(q, samples, seed)[0]


def _bures_witness_matrix(
    sqrt_sigma: np.ndarray, rho_matrix: np.ndarray, clamp: float
):
    """(sqrt(F), Q) with Q = sqrt(sigma) M^{-1/2} sqrt(sigma) at clamped
    eigenvalues of M = sqrt(sigma) rho sqrt(sigma)."""
    m = sqrt_sigma @ rho_matrix @ sqrt_sigma
    spec = linalg.eig_hermitian(m)
    values = np.clip(spec.eigenvalues, 0.0, None)
    root_sum = float(np.sqrt(values).sum())
    inv_root = (spec.eigenvectors / np.sqrt(np.maximum(values, clamp))) @ spec.eigenvectors.conj().T
    q = sqrt_sigma @ inv_root @ sqrt_sigma
    return root_sum, (q + q.conj().T) / 2.0


def indicator_measure(sigma: DensityMatrix) -> int:
    """1 when the state is entangled by the partial-transpose test, else 0."""
    _check_two_qubit(sigma)
    from .verify import is_ppt_separable

    return 0 if is_ppt_separable(sigma) else 1
