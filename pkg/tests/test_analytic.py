import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entcalc import analytic, measures, optimizer, states


def schmidt_entropy(psi):
    coeffs, _ = states.schmidt(psi)
    probs = np.asarray(coeffs, dtype=float) ** 2
    probs = probs[probs > 1e-15]
    return float(-np.sum(probs * np.log(probs)))


def test_pure_state_ree_equals_entanglement_entropy():
    for seed in range(8):
        psi = states.random_pure((2, 2), seed=seed)
        assert analytic.pure_state_ree(psi) == pytest.approx(
            schmidt_entropy(psi), abs=1e-12
        )


def test_pure_state_ree_extremes():
    product = states.PureState(np.array([1, 0, 0, 0], dtype=complex), (2, 2))
    assert analytic.pure_state_ree(product) == pytest.approx(0.0, abs=1e-12)
    assert analytic.pure_state_ree(states.bell_state("phi+")) == pytest.approx(
        math.log(2.0), abs=1e-12
    )


def test_pure_state_bures_is_squared_concurrence():
    for seed in range(8):
        psi = states.random_pure((2, 2), seed=seed + 40)
        c = analytic.concurrence(psi.density())
        assert analytic.pure_state_bures(psi) == pytest.approx(c * c, abs=1e-7)


def test_pure_state_bures_formula_overstates_distance():
    # The closed form 4 a^2 (1 - a^2) exceeds the true minimum
    # 2 - 2*max(a, sqrt(1-a^2)) attained at the nearest Schmidt vector,
    # so the published expression cannot be the minimized distance.  Kept
    # as a deliberate failure to document the discrepancy.
    a2 = 0.3
    amp = math.sqrt(a2)
    psi = states.PureState(
        np.array([amp, 0.0, 0.0, math.sqrt(1.0 - a2)], dtype=complex), (2, 2)
    )
    formula = analytic.pure_state_bures(psi)
    config = optimizer.OptimizerConfig(functional="bures", seed=0, restarts=2)
    result = optimizer.minimize(psi.density(), config)
    assert formula == pytest.approx(result.value, abs=1e-3), (
        "closed form 4a^2(1-a^2) = %.6f but the certified minimum over product "
        "states is %.6f = 2 - 2*sqrt(%.2f); the formula is not a distance "
        "to the separable set" % (formula, result.value, 1.0 - a2)
    )


@pytest.mark.parametrize("which,params", [
    (1, {"lam": 0.25}),
    (1, {"lam": 0.7}),
    (2, {"lam": 0.3}),
    (2, {"lam": 0.9}),
    (3, {"A": 0.4, "B": 0.2}),
    (4, {"A": 0.3, "B": 0.25}),
])
def test_example_case_internal_consistency(which, params):
    case = analytic.example_case(which, **params)
    # the tabulated value must be the relative entropy to the tabulated state
    direct = measures.relative_entropy(case.sigma, case.closest)
    assert case.value == pytest.approx(direct, abs=1e-10)
    # and that state must actually be separable
    from entcalc.verify import is_ppt_separable

    assert is_ppt_separable(case.closest)
    slack = optimizer.certify_minimum(case.sigma, case.closest)
    assert slack >= -1e-6


def test_example_cases_reduce_to_bell_state():
    for which in (1, 2):
        case = analytic.example_case(which, lam=1.0)
        assert case.value == pytest.approx(math.log(2.0), abs=1e-12)


def test_example_case_domain_validation():
    with pytest.raises(ValueError):
        analytic.example_case(1, lam=-0.1)
    with pytest.raises(ValueError):
        analytic.example_case(2, lam=1.5)
    with pytest.raises(ValueError):
        analytic.example_case(3, A=0.6, B=0.6)
    with pytest.raises(ValueError):
        analytic.example_case(5, lam=0.5)


def test_bell_diagonal_ree_below_threshold_is_zero():
    assert analytic.bell_diagonal_ree([0.5, 0.5, 0.0, 0.0]) == 0.0
    assert analytic.bell_diagonal_ree([0.4, 0.3, 0.2, 0.1]) == 0.0


def test_bell_diagonal_ree_matches_closest_state_construction():
    weights = [0.7, 0.2, 0.06, 0.04]
    value = analytic.bell_diagonal_ree(weights)
    f = weights[0]
    closest_weights = [0.5] + [w / (2.0 * (1.0 - f)) for w in weights[1:]]
    sigma = states.BellDiagonal(weights).state()
    rho = states.BellDiagonal(closest_weights).state()
    assert value == pytest.approx(measures.relative_entropy(sigma, rho), abs=1e-12)


def test_bell_diagonal_ree_validation():
    with pytest.raises(ValueError):
        analytic.bell_diagonal_ree([0.5, 0.5, 0.5, 0.5])
    with pytest.raises(ValueError):
        analytic.bell_diagonal_ree([0.9, 0.2, -0.05, -0.05])


def test_bell_diagonal_ree_pure_endpoint():
    # F = 1 must take the 0 ln 0 branch, not raise
    assert analytic.bell_diagonal_ree([1.0, 0.0, 0.0, 0.0]) == pytest.approx(
        math.log(2.0), abs=1e-12
    )


def test_max_singlet_fidelity_known_states():
    for f in (0.3, 0.55, 0.8):
        assert analytic.max_singlet_fidelity(states.werner(f)) == pytest.approx(
            f, abs=1e-9
        )
    bell = states.bell_state("phi+").density()
    assert analytic.max_singlet_fidelity(bell) == pytest.approx(1.0, abs=1e-9)
    product = states.PureState(
        np.array([1, 0, 0, 0], dtype=complex), (2, 2)
    ).density()
    assert analytic.max_singlet_fidelity(product) == pytest.approx(0.5, abs=1e-9)


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=30, deadline=None)
def test_max_singlet_fidelity_dominates_fixed_overlap(seed):
    sigma = states.random_density((2, 2), rank=4, seed=seed)
    phi = states.bell_state("phi+").amplitudes
    overlap = float(np.real(phi.conj() @ sigma.matrix @ phi))
    assert analytic.max_singlet_fidelity(sigma) >= overlap - 1e-9


def test_werner_lower_bound_formula():
    for f in (0.55, 0.7, 0.9):
        sigma = states.werner(f)
        bound = analytic.werner_lower_bound(sigma)
        expected = analytic.bell_diagonal_ree([f, (1 - f) / 3, (1 - f) / 3, (1 - f) / 3])
        assert bound == pytest.approx(expected, abs=1e-12)
    assert analytic.werner_lower_bound(states.werner(0.4)) == 0.0
    bell = states.bell_state("phi+").density()
    assert analytic.werner_lower_bound(bell) == pytest.approx(
        math.log(2.0), abs=1e-9
    )


def test_concurrence_known_values():
    for seed in range(5):
        psi = states.random_pure((2, 2), seed=seed + 90)
        coeffs, _ = states.schmidt(psi)
        expected = 2.0 * coeffs[0] * (coeffs[1] if len(coeffs) > 1 else 0.0)
        assert analytic.concurrence(psi.density()) == pytest.approx(
            expected, abs=1e-7
        )
    assert analytic.concurrence(states.werner(0.8)) == pytest.approx(0.6, abs=1e-9)
    assert analytic.concurrence(states.werner(0.25)) == 0.0
    separable = states.DensityMatrix(np.eye(4, dtype=complex) / 4.0, (2, 2))
    assert analytic.concurrence(separable) == 0.0


def test_eof_two_qubit_known_values():
    psi = states.random_pure((2, 2), seed=123)
    assert analytic.eof_two_qubit(psi.density()) == pytest.approx(
        schmidt_entropy(psi), abs=1e-7
    )
    assert analytic.eof_two_qubit(states.werner(1.0)) == pytest.approx(
        math.log(2.0), abs=1e-9
    )
    assert analytic.eof_two_qubit(states.werner(0.3)) == 0.0


@given(f=st.floats(min_value=0.51, max_value=0.99))
@settings(max_examples=30, deadline=None)
def test_eof_dominates_ree_on_werner_family(f):
    sigma = states.werner(f)
    eof = analytic.eof_two_qubit(sigma)
    ree = analytic.werner_lower_bound(sigma)
    assert eof >= ree - 1e-10
