import numpy as np
import pytest

from entcalc import analytic, measures, states, verify


def test_sampled_operations_are_complete():
    for branches in (1, 2, 3, 6):
        for correlated in (True, False):
            op = verify.sample_local_operation(branches, seed=branches, correlated=correlated)
            assert len(op) == branches
            assert op.completeness_residual() <= 1e-10


def test_local_operation_rejects_incomplete_family():
    op = verify.sample_local_operation(3, seed=0)
    broken = [(1.1 * a, b) for a, b in op.kraus_pairs]
    with pytest.raises(ValueError):
        verify.LocalOperation(broken)
    with pytest.raises(ValueError):
        verify.LocalOperation([(np.eye(3), np.eye(2))])


def test_apply_branch_probabilities_sum_to_one():
    sigma = states.random_density((2, 2), rank=3, seed=2)
    op = verify.sample_local_operation(4, seed=5)
    total = 0.0
    for i in range(len(op)):
        out, prob = verify.apply_branch(sigma, op, i)
        assert prob >= -1e-12
        assert np.allclose(out, out.conj().T)
        total += prob
    assert total == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        verify.apply_branch(sigma, op, len(op))


def test_monotonicity_check_passes_on_separable_state():
    op = verify.sample_local_operation(2, seed=7)
    report = verify.check_E3(states.werner(0.3), op, seed=7)
    assert report.trials > 0
    assert report.violations == 0


def test_monotonicity_check_passes_on_bell_state():
    op = verify.sample_local_operation(2, seed=9)
    report = verify.check_E3(states.bell_state("phi+").density(), op, seed=9)
    assert report.violations == 0
    assert report.worst_margin > -1e-3


def test_convexity_check():
    sigma1 = states.werner(0.9)
    sigma2 = states.werner(0.6)
    report = verify.check_convexity(sigma1, sigma2, 0.35, seed=1)
    assert report.violations == 0


def test_pure_state_mixing_bound():
    psi = states.random_pure((2, 2), seed=31)
    report = verify.check_theorem4(psi, 0.4, seed=31)
    assert report.violations == 0


def test_mixture_comparison_check():
    report = verify.check_theorem6(states.werner(0.8), seed=2)
    assert report.violations == 0


def test_subadditivity_probe_reports_cleanly():
    report = verify.probe_subadditivity(states.werner(0.7), seed=4)
    assert report.trials > 0
    assert report.violations == 0


def test_local_unitary_invariance():
    report = verify.check_local_unitary_invariance(states.werner(0.85), seed=6)
    assert report.violations == 0


def test_merge_reports_accumulates():
    a = verify.PropertyReport("p", trials=3, violations=1, worst_margin=-0.2,
                              violating_seeds=[4])
    b = verify.PropertyReport("p", trials=2, violations=0, worst_margin=0.5)
    merged = verify.merge_reports("p", [a, b])
    assert merged.trials == 5
    assert merged.violations == 1
    assert merged.worst_margin == -0.2
    assert merged.violating_seeds == [4]


def test_ppt_verdicts():
    assert not verify.is_ppt_separable(states.bell_state("psi-").density())
    assert not verify.is_ppt_separable(states.werner(0.75))
    assert verify.is_ppt_separable(states.werner(0.25))
    assert verify.is_ppt_separable(
        states.DensityMatrix(np.eye(4, dtype=complex) / 4.0, (2, 2))
    )
    product = states.PureState(np.array([0, 1, 0, 0], dtype=complex), (2, 2))
    assert verify.is_ppt_separable(product.density())
    with pytest.raises(ValueError):
        verify.is_ppt_separable(
            states.DensityMatrix(np.eye(9, dtype=complex) / 9.0, (3, 3))
        )


def test_closest_pure_state_mixture_properties():
    psi = states.random_pure((2, 2), seed=44)
    rho = verify.closest_pure_state_mixture(psi)
    assert verify.is_ppt_separable(rho)
    value = measures.relative_entropy(psi.density(), rho)
    assert value == pytest.approx(analytic.pure_state_ree(psi), abs=1e-9)
