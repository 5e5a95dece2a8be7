"""Entanglement measures of two-qubit states by convex minimization over the
separable set: relative entropy of entanglement, the Bures measure, closed
form oracles, and property harnesses for the entanglement axioms."""

from ._kernel import BACKEND
from .analytic import (
    ClosedFormCase,
    bell_diagonal_ree,
    concurrence,
    eof_two_qubit,
    example_case,
    max_singlet_fidelity,
    pure_state_bures,
    pure_state_ree,
    werner_lower_bound,
)
from .measures import (
    bures_distance,
    classical_correlations,
    classical_relative_entropy,
    fidelity,
    mutual_information,
    relative_entropy,
    sanov_confusion_probability,
    von_neumann_entropy,
)
from .optimizer import (
    MeasureResult,
    OptimizerConfig,
    analytic_gradient,
    certify_minimum,
    indicator_measure,
    minimize,
    objective,
)
from .states import (
    BellDiagonal,
    DensityMatrix,
    PureState,
    SeparableAngles,
    bell_state,
    haar_unitary,
    random_density,
    random_local_unitary,
    random_pure,
    realize,
    schmidt,
    werner,
)
from .verify import (
    LocalOperation,
    PropertyReport,
    apply_branch,
    check_E3,
    check_convexity,
    check_local_unitary_invariance,
    check_theorem4,
    check_theorem6,
    is_ppt_separable,
    probe_subadditivity,
    sample_local_operation,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BellDiagonal",
    "ClosedFormCase",
    "DensityMatrix",
    "LocalOperation",
    "MeasureResult",
    "OptimizerConfig",
    "PropertyReport",
    "PureState",
    "SeparableAngles",
    "analytic_gradient",
    "apply_branch",
    "bell_diagonal_ree",
    "bell_state",
    "bures_distance",
    "certify_minimum",
    "check_E3",
    "check_convexity",
    "check_local_unitary_invariance",
    "check_theorem4",
    "check_theorem6",
    "classical_correlations",
    "classical_relative_entropy",
    "concurrence",
    "eof_two_qubit",
    "example_case",
    "fidelity",
    "haar_unitary",
    "indicator_measure",
    "is_ppt_separable",
    "max_singlet_fidelity",
    "minimize",
    "mutual_information",
    "objective",
    "probe_subadditivity",
    "pure_state_bures",
    "pure_state_ree",
    "random_density",
    "random_local_unitary",
    "random_pure",
    "realize",
    "relative_entropy",
    "sample_local_operation",
    "sanov_confusion_probability",
    "schmidt",
    "von_neumann_entropy",
    "werner",
    "werner_lower_bound",
]
