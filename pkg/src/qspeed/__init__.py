"""Quantum speed limits for unitary evolution of finite-dimensional mixed states."""

from .bounds import (
    BoundCurve,
    BoundKind,
    Dichotomy,
    WitnessReport,
    commutator_bounds,
    dichotomy_check,
    empirical_theta_perp,
    entanglement_witness,
    fisher_bound,
    generalized_bounds,
    mt_bound,
    producibility_bound,
    theta_perp_bounds,
)
from .dynamics import (
    Evolution,
    EvolutionTrace,
    e_decomposition,
    e_dot,
    evolve,
    survival_D,
    survival_E,
    survival_P,
    survival_T,
    trace_evolution,
)
from .fisher import (
    FisherResult,
    UndefinedFisherError,
    classical_fisher_binary,
    qfi_bures_oracle,
    quantum_fisher,
)
from .linalg import (
    HermitianOperator,
    SpectralDecomposition,
    ValidationError,
    hermitian_eig,
    kron,
    psd_sqrt,
    trace_norm,
    unitary_exp,
)
from .scenarios import (
    LocalHamiltonian,
    Scenario,
    ScenarioError,
    build_collective_spin,
    build_named_state,
    build_one_qubit_example,
    build_two_qubit_example,
    load_scenario,
    save_scenario,
)
from .states import (
    DensityMatrix,
    Projector,
    expectation,
    fidelity,
    mix,
    pure_state,
    range_projector,
    std_dev,
    trace_distance,
)

__version__ = "0.1.0"
