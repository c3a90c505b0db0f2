"""State-vector simulation of phase-flip / inversion-about-mean circuits under
unitary and collapse-at-checkpoint semantics."""

from .dsl import ParseError, parse_circuit, print_circuit
from .gates import (
    InversionTrace,
    PhaseShiftSpec,
    conditional_phase_flip,
    conditional_phase_shift,
    diffusion_via_hadamards,
    hadamard_all,
    hadamard_on_qubit,
    inversion_about_mean,
)
from .grover import GroverRun, analytic_success_probability, grover_search, optimal_iterations
from .interpretation import (
    BUILTIN_CIRCUITS,
    COLLAPSE,
    UNITARY,
    BranchLimitError,
    Checkpoint,
    Circuit,
    Diffuse,
    Hadamard,
    InterpretationModel,
    Measure,
    PhaseShift,
    Semantics,
    TrialRecord,
    builtin_circuit,
    run_ensemble,
    run_exact,
    run_trial,
)
from .state import (
    MeasurementDistribution,
    StateVector,
    basis_state,
    born_probabilities,
    equal_up_to_global_phase,
    sample_measurement,
    total_variation,
    trial_rng,
)

__version__ = "0.1.0"
