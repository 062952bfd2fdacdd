"""Grover-search training circuits for a threshold perceptron, simulated exactly."""

from .grover import (
    AUTO,
    GroverPlan,
    RunResult,
    TuneResult,
    build_diffusion,
    grover_iterations,
    run_joint_search,
    run_weight_search,
    tune_iterations,
    weight_marginal,
)
from .perceptron import (
    Predicate,
    ProblemSpec,
    SolutionSet,
    activate,
    enumerate_solutions,
    neuron_input,
)
from .qarith import (
    GateSequence,
    allocate_layout,
    build_controlled_adder,
    build_equality_comparator,
    build_geq_comparator,
    build_perceptron_oracle,
)
from .statevector import (
    Gate,
    Histogram,
    QubitLayout,
    StateVector,
    apply_gate,
    init_state,
    marginal,
    probabilities,
    sample,
)

__version__ = "0.1.0"
