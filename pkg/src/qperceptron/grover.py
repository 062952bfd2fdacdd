"""Grover search over perceptron weights, or over inputs and weights jointly."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .perceptron import Assignment, ProblemSpec, SolutionSet, check_inputs, enumerate_solutions, satisfies
from .qarith import (
    GateSequence,
    allocate_layout,
    build_perceptron_oracle,
    search_registers,
    weight_names,
)
from .statevector import (
    H,
    MCZ,
    Histogram,
    LayoutError,
    QubitLayout,
    X,
    init_state,
    marginal,
    probabilities,
)

AUTO = "auto"
TIE_TOL = 1e-12


@dataclass(frozen=True)
class GroverPlan:
    n: int
    l: int
    iterations: int


@dataclass
class RunResult:
    spec: ProblemSpec
    inputs: tuple[int, ...] | None  # None for a joint run
    layout: QubitLayout
    plan: GroverPlan
    circuit: GateSequence
    full_distribution: Histogram
    search_marginal: Histogram
    verified_solutions: SolutionSet
    solution_mass: float
    no_solutions_detected: bool

    @property
    def joint(self) -> bool:
        return self.inputs is None


@dataclass
class TuneResult:
    best_k: int
    hit_rate: float
    masses: dict[int, float] = field(default_factory=dict)
    no_solutions_detected: bool = False


def grover_iterations(n: int, l: int) -> int:
    """floor(pi/4 * sqrt(2**n / l)), never below 1."""
    if l < 1:
        raise ValueError("l must be >= 1; use tune_iterations when the solution count is unknown")
    if l > 1 << n:
        raise ValueError(f"l={l} exceeds the 2**{n} search space")
    return max(1, math.floor(math.pi / 4 * math.sqrt((1 << n) / l)))


def build_diffusion(layout: QubitLayout, search: Sequence[str]) -> GateSequence:
    """Reflection about the uniform superposition of the search qubits (up to a global sign)."""
    if not search:
        raise ValueError("diffusion needs at least one search register")
    qs = layout.qubits(search)
    hs = [H(q) for q in qs]
    xs = [X(q) for q in qs]
    return GateSequence(layout, hs + xs + [MCZ(qs)] + xs + hs, tuple(search))


def build_circuit(
    spec: ProblemSpec, inputs: Sequence[int] | None, iterations: int
) -> GateSequence:
    """State preparation followed by ``iterations`` rounds of oracle then diffusion."""
    joint = inputs is None
    layout = allocate_layout(spec, joint)
    search = search_registers(spec, joint)
    prep: list = []
    if not joint:
        prep += [X(q) for q, bit in zip(layout["I"], inputs) if bit]
    prep += [H(q) for q in layout.qubits(search)]
    oracle = build_perceptron_oracle(spec, layout)
    diffusion = build_diffusion(layout, search)
    circuit = GateSequence(layout, prep, search)
    for _ in range(iterations):
        circuit = circuit + oracle + diffusion
    return circuit


def split_outcome(spec: ProblemSpec, hist: Histogram, key: str, inputs) -> tuple[tuple, tuple]:
    """(inputs, weights) for a search-marginal key; ``inputs`` fills in a weight-only key."""
    values = hist.values(key)
    if "I" in values:
        i_val = values["I"]
        inputs = tuple(i_val >> k & 1 for k in range(spec.n_inputs))
    weights = tuple(values[name] for name in weight_names(spec))
    return tuple(inputs), weights


def verified_mass(spec: ProblemSpec, hist: Histogram, inputs) -> float:
    return sum(
        p for key, p in hist.items() if satisfies(spec, *split_outcome(spec, hist, key, inputs))
    )


def simulate(circuit: GateSequence) -> tuple[Histogram, Histogram]:
    state = init_state(circuit.layout.n_qubits).run(circuit)
    full = probabilities(state, circuit.layout)
    return full, marginal(full, circuit.layout, circuit.search)


def _resolve(spec, inputs, iterations, n) -> GroverPlan:
    l = len(enumerate_solutions(spec, inputs))
    if iterations != AUTO:
        k = int(iterations)
        if k < 0:
            raise ValueError("iterations must be >= 0")
        return GroverPlan(n, l, k)
    if l:
        return GroverPlan(n, l, grover_iterations(n, l))
    tuned = tune_iterations(spec, inputs, grover_iterations(n, 1))
    return GroverPlan(n, l, tuned.best_k)


def _run(spec: ProblemSpec, inputs, iterations) -> RunResult:
    joint = inputs is None
    n = spec.n_inputs * spec.weight_bits + (spec.n_inputs if joint else 0)
    plan = _resolve(spec, inputs, iterations, n)
    circuit = build_circuit(spec, inputs, plan.iterations)
    full, search_hist = simulate(circuit)
    uniform = 1.0 / (1 << n)
    found = []
    for key, p in search_hist.items():
        i, w = split_outcome(spec, search_hist, key, inputs)
        if p > uniform + 1e-9 and satisfies(spec, i, w):
            found.append((i, w))
    solutions = SolutionSet(spec, joint, tuple(sorted(Assignment(i, w) for i, w in found)))
    mass = verified_mass(spec, search_hist, inputs)
    return RunResult(
        spec=spec,
        inputs=None if joint else tuple(inputs),
        layout=circuit.layout,
        plan=plan,
        circuit=circuit,
        full_distribution=full,
        search_marginal=search_hist,
        verified_solutions=solutions,
        solution_mass=mass,
        no_solutions_detected=mass < 2 * uniform,
    )


def run_weight_search(spec: ProblemSpec, inputs: Sequence[int], iterations: int | str = AUTO) -> RunResult:
    return _run(spec, check_inputs(spec, inputs), iterations)


def run_joint_search(spec: ProblemSpec, iterations: int | str = AUTO) -> RunResult:
    return _run(spec, None, iterations)


def weight_marginal(result: RunResult) -> Histogram:
    if not result.joint:
        raise LayoutError("weight_marginal expects a joint-search result")
    return marginal(result.full_distribution, result.layout, weight_names(result.spec))


def tune_iterations(spec: ProblemSpec, inputs: Sequence[int] | None, max_k: int) -> TuneResult:
    """Pick the iteration count with the most classically verified probability mass.

    Candidates run from ``max_k`` down to 1 and ties go to the smaller count.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    if inputs is not None:
        inputs = check_inputs(spec, inputs)
    joint = inputs is None
    n = spec.n_inputs * spec.weight_bits + (spec.n_inputs if joint else 0)
    masses: dict[int, float] = {}
    best_k, best = max_k, -1.0
    for k in range(max_k, 0, -1):
        _, search_hist = simulate(build_circuit(spec, inputs, k))
        masses[k] = verified_mass(spec, search_hist, inputs)
        if masses[k] >= best - TIE_TOL:
            best_k, best = k, max(best, masses[k])
    return TuneResult(
        best_k=best_k,
        hit_rate=best,
        masses=dict(sorted(masses.items())),
        no_solutions_detected=best < 2.0 / (1 << n),
    )
