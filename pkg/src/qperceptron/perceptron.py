"""Classical single-neuron semantics and the brute-force solution enumerator."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence


class Predicate(str, enum.Enum):
    EQUAL = "equal"
    GEQ = "geq"


@dataclass(frozen=True)
class ProblemSpec:
    """One training problem: register widths, threshold and activation rule."""

    ac: int
    n_inputs: int = 2
    weight_bits: int = 2
    predicate: Predicate = Predicate.EQUAL

    def __post_init__(self):
        object.__setattr__(self, "predicate", Predicate(self.predicate))
        if self.n_inputs < 1 or self.weight_bits < 1:
            raise ValueError("n_inputs and weight_bits must be >= 1")
        if not 0 <= self.ac < 1 << self.sum_bits:
            raise ValueError(
                f"ac={self.ac} does not fit in {self.sum_bits} sum bits "
                f"(max {(1 << self.sum_bits) - 1})"
            )

    @property
    def max_weight(self) -> int:
        return (1 << self.weight_bits) - 1

    @property
    def sum_bits(self) -> int:
        return max(1, math.ceil(math.log2(self.n_inputs * self.max_weight + 1)))


@dataclass(frozen=True)
class PerceptronEval:
    h_input: int
    h_output: int


def neuron_input(inputs: Sequence[int], weights: Sequence[int]) -> int:
    if len(inputs) != len(weights):
        raise ValueError(f"{len(inputs)} inputs but {len(weights)} weights")
    return sum(i * w for i, w in zip(inputs, weights))


def activate(h_input: int, ac: int, predicate: Predicate | str) -> int:
    if Predicate(predicate) is Predicate.EQUAL:
        return int(h_input == ac)
    return int(h_input >= ac)


def evaluate(spec: ProblemSpec, inputs: Sequence[int], weights: Sequence[int]) -> PerceptronEval:
    h = neuron_input(inputs, weights)
    return PerceptronEval(h, activate(h, spec.ac, spec.predicate))


def satisfies(spec: ProblemSpec, inputs: Sequence[int], weights: Sequence[int]) -> bool:
    return activate(neuron_input(inputs, weights), spec.ac, spec.predicate) == 1


def check_inputs(spec: ProblemSpec, inputs: Sequence[int]) -> tuple[int, ...]:
    inputs = tuple(inputs)
    if len(inputs) != spec.n_inputs:
        raise ValueError(f"expected {spec.n_inputs} input bits, got {len(inputs)}")
    if any(b not in (0, 1) for b in inputs):
        raise ValueError(f"input bits must be 0 or 1, got {inputs}")
    return inputs


@dataclass(frozen=True, order=True)
class Assignment:
    inputs: tuple[int, ...]
    weights: tuple[int, ...]

    def weight_bits(self, width: int) -> str:
        return " ".join(format(w, f"0{width}b") for w in self.weights)

    def render(self, width: int) -> str:
        return "I=" + "".join(map(str, self.inputs)) + " w=" + self.weight_bits(width)


@dataclass(frozen=True)
class SolutionSet:
    spec: ProblemSpec
    joint: bool
    assignments: tuple[Assignment, ...]

    def __len__(self) -> int:
        return len(self.assignments)

    def __iter__(self):
        return iter(self.assignments)

    def weights(self) -> set[tuple[int, ...]]:
        return {a.weights for a in self.assignments}


def enumerate_solutions(spec: ProblemSpec, inputs: Sequence[int] | None = None) -> SolutionSet:
    """Every satisfying assignment; ``inputs=None`` searches inputs and weights jointly."""
    if inputs is None:
        input_space = list(itertools.product((0, 1), repeat=spec.n_inputs))
    else:
        input_space = [check_inputs(spec, inputs)]
    found = [
        Assignment(i, w)
        for i in input_space
        for w in itertools.product(range(spec.max_weight + 1), repeat=spec.n_inputs)
        if satisfies(spec, i, w)
    ]
    return SolutionSet(spec, inputs is None, tuple(sorted(found)))
