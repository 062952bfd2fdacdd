"""Reversible arithmetic and the perceptron phase oracle.

The oracle adds each weight into a sum register under control of its input
qubit, flips the phase of states whose sum satisfies the activation rule, and
then runs the adders backwards so the sum and carry ancillas end at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .perceptron import Predicate, ProblemSpec
from .statevector import (
    Gate,
    LayoutError,
    MCX,
    MCZ,
    QubitLayout,
    X,
)


@dataclass
class GateSequence:
    layout: QubitLayout
    gates: list[Gate] = field(default_factory=list)
    search: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.layout.n_qubits
        for g in self.gates:
            g.check(n)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "GateSequence") -> "GateSequence":
        if other.layout.registers != self.layout.registers:
            raise LayoutError("cannot concatenate sequences over different layouts")
        return GateSequence(self.layout, self.gates + other.gates, self.search or other.search)

    def inverse(self) -> "GateSequence":
        # every gate in the set is self-inverse
        return GateSequence(self.layout, self.gates[::-1], self.search)

    def to_text(self) -> str:
        lines = [self.layout.header()]
        if self.search:
            lines.append("# search: " + " ".join(self.search))
        lines.extend(format_gate(g) for g in self.gates)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GateSequence":
        layout, search, gates = None, (), []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("# layout:"):
                layout = QubitLayout.from_header(line)
            elif line.startswith("# search:"):
                search = tuple(line[len("# search:"):].split())
            elif line.startswith("#"):
                continue
            else:
                try:
                    gates.append(parse_gate(line))
                except (ValueError, IndexError) as exc:
                    raise ValueError(f"line {lineno}: {exc}") from None
        if layout is None:
            raise LayoutError("gate list has no '# layout:' header")
        return cls(layout, gates, search)


def format_gate(g: Gate) -> str:
    if g.kind in ("H", "X", "Z"):
        return f"{g.kind} {g.target}"
    if g.kind == "MCX":
        return "MCX " + " ".join(map(str, g.controls)) + (" " if g.controls else "") + f"-> {g.target}"
    return "MCZ " + " ".join(map(str, g.qubits))


def parse_gate(line: str) -> Gate:
    kind, *rest = line.split()
    if kind in ("H", "X", "Z"):
        if len(rest) != 1:
            raise ValueError(f"{kind} takes one qubit: {line!r}")
        return Gate(kind, int(rest[0]))
    if kind == "MCX":
        if "->" not in rest or rest.index("->") != len(rest) - 2:
            raise ValueError(f"MCX needs '-> <target>': {line!r}")
        return MCX([int(q) for q in rest[:-2]], int(rest[-1]))
    if kind == "MCZ":
        return MCZ([int(q) for q in rest])
    raise ValueError(f"unknown gate {kind!r}")


def weight_names(spec: ProblemSpec) -> tuple[str, ...]:
    return tuple(f"w{k + 1}" for k in range(spec.n_inputs))


def allocate_layout(spec: ProblemSpec, joint: bool = False) -> QubitLayout:
    """Registers ``I``, ``w1..wn``, ``sum`` and ``carry`` (omitted when one sum bit needs no carries).

    The layout is the same in both modes; ``joint`` only changes which
    registers form the search register (see :func:`search_registers`).
    """
    widths = [("I", spec.n_inputs)]
    widths += [(name, spec.weight_bits) for name in weight_names(spec)]
    widths += [("sum", spec.sum_bits), ("carry", spec.sum_bits - 1)]
    return QubitLayout.from_widths(widths)


def search_registers(spec: ProblemSpec, joint: bool) -> tuple[str, ...]:
    return (("I",) if joint else ()) + weight_names(spec)


def _check_disjoint(*groups: Sequence[int]) -> None:
    flat = [q for g in groups for q in g]
    if len(flat) != len(set(flat)):
        raise LayoutError("adder registers overlap")


def build_controlled_adder(
    layout: QubitLayout,
    control: int,
    src: Sequence[int],
    acc: Sequence[int],
    carry: Sequence[int] = (),
) -> GateSequence:
    """``acc += src`` when ``control`` is 1, as a carry-ancilla ripple adder.

    ``carry[i]`` holds the carry into ``acc[i + 1]``; ``len(carry)`` must be
    ``len(acc) - 1`` and ``src`` may be narrower than ``acc``.  The carry-out
    of the top bit is dropped, so the caller sizes ``acc`` against overflow.
    Every gate carries ``control`` as an extra control.
    """
    src, acc, carry = list(src), list(acc), list(carry)
    s = len(acc)
    if len(src) > s:
        raise LayoutError("source register wider than accumulator")
    if len(carry) != s - 1:
        raise LayoutError(f"accumulator of {s} bits needs {s - 1} carry qubits, got {len(carry)}")
    _check_disjoint([control], src, acc, carry)
    n = layout.n_qubits
    for q in [control, *src, *acc, *carry]:
        if not 0 <= q < n:
            raise LayoutError(f"qubit {q} not in layout")

    def a(i):
        return src[i] if i < len(src) else None

    def c(i):
        return carry[i - 1] if i >= 1 else None

    gates: list[Gate] = []

    def cx(ctrls, target):
        if any(q is None for q in ctrls):
            return  # a constant-zero control makes the gate a no-op
        gates.append(MCX([control, *ctrls], target))

    def carry_block(i):
        cx([a(i), acc[i]], c(i + 1))
        cx([a(i)], acc[i])
        cx([c(i), acc[i]], c(i + 1))

    def carry_block_inv(i):
        cx([c(i), acc[i]], c(i + 1))
        cx([a(i)], acc[i])
        cx([a(i), acc[i]], c(i + 1))

    def sum_block(i):
        cx([a(i)], acc[i])
        cx([c(i)], acc[i])

    for i in range(s - 1):
        carry_block(i)
    sum_block(s - 1)
    for i in reversed(range(s - 1)):
        carry_block_inv(i)
        sum_block(i)
    return GateSequence(layout, gates)


def _check_ac(acc: Sequence[int], ac: int) -> None:
    if not 0 <= ac < 1 << len(acc):
        raise ValueError(f"ac={ac} out of range for a {len(acc)}-bit register")


def _flip_value(acc: Sequence[int], value: int) -> list[Gate]:
    zeros = [X(q) for i, q in enumerate(acc) if not value >> i & 1]
    return zeros + [MCZ(acc)] + zeros


def build_equality_comparator(layout: QubitLayout, acc: Sequence[int], ac: int) -> GateSequence:
    """Phase -1 on basis states with ``acc == ac``."""
    _check_ac(acc, ac)
    return GateSequence(layout, _flip_value(acc, ac))


def build_geq_comparator(layout: QubitLayout, acc: Sequence[int], ac: int) -> GateSequence:
    """Phase -1 on basis states with ``acc >= ac``, one equality flip per qualifying value."""
    _check_ac(acc, ac)
    gates: list[Gate] = []
    for v in range(ac, 1 << len(acc)):
        gates.extend(_flip_value(acc, v))
    return GateSequence(layout, _cancel_adjacent_x(gates))


def _cancel_adjacent_x(gates: Iterable[Gate]) -> list[Gate]:
    out: list[Gate] = []
    for g in gates:
        if g.kind == "X" and out and out[-1] == g:
            out.pop()
        else:
            out.append(g)
    return out


def build_perceptron_oracle(spec: ProblemSpec, layout: QubitLayout) -> GateSequence:
    inputs = layout["I"]
    acc = layout["sum"]
    carry = layout["carry"] if "carry" in layout else ()
    adders = GateSequence(layout)
    for k, name in enumerate(weight_names(spec)):
        adders = adders + build_controlled_adder(layout, inputs[k], layout[name], acc, carry)
    if spec.predicate is Predicate.EQUAL:
        compare = build_equality_comparator(layout, acc, spec.ac)
    else:
        compare = build_geq_comparator(layout, acc, spec.ac)
    return adders + compare + adders.inverse()
