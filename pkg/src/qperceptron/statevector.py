"""Dense state-vector simulator.

Qubit 0 is the least-significant bit of a basis-state index.  Registers in a
:class:`QubitLayout` are contiguous qubit ranges whose first qubit is the
register's least-significant bit; histogram keys render each register
most-significant bit first, registers separated by spaces in layout order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_QUBITS = 24
OMIT_BELOW = 1e-12

GATE_KINDS = ("H", "X", "Z", "MCX", "MCZ")

_SQRT1_2 = 1.0 / np.sqrt(2.0)


class SizeError(ValueError):
    """Requested register is outside the simulator's qubit cap."""


class QubitIndexError(IndexError):
    """Gate addresses a missing qubit or repeats one."""


class LayoutError(ValueError):
    """Register layout is inconsistent or a register name is unknown."""


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if self.controls and self.kind in ("H", "X", "Z"):
            raise ValueError(f"{self.kind} takes no controls")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def check(self, n_qubits: int) -> None:
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise QubitIndexError(f"duplicate qubit in {self}")
        for q in qs:
            if not 0 <= q < n_qubits:
                raise QubitIndexError(f"qubit {q} out of range for {n_qubits} qubits")


def H(q: int) -> Gate:
    return Gate("H", q)


def X(q: int) -> Gate:
    return Gate("X", q)


def Z(q: int) -> Gate:
    return Gate("Z", q)


def MCX(controls: Iterable[int], target: int) -> Gate:
    return Gate("MCX", target, tuple(controls))


def MCZ(qubits: Sequence[int]) -> Gate:
    """Phase flip on states where every listed qubit is 1; the last one is the nominal target."""
    qubits = tuple(qubits)
    if not qubits:
        raise ValueError("MCZ needs at least one qubit")
    return Gate("MCZ", qubits[-1], qubits[:-1])


@dataclass
class QubitLayout:
    """Named, contiguous, disjoint qubit registers in allocation order."""

    registers: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.registers = {name: tuple(qs) for name, qs in self.registers.items()}
        seen: list[int] = []
        for name, qs in self.registers.items():
            if not qs:
                raise LayoutError(f"register {name!r} is empty")
            if list(qs) != list(range(qs[0], qs[0] + len(qs))):
                raise LayoutError(f"register {name!r} is not contiguous")
            seen.extend(qs)
        if sorted(seen) != list(range(len(seen))):
            raise LayoutError("registers must be disjoint and cover qubits 0..n-1")

    @classmethod
    def from_widths(cls, widths: Iterable[tuple[str, int]]) -> "QubitLayout":
        regs, start = {}, 0
        for name, width in widths:
            if width <= 0:
                continue
            regs[name] = tuple(range(start, start + width))
            start += width
        return cls(regs)

    @property
    def n_qubits(self) -> int:
        return sum(len(qs) for qs in self.registers.values())

    def __getitem__(self, name: str) -> tuple[int, ...]:
        try:
            return self.registers[name]
        except KeyError:
            raise LayoutError(f"unknown register {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.registers

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.registers)

    def qubits(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(q for name in names for q in self[name])

    def widths(self) -> tuple[tuple[str, int], ...]:
        return tuple((name, len(qs)) for name, qs in self.registers.items())

    def header(self) -> str:
        parts = [f"{name}=[{','.join(map(str, qs))}]" for name, qs in self.registers.items()]
        return "# layout: " + " ".join(parts)

    @classmethod
    def from_header(cls, line: str) -> "QubitLayout":
        body = line.strip()
        if not body.startswith("# layout:"):
            raise LayoutError(f"not a layout header: {line!r}")
        regs = {}
        for part in body[len("# layout:"):].split():
            name, _, rng = part.partition("=")
            if not rng.startswith("[") or not rng.endswith("]"):
                raise LayoutError(f"bad register entry {part!r}")
            regs[name] = tuple(int(q) for q in rng[1:-1].split(",") if q)
        return cls(regs)


class StateVector:
    """2**n complex amplitudes; gates are applied in place by :meth:`apply`."""

    def __init__(self, amplitudes: Sequence[complex] | np.ndarray):
        amps = np.array(amplitudes, dtype=np.complex128)
        n = int(amps.size).bit_length() - 1
        if amps.ndim != 1 or amps.size != 1 << n or n < 1:
            raise SizeError(f"amplitude count {amps.size} is not 2**n with n >= 1")
        if n > MAX_QUBITS:
            raise SizeError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit cap")
        self.n_qubits = n
        self.amplitudes = amps

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def apply(self, gate: Gate) -> "StateVector":
        gate.check(self.n_qubits)
        amp = self.amplitudes
        n = self.n_qubits
        if gate.kind == "H":
            lo = _pair_indices(n, 0, 1 << gate.target)
            hi = lo | (1 << gate.target)
            a, b = amp[lo], amp[hi]
            amp[lo] = (a + b) * _SQRT1_2
            amp[hi] = (a - b) * _SQRT1_2
        elif gate.kind in ("X", "MCX"):
            lo = _pair_indices(n, _mask(gate.controls), 1 << gate.target)
            hi = lo | (1 << gate.target)
            amp[lo], amp[hi] = amp[hi], amp[lo].copy()
        else:
            amp[_set_indices(n, _mask(gate.qubits))] *= -1
        return self

    def run(self, gates: Iterable[Gate]) -> "StateVector":
        for g in gates:
            self.apply(g)
        return self


def _mask(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


@lru_cache(maxsize=4096)
def _pair_indices(n: int, control_mask: int, target_bit: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    sel = ((idx & control_mask) == control_mask) & ((idx & target_bit) == 0)
    return idx[sel]


@lru_cache(maxsize=4096)
def _set_indices(n: int, mask: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return idx[(idx & mask) == mask]


def init_state(n_qubits: int) -> StateVector:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise SizeError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps)


def basis_state(n_qubits: int, index: int) -> StateVector:
    state = init_state(n_qubits)
    if not 0 <= index < 1 << n_qubits:
        raise QubitIndexError(f"basis index {index} out of range")
    state.amplitudes[0] = 0.0
    state.amplitudes[index] = 1.0
    return state


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return a new state with ``gate`` applied; ``state`` is left untouched."""
    return state.copy().apply(gate)


@dataclass
class Histogram:
    """Bitstring-keyed probabilities.

    ``registers`` lists ``(name, width)`` in key order, so a key such as
    ``"01 10"`` can be split back into per-register bitstrings.
    """

    registers: tuple[tuple[str, int], ...]
    entries: dict[str, float]

    def __getitem__(self, key: str) -> float:
        return self.entries[key]

    def get(self, key: str, default: float = 0.0) -> float:
        return self.entries.get(key, default)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def total(self) -> float:
        return float(sum(self.entries.values()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    def split(self, key: str) -> dict[str, str]:
        """Per-register bitstrings of ``key``."""
        return dict(zip(self.names, key.split(" ")))

    def values(self, key: str) -> dict[str, int]:
        return {name: int(bits, 2) for name, bits in self.split(key).items()}


def render_key(index: int, registers: Sequence[tuple[str, Sequence[int]]]) -> str:
    return " ".join(
        "".join("1" if index >> q & 1 else "0" for q in reversed(qs)) for _, qs in registers
    )


def probabilities(state: StateVector, layout: QubitLayout | None = None) -> Histogram:
    if layout is None:
        layout = QubitLayout({"q": tuple(range(state.n_qubits))})
    elif layout.n_qubits != state.n_qubits:
        raise LayoutError(f"layout has {layout.n_qubits} qubits, state has {state.n_qubits}")
    probs = np.abs(state.amplitudes) ** 2
    regs = list(layout.registers.items())
    entries = {render_key(int(i), regs): float(probs[i]) for i in np.flatnonzero(probs >= OMIT_BELOW)}
    return Histogram(layout.widths(), entries)


def marginal(hist: Histogram, layout: QubitLayout, registers: Iterable[str]) -> Histogram:
    """Sum out every register not named in ``registers``; kept registers stay in layout order."""
    wanted = set(registers)
    for name in wanted:
        if name not in layout or name not in hist.names:
            raise LayoutError(f"unknown register {name!r}")
    positions = [i for i, name in enumerate(hist.names) if name in wanted]
    positions.sort(key=lambda i: layout.names.index(hist.names[i]))
    out: dict[str, float] = {}
    for key, p in hist.entries.items():
        parts = key.split(" ")
        sub = " ".join(parts[i] for i in positions)
        out[sub] = out.get(sub, 0.0) + p
    regs = tuple(hist.registers[i] for i in positions)
    return Histogram(regs, dict(sorted(out.items())))


def sample(hist: Histogram | Mapping[str, float], shots: int, seed: int) -> dict[str, int]:
    """Multinomial draw of ``shots`` outcomes; the same seed gives the same counts."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    entries = hist.entries if isinstance(hist, Histogram) else dict(hist)
    keys = sorted(entries)
    p = np.array([entries[k] for k in keys], dtype=float)
    p /= p.sum()
    counts = np.random.default_rng(seed).multinomial(shots, p)
    return {k: int(c) for k, c in zip(keys, counts) if c}
