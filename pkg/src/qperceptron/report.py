"""Run configuration, report assembly and rendering shared by the CLI and the HTTP service."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Any

from .grover import (
    AUTO,
    GroverPlan,
    RunResult,
    build_circuit,
    grover_iterations,
    run_joint_search,
    run_weight_search,
    simulate,
    split_outcome,
    tune_iterations,
    weight_marginal,
)
from .perceptron import Predicate, ProblemSpec, check_inputs, neuron_input, satisfies
from .qarith import GateSequence, allocate_layout
from .statevector import MAX_QUBITS, Histogram, SizeError, sample

MODES = ("weights", "joint", "tune")
FORMATS = ("text", "csv", "json")


@dataclass
class Config:
    ac: int
    n_inputs: int = 2
    weight_bits: int = 2
    predicate: str = "equal"
    mode: str = "weights"
    inputs: tuple[int, ...] | None = None
    iterations: int | str = AUTO
    max_k: int | None = None
    shots: int = 0
    seed: int = 0
    format: str = "text"
    dump_circuit: bool = False

    def __post_init__(self):
        self.predicate = Predicate(str(self.predicate).lower()).value
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.inputs is not None:
            self.inputs = tuple(int(b) for b in self.inputs)
        if self.mode == "weights" and self.inputs is None:
            raise ValueError("weights mode requires inputs")
        if self.iterations != AUTO:
            self.iterations = int(self.iterations)
            if self.iterations < 0:
                raise ValueError("iterations must be >= 0 or 'auto'")
        if self.shots < 0:
            raise ValueError("shots must be >= 0")
        if self.max_k is not None and self.max_k < 1:
            raise ValueError("max_k must be >= 1")
        spec = self.spec()
        if self.inputs is not None:
            check_inputs(spec, self.inputs)
        n = allocate_layout(spec).n_qubits
        if n > MAX_QUBITS:
            raise SizeError(
                f"this problem needs {n} qubits but the simulator is capped at {MAX_QUBITS}; "
                "reduce --n-inputs or --weight-bits"
            )

    def spec(self) -> ProblemSpec:
        return ProblemSpec(self.ac, self.n_inputs, self.weight_bits, Predicate(self.predicate))

    @property
    def search_inputs(self) -> tuple[int, ...] | None:
        """Fixed input bits, or None when inputs are part of the search."""
        if self.mode == "joint":
            return None
        return self.inputs

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["inputs"] = list(self.inputs) if self.inputs is not None else None
        return d


@dataclass
class Entry:
    bits: dict[str, str]
    values: dict[str, int]
    inputs: tuple[int, ...]
    h_input: int
    prob: float
    verified: bool


@dataclass
class Report:
    config: Config
    plan: GroverPlan
    registers: tuple[str, ...]
    distribution: list[Entry]
    solutions: list[dict[str, Any]]
    no_solutions_detected: bool
    solution_mass: float
    weight_marginal: dict[str, float] | None = None
    counts: dict[str, int] | None = None
    tune: dict[str, Any] | None = None
    result: RunResult | None = field(default=None, repr=False)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "config": self.config.to_dict(),
            "plan": {"n": self.plan.n, "l": self.plan.l, "iterations": self.plan.iterations},
            "registers": list(self.registers),
            "distribution": [
                {
                    "bits": e.bits,
                    "values": e.values,
                    "inputs": list(e.inputs),
                    "h_input": e.h_input,
                    "prob": e.prob,
                    "verified": e.verified,
                }
                for e in self.distribution
            ],
            "solutions": self.solutions,
            "solution_mass": self.solution_mass,
            "no_solutions_detected": self.no_solutions_detected,
        }
        if self.weight_marginal is not None:
            out["weight_marginal"] = self.weight_marginal
        if self.counts is not None:
            out["counts"] = self.counts
        if self.tune is not None:
            out["tune"] = self.tune
        return out


def _entries(spec: ProblemSpec, hist: Histogram, inputs) -> list[Entry]:
    rows = []
    for key, p in hist.items():
        i, w = split_outcome(spec, hist, key, inputs)
        h = neuron_input(i, w)
        rows.append(Entry(hist.split(key), hist.values(key), i, h, p, satisfies(spec, i, w)))
    return rows


def _run(config: Config) -> tuple[RunResult, dict[str, Any] | None]:
    spec = config.spec()
    if config.mode == "weights":
        return run_weight_search(spec, config.inputs, config.iterations), None
    if config.mode == "joint":
        return run_joint_search(spec, config.iterations), None
    inputs = config.inputs
    n = spec.n_inputs * spec.weight_bits + (spec.n_inputs if inputs is None else 0)
    max_k = config.max_k or grover_iterations(n, 1)
    tuned = tune_iterations(spec, inputs, max_k)
    if inputs is None:
        result = run_joint_search(spec, tuned.best_k)
    else:
        result = run_weight_search(spec, inputs, tuned.best_k)
    tune = {
        "max_k": max_k,
        "best_k": tuned.best_k,
        "hit_rate": tuned.hit_rate,
        "masses": {str(k): m for k, m in tuned.masses.items()},
        "no_solutions_detected": tuned.no_solutions_detected,
    }
    return result, tune


def execute(config: Config) -> Report:
    result, tune = _run(config)
    spec = config.spec()
    hist = result.search_marginal
    solutions = [
        {
            "inputs": list(a.inputs),
            "weights": list(a.weights),
            "bits": a.weight_bits(spec.weight_bits),
        }
        for a in result.verified_solutions
    ]
    report = Report(
        config=config,
        plan=result.plan,
        registers=hist.names,
        distribution=_entries(spec, hist, result.inputs),
        solutions=solutions,
        no_solutions_detected=result.no_solutions_detected,
        solution_mass=result.solution_mass,
        tune=tune,
        result=result,
    )
    if result.joint:
        report.weight_marginal = weight_marginal(result).entries
    if config.shots:
        report.counts = sample(hist, config.shots, config.seed)
    return report


def dump_circuit(config: Config) -> str:
    """Gate list for the circuit ``execute`` would simulate for ``config``."""
    if config.mode == "tune" or config.iterations == AUTO:
        k = execute(config).plan.iterations
    else:
        k = config.iterations
    return build_circuit(config.spec(), config.search_inputs, k).to_text()


def replay(text: str) -> Histogram:
    """Search-register distribution of a dumped gate list."""
    return simulate(GateSequence.from_text(text))[1]


def _fmt(p: float) -> str:
    return f"{p:.6f}"


def emit(report: Report, fmt: str | None = None) -> str:
    fmt = fmt or report.config.format
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        return _emit_csv(report)
    return _emit_text(report)


def _emit_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*report.registers, "value", "probability", "verified"])
    for e in report.distribution:
        writer.writerow([*(e.bits[r] for r in report.registers), e.h_input, _fmt(e.prob), int(e.verified)])
    return buf.getvalue()


def _emit_text(report: Report) -> str:
    cfg = report.config
    spec = cfg.spec()
    wnames = [r for r in report.registers if r != "I"]
    ac_bits = format(spec.ac, f"0{spec.sum_bits}b")
    header = [*wnames, *(f"I{k + 1}" for k in range(spec.n_inputs)), "Ac", "prob", "verified"]
    rows = []
    for e in report.distribution:
        rows.append(
            [*(e.bits[w] for w in wnames), *map(str, e.inputs), ac_bits, _fmt(e.prob), "yes" if e.verified else ""]
        )
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = [
        f"mode={cfg.mode} predicate={cfg.predicate} Ac={spec.ac} ({ac_bits})",
        f"plan: n={report.plan.n} l={report.plan.l} iterations={report.plan.iterations}",
    ]
    if report.tune:
        lines.append(
            f"tune: best_k={report.tune['best_k']} hit_rate={_fmt(report.tune['hit_rate'])} "
            f"(k=1..{report.tune['max_k']})"
        )
    lines.append("")
    lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    lines.append("")
    lines.append(f"verified solution mass: {_fmt(report.solution_mass)}")
    if report.no_solutions_detected:
        lines.append("no solutions detected")
    else:
        lines.append("solutions: " + ", ".join(_solution_label(s, cfg) for s in report.solutions))
    if report.weight_marginal is not None:
        lines.append("")
        lines.append("weight marginal (" + " ".join(wnames) + "):")
        ranked = sorted(report.weight_marginal.items(), key=lambda kv: (-round(kv[1], 12), kv[0]))
        for key, p in ranked:
            lines.append(f"  {key}  {_fmt(p)}")
    if report.counts is not None:
        lines.append("")
        lines.append(f"sampled counts ({cfg.shots} shots, seed {cfg.seed}):")
        for key, c in report.counts.items():
            lines.append(f"  {key}  {c}")
    return "\n".join(lines) + "\n"


def _solution_label(sol: dict[str, Any], cfg: Config) -> str:
    if cfg.search_inputs is None:
        return "I=" + "".join(map(str, sol["inputs"])) + " w=" + sol["bits"]
    return sol["bits"]
