"""Command-line entry point: ``qperceptron --ac 3 --mode weights --inputs 1,1``."""

from __future__ import annotations

import argparse
import sys

from .grover import AUTO
from .report import FORMATS, MODES, Config, dump_circuit, emit, execute
from .statevector import SizeError

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _bits(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts or any(p not in ("0", "1") for p in parts):
        raise argparse.ArgumentTypeError(f"expected comma-separated 0/1 bits, got {text!r}")
    return tuple(int(p) for p in parts)


def _iterations(text: str):
    if text.lower() == AUTO:
        return AUTO
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {text!r}") from None
    if k < 0:
        raise argparse.ArgumentTypeError("iterations must be >= 0")
    return k


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="qperceptron",
        description="Grover search for perceptron weights on an exact state-vector simulator.",
    )
    p.add_argument("--ac", type=int, required=True, help="activation threshold")
    p.add_argument("--n-inputs", type=int, default=2)
    p.add_argument("--weight-bits", type=int, default=2)
    p.add_argument("--predicate", choices=("equal", "geq"), default="equal")
    p.add_argument("--mode", choices=MODES, default="weights")
    p.add_argument("--inputs", type=_bits, help="fixed input bits, e.g. 1,0 (weights mode; optional for tune)")
    p.add_argument("--iterations", type=_iterations, default=AUTO, help="'auto' or a count")
    p.add_argument("--max-k", type=int, help="largest iteration count tried in tune mode")
    p.add_argument("--shots", type=int, default=0, help="0 reports the exact distribution")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--dump-circuit", action="store_true", help="print the gate list instead of a report")
    return p


def parse_config(argv=None) -> Config:
    args = build_parser().parse_args(argv)
    if args.mode == "weights" and args.inputs is None:
        raise UsageError("--inputs is required in weights mode")
    try:
        return Config(
            ac=args.ac,
            n_inputs=args.n_inputs,
            weight_bits=args.weight_bits,
            predicate=args.predicate,
            mode=args.mode,
            inputs=args.inputs,
            iterations=args.iterations,
            max_k=args.max_k,
            shots=args.shots,
            seed=args.seed,
            format=args.format,
            dump_circuit=args.dump_circuit,
        )
    except SizeError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"qperceptron: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeError as exc:
        print(f"qperceptron: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        if config.dump_circuit:
            out = dump_circuit(config)
        else:
            out = emit(execute(config))
    except (SizeError, MemoryError) as exc:
        print(f"qperceptron: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001
        print(f"qperceptron: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
