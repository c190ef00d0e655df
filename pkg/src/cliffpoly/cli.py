"""Command-line front end.

stdout carries data (``key=value`` lines, floats at 17 significant digits),
stderr carries diagnostics. Exit codes: 0 success, 1 usage or input error,
2 mathematical infeasibility, 3 verification failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bloch, circuit, polytope, shares, sim, threshold

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


class Emitter:
    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout

    def record(self, *pairs: tuple[str, object], tag: str | None = None) -> None:
        if self.fmt == "lines":
            body = " ".join(f"{k}={_fmt(v)}" for k, v in pairs)
            print(f"{tag} {body}" if tag else body, file=self.out)
        else:
            body = ", ".join(f"{k}: {_fmt(v)}" for k, v in pairs)
            print(f"{tag}: {body}" if tag else body, file=self.out)

    def raw(self, line: str) -> None:
        print(line, file=self.out)


def _noise(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"noise must lie in [0, 1], got {p}")
    return p


def _gate_rotation(spec: str) -> np.ndarray:
    try:
        return bloch.unitary_to_rotation(bloch.gate_unitary(spec))
    except bloch.GateSpecError as exc:
        raise UsageError(str(exc)) from None


def _load_circuit(path: str) -> circuit.Circuit:
    try:
        return circuit.parse(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except (circuit.CctSyntaxError, circuit.CctSemanticError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_threshold(args, out: Emitter) -> int:
    nb = threshold.noise_bounds()
    out.record(("theta_hat", nb.theta_hat))
    out.record(("max_inner_B1", threshold.so3_max_inner(polytope.B1).value))
    out.record(("max_inner_B2", threshold.so3_max_inner(polytope.B2).value))
    out.record(("worst_case_lower", nb.worst_case_lower))
    out.record(("worst_case_upper", nb.worst_case_upper))
    out.record(("pi8_worst_case_reported", nb.pi8_worst_case_reported))
    return EXIT_OK


def cmd_decompose(args, out: Emitter) -> int:
    r = _gate_rotation(args.gate)
    verdict = polytope.membership((1.0 - args.noise) * r, tol=args.tolerance)
    if isinstance(verdict, polytope.Outside):
        out.record(("id", verdict.violated.id), ("value", verdict.value), tag="violated_facet")
        print(f"gate {args.gate} is not a Clifford mixture at noise {args.noise}", file=sys.stderr)
        return EXIT_INFEASIBLE
    for k, w in verdict.mix.support():
        out.record(("id", k), ("w", w), tag="mix")
    return EXIT_OK


def cmd_pmin(args, out: Emitter) -> int:
    out.record(("p_min", polytope.min_noise(_gate_rotation(args.gate))))
    return EXIT_OK


def cmd_facets(args, out: Emitter) -> int:
    if args.facet_file:
        try:
            facets = polytope.parse_facet_lines(Path(args.facet_file).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {args.facet_file}: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"{args.facet_file}: {exc}") from None
    else:
        facets = list(polytope.facet_family())
    counts = {tag: sum(f.class_tag == tag for f in facets) for tag in polytope.CLASS_ORDER}
    out.record(("count", len(facets)), *((f"count_{t}", n) for t, n in counts.items()))
    if not args.verify:
        for f in facets:
            out.record(("id", f.id), ("class", f.class_tag), ("rows", ",".join(map(str, f.key))), tag="facet")
        return EXIT_OK
    report = polytope.verify_facets(facets, n_probe=args.probes, seed=args.seed)
    for name, passed in report.checks.items():
        out.record((f"check_{name}", "pass" if passed else "fail"))
    for msg in report.failures:
        print(msg, file=sys.stderr)
    out.record(("verified", "yes" if report.ok else "no"))
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_parity(args, out: Emitter) -> int:
    c = _load_circuit(args.file)
    try:
        form = shares.extract_parity(c)
    except sim.NonCliffordGate as exc:
        raise UsageError(str(exc)) from None
    if form is shares.BALANCED:
        out.raw("balanced")
    else:
        out.record(("c", form.constant), ("support", ",".join(map(str, sorted(form.support)))))
    return EXIT_OK


def cmd_simulate(args, out: Emitter) -> int:
    c = _load_circuit(args.file)
    if args.input is None:
        bits = [0] * c.width
    else:
        try:
            bits = sim.parse_bits(args.input, c.width)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    mask = (1 << c.width) - 1 if args.partition is None else args.partition
    if not 0 <= mask < (1 << c.width):
        raise UsageError(f"partition mask {mask} does not fit {c.width} inputs")
    try:
        if args.samples is not None:
            if args.samples < 1:
                raise UsageError("--samples must be positive")
            freq = shares.sample_protocol(c, bits, mask, args.samples, seed=args.seed)
            out.record(("frequency", freq), ("samples", args.samples))
            if c.width <= sim.MAX_DENSE_QUBITS:
                out.record(("p_one", sim.dm_run(c, bits)))
            return EXIT_OK
        if args.two_party:
            res = shares.run_protocol(c, bits, mask, seed=args.seed, trace=args.trace)
            for line in res.trace:
                out.raw(line)
            out.record(("output", res.output), ("comm_bits", res.comm_bits))
            return EXIT_OK
        out.record(("p_one", sim.dm_run(c, bits)))
        return EXIT_OK
    except sim.TooWide as exc:
        raise UsageError(str(exc)) from None
    except polytope.NotRepresentable as exc:
        out.record(("id", exc.facet.id), ("value", exc.value), tag="violated_facet")
        return EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--format", choices=("text", "lines"), default="lines")

    parser = _Parser(prog="cliffpoly", description="Clifford-polytope noise threshold tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("threshold", parents=[common], help="threshold value and noise bounds")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("decompose", parents=[common], help="Clifford mixture of a noisy gate")
    p.add_argument("--gate", required=True)
    p.add_argument("--noise", required=True, type=_noise)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pmin", parents=[common], help="minimal depolarizing noise for a gate")
    p.add_argument("--gate", required=True)
    p.set_defaults(func=cmd_pmin)

    p = sub.add_parser("facets", parents=[common], help="list or certify the facet family")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--facet-file", help="read facets from a file instead of generating them")
    p.add_argument("--probes", type=int, default=10_000, help="Haar probes for the completeness check")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("parity", parents=[common], help="parity form of a Clifford circuit")
    p.add_argument("file")
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("simulate", parents=[common], help="run a circuit")
    p.add_argument("file")
    p.add_argument("--input", help="input bit string, qubit 0 first (default all zeros)")
    p.add_argument("--two-party", action="store_true")
    p.add_argument("--partition", type=int, help="bit i set: input i belongs to Alice (default all)")
    p.add_argument("--samples", type=int, help="Monte-Carlo runs of the share protocol")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Emitter(args.format)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"cliffpoly: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
