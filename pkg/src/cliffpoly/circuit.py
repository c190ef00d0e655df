"""Circuit IR and the line-oriented ``.cct`` text format.

Format, one directive per line (``#`` starts a comment, blank lines ignored)::

    qubits <n>
    h|s|x|y|z <q>
    cnot <control> <target>
    noisy1q <q> <gate-spec> <p>
    perfect1q <q> <gate-spec>
    measure <q>

Qubits are 0-based. ``qubits`` must precede every gate and ``measure`` must be
the last directive and appear exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bloch

CLIFFORD_KINDS = ("h", "s", "x", "y", "z", "cnot")
ONE_QUBIT = ("h", "s", "x", "y", "z")


class CctSyntaxError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class CctSemanticError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    spec: str | None = None
    p: float | None = None

    @property
    def is_clifford(self) -> bool:
        return self.kind in CLIFFORD_KINDS

    @property
    def unitary(self) -> np.ndarray:
        if self.spec is not None:
            return bloch.gate_unitary(self.spec)
        if self.kind in ONE_QUBIT:
            return bloch.NAMED_GATES[self.kind].copy()
        raise ValueError(f"{self.kind} has no one-qubit unitary")

    def to_line(self) -> str:
        qs = " ".join(str(q) for q in self.qubits)
        if self.kind == "noisy1q":
            return f"noisy1q {qs} {self.spec} {format(self.p, '.17g')}"
        if self.kind == "perfect1q":
            return f"perfect1q {qs} {self.spec}"
        return f"{self.kind} {qs}"


def _spec_of(u) -> str:
    if isinstance(u, str):
        return bloch.canonical_gate_spec(u)
    return bloch.unitary_to_spec(bloch.check_unitary(u))


def H(q: int) -> Gate:
    return Gate("h", (q,))


def S(q: int) -> Gate:
    return Gate("s", (q,))


def X(q: int) -> Gate:
    return Gate("x", (q,))


def Y(q: int) -> Gate:
    return Gate("y", (q,))


def Z(q: int) -> Gate:
    return Gate("z", (q,))


def CNOT(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def Noisy1Q(q: int, u, p: float) -> Gate:
    """``u`` is a gate spec string or a 2x2 unitary."""
    return Gate("noisy1q", (q,), _spec_of(u), float(p))


def Perfect1Q(q: int, u) -> Gate:
    return Gate("perfect1q", (q,), _spec_of(u))


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...]
    output_qubit: int

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.width < 1:
            raise CctSemanticError("a circuit needs at least one qubit")
        if not 0 <= self.output_qubit < self.width:
            raise CctSemanticError(f"measured qubit {self.output_qubit} out of range")
        for g in self.gates:
            _check_gate(g, self.width)

    @property
    def is_clifford(self) -> bool:
        return all(g.is_clifford for g in self.gates)


def _check_gate(g: Gate, width: int) -> None:
    if any(not 0 <= q < width for q in g.qubits):
        raise CctSemanticError(f"{g.kind} on qubits {g.qubits} but width is {width}")
    if g.kind == "cnot" and g.qubits[0] == g.qubits[1]:
        raise CctSemanticError("cnot control equals target")
    if g.kind == "noisy1q" and not (0.0 <= g.p <= 1.0):
        raise CctSemanticError(f"noise level {g.p} outside [0, 1]")


_ARITY = {"h": 1, "s": 1, "x": 1, "y": 1, "z": 1, "cnot": 2, "measure": 1}


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CctSyntaxError(lineno, f"expected an integer, got {tok!r}") from None


def parse(text: str) -> Circuit:
    width = None
    gates = []
    output = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        op, args = toks[0].lower(), toks[1:]
        if output is not None:
            raise CctSemanticError(f"line {lineno}: directive after measure")
        if op == "qubits":
            if len(args) != 1:
                raise CctSyntaxError(lineno, "qubits takes one argument")
            if width is not None:
                raise CctSemanticError(f"line {lineno}: repeated qubits directive")
            width = _int(args[0], lineno)
            if width < 1:
                raise CctSemanticError(f"line {lineno}: qubit count must be positive")
            continue
        if op in _ARITY:
            if len(args) != _ARITY[op]:
                raise CctSyntaxError(lineno, f"{op} takes {_ARITY[op]} qubit index(es)")
            qs = tuple(_int(a, lineno) for a in args)
            gate = None if op == "measure" else Gate(op, qs)
        elif op == "noisy1q":
            if len(args) != 3:
                raise CctSyntaxError(lineno, "noisy1q takes <q> <gate-spec> <p>")
            try:
                spec = bloch.canonical_gate_spec(args[1])
                p = float(args[2])
            except ValueError as exc:
                raise CctSyntaxError(lineno, str(exc)) from None
            gate = Gate("noisy1q", (_int(args[0], lineno),), spec, p)
        elif op == "perfect1q":
            if len(args) != 2:
                raise CctSyntaxError(lineno, "perfect1q takes <q> <gate-spec>")
            try:
                spec = bloch.canonical_gate_spec(args[1])
            except ValueError as exc:
                raise CctSyntaxError(lineno, str(exc)) from None
            gate = Gate("perfect1q", (_int(args[0], lineno),), spec)
        else:
            raise CctSyntaxError(lineno, f"unknown directive {op!r}")

        if width is None:
            raise CctSemanticError(f"line {lineno}: {op} before the qubits directive")
        if gate is None:
            if not 0 <= qs[0] < width:
                raise CctSemanticError(f"line {lineno}: measured qubit {qs[0]} out of range")
            output = qs[0]
            continue
        try:
            _check_gate(gate, width)
        except CctSemanticError as exc:
            raise CctSemanticError(f"line {lineno}: {exc}") from None
        gates.append(gate)

    if width is None:
        raise CctSemanticError("missing qubits directive")
    if output is None:
        raise CctSemanticError("missing measure directive")
    return Circuit(width, tuple(gates), output)


def serialize(c: Circuit) -> str:
    lines = [f"qubits {c.width}"]
    lines += [g.to_line() for g in c.gates]
    lines.append(f"measure {c.output_qubit}")
    return "\n".join(lines) + "\n"


def random_clifford_circuit(width: int, depth: int, seed) -> Circuit:
    """``depth`` gates drawn uniformly from {H, S, X, Y, Z, CNOT} on uniform valid qubits."""
    if width < 1:
        raise ValueError("width must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    kinds = CLIFFORD_KINDS if width > 1 else ONE_QUBIT
    gates = []
    for _ in range(depth):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "cnot":
            c = int(rng.integers(width))
            t = int(rng.integers(width - 1))
            t += t >= c
            gates.append(Gate("cnot", (c, t)))
        else:
            gates.append(Gate(kind, (int(rng.integers(width)),)))
    return Circuit(width, tuple(gates), int(rng.integers(width)))


def insert_gates(c: Circuit, extra: list[Gate], rng: np.random.Generator) -> Circuit:
    """Insert each gate of ``extra`` at a uniformly random position, in order."""
    gates = list(c.gates)
    for g in extra:
        gates.insert(int(rng.integers(len(gates) + 1)), g)
    return Circuit(c.width, tuple(gates), c.output_qubit)
