"""Simulation backends: a stabilizer tableau and a dense density matrix.

The tableau follows the destabilizer/stabilizer layout of Aaronson and
Gottesman (rows 0..n-1 destabilizers, n..2n-1 stabilizers, row 2n scratch)
and reports measurement probabilities exactly as 0, 1/2 or 1. The density
matrix is the exact oracle for noisy circuits, capped at 8 qubits.
"""
from __future__ import annotations

import numpy as np

from . import bloch
from .circuit import Circuit, Gate
from .clifford import PauliWord

MAX_DENSE_QUBITS = 8


class NonCliffordGate(ValueError):
    pass


class TooWide(ValueError):
    pass


class Tableau:
    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self.x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.r = np.zeros(2 * n + 1, dtype=np.uint8)
        for i in range(n):
            self.x[i, i] = 1
            self.z[n + i, i] = 1

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n, t.x, t.z, t.r = self.n, self.x.copy(), self.z.copy(), self.r.copy()
        return t

    def _check(self, *qs: int) -> None:
        for q in qs:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for {self.n} qubits")

    def h(self, a: int) -> "Tableau":
        self._check(a)
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()
        return self

    def s(self, a: int) -> "Tableau":
        self._check(a)
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]
        return self

    def x_gate(self, a: int) -> "Tableau":
        self._check(a)
        self.r ^= self.z[:, a]
        return self

    def z_gate(self, a: int) -> "Tableau":
        self._check(a)
        self.r ^= self.x[:, a]
        return self

    def y_gate(self, a: int) -> "Tableau":
        self._check(a)
        self.r ^= self.x[:, a] ^ self.z[:, a]
        return self

    def cnot(self, a: int, b: int) -> "Tableau":
        self._check(a, b)
        if a == b:
            raise ValueError("cnot control equals target")
        xa, xb, za, zb = self.x[:, a], self.x[:, b], self.z[:, a], self.z[:, b]
        self.r ^= xa & zb & (xb ^ za ^ 1)
        self.x[:, b] ^= xa
        self.z[:, a] ^= zb
        return self

    def apply(self, kind: str, qubits) -> "Tableau":
        kind = kind.lower()
        if kind == "cnot":
            return self.cnot(*qubits)
        op = {"h": self.h, "s": self.s, "x": self.x_gate, "y": self.y_gate, "z": self.z_gate}.get(kind)
        if op is None:
            raise NonCliffordGate(f"{kind} is not a tableau gate")
        return op(qubits[0])

    def _rowsum(self, h: int, i: int) -> None:
        x1, z1 = self.x[i].astype(np.int64), self.z[i].astype(np.int64)
        x2, z2 = self.x[h].astype(np.int64), self.z[h].astype(np.int64)
        # Exponent of i picked up when multiplying the Pauli of row i into row h, per qubit.
        g = np.where((x1 == 1) & (z1 == 1), z2 - x2,
            np.where((x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1),
            np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0)))
        total = (2 * int(self.r[h]) + 2 * int(self.r[i]) + int(g.sum())) % 4
        self.r[h] = 1 if total == 2 else 0
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def _deterministic_outcome(self, a: int) -> int:
        n = self.n
        self.x[2 * n] = 0
        self.z[2 * n] = 0
        self.r[2 * n] = 0
        for i in range(n):
            if self.x[i, a]:
                self._rowsum(2 * n, i + n)
        return int(self.r[2 * n])

    def _random_row(self, a: int) -> int | None:
        hits = np.flatnonzero(self.x[self.n:2 * self.n, a])
        return int(hits[0]) + self.n if len(hits) else None

    def prob_one(self, a: int) -> float:
        """Probability of outcome 1 when measuring qubit ``a`` in Z: exactly 0, 0.5 or 1."""
        self._check(a)
        if self._random_row(a) is not None:
            return 0.5
        return float(self._deterministic_outcome(a))

    def measure(self, a: int, rng: np.random.Generator) -> int:
        """Z measurement with collapse. Deterministic outcomes draw no randomness."""
        self._check(a)
        p = self._random_row(a)
        if p is None:
            return self._deterministic_outcome(a)
        n = self.n
        for i in range(2 * n):
            if i != p and self.x[i, a]:
                self._rowsum(i, p)
        self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
        self.x[p] = 0
        self.z[p] = 0
        self.z[p, a] = 1
        bit = int(rng.integers(2))
        self.r[p] = bit
        return bit

    def rows(self, stabilizers: bool = True) -> list[PauliWord]:
        lo = self.n if stabilizers else 0
        out = []
        for i in range(lo, lo + self.n):
            letters = "".join("IZXY"[2 * int(xv) + int(zv)] for xv, zv in zip(self.x[i], self.z[i]))
            out.append(PauliWord(letters, 2 * int(self.r[i])))
        return out

    def check_invariants(self) -> bool:
        """Destabilizer i anticommutes with stabilizer i only; everything else commutes."""
        n = self.n
        x, z = self.x[:2 * n].astype(np.int64), self.z[:2 * n].astype(np.int64)
        sym = (x @ z.T + z @ x.T) % 2
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expected[np.arange(n), np.arange(n) + n] = 1
        expected[np.arange(n) + n, np.arange(n)] = 1
        return bool(np.array_equal(sym, expected))


def tab_apply(t: Tableau, g: Gate) -> Tableau:
    if not g.is_clifford:
        raise NonCliffordGate(f"{g.kind} cannot run on a stabilizer tableau")
    return t.apply(g.kind, g.qubits)


def tab_measure_prob(t: Tableau, q: int) -> float:
    return t.prob_one(q)


def tab_measure(t: Tableau, q: int, rng: np.random.Generator) -> tuple[int, Tableau]:
    return t.measure(q, rng), t


class DensityState:
    """Dense n-qubit density matrix; qubit 0 is the leftmost tensor factor."""

    def __init__(self, n: int, bits=None):
        if n > MAX_DENSE_QUBITS:
            raise TooWide(f"{n} qubits exceeds the dense-oracle cap of {MAX_DENSE_QUBITS}")
        self.n = n
        idx = 0
        for b in bits or [0] * n:
            idx = 2 * idx + int(b)
        self.rho = np.zeros((2 ** n, 2 ** n), dtype=complex)
        self.rho[idx, idx] = 1.0

    def copy(self) -> "DensityState":
        d = DensityState.__new__(DensityState)
        d.n, d.rho = self.n, self.rho.copy()
        return d

    def apply_op(self, op: np.ndarray, qubits) -> "DensityState":
        n, k = self.n, len(qubits)
        qubits = list(qubits)
        if any(not 0 <= q < n for q in qubits):
            raise IndexError(f"qubits {qubits} out of range")
        t = self.rho.reshape([2] * (2 * n))
        op_t = np.asarray(op, dtype=complex).reshape([2] * (2 * k))
        t = np.tensordot(op_t, t, axes=(list(range(k, 2 * k)), qubits))
        t = np.moveaxis(t, list(range(k)), qubits)
        cols = [n + q for q in qubits]
        t = np.tensordot(t, op_t.conj(), axes=(cols, list(range(k, 2 * k))))
        t = np.moveaxis(t, list(range(2 * n - k, 2 * n)), cols)
        self.rho = t.reshape(2 ** n, 2 ** n)
        return self

    def apply_1q(self, u, q: int) -> "DensityState":
        return self.apply_op(u, [q])

    def apply_cnot(self, c: int, t: int) -> "DensityState":
        cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
        return self.apply_op(cnot, [c, t])

    def apply(self, kind: str, qubits) -> "DensityState":
        kind = kind.lower()
        if kind == "cnot":
            return self.apply_cnot(*qubits)
        if kind not in bloch.NAMED_GATES:
            raise NonCliffordGate(f"unknown gate {kind}")
        return self.apply_1q(bloch.NAMED_GATES[kind], qubits[0])

    def depolarize(self, q: int, p: float) -> "DensityState":
        """(1 - p) rho + p/4 (rho + X rho X + Y rho Y + Z rho Z) on qubit q."""
        p = bloch.check_probability(p)
        if p == 0.0:
            return self
        branches = [self.copy().apply_1q(P, q).rho for P in bloch.PAULIS]
        self.rho = (1 - p) * self.rho + (p / 4) * (self.rho + sum(branches))
        return self

    def project(self, proj: np.ndarray) -> float:
        """Apply a full-width projector, renormalize, return the outcome probability."""
        new = proj @ self.rho @ proj.conj().T
        prob = float(np.trace(new).real)
        if prob <= 0:
            raise ValueError("projection onto a zero-probability outcome")
        self.rho = new / prob
        return prob

    def prob_one(self, q: int) -> float:
        diag = np.real(np.diag(self.rho)).reshape([2] * self.n)
        return float(np.take(diag, 1, axis=q).sum())

    def reduced(self, q: int) -> np.ndarray:
        t = self.rho.reshape([2] * (2 * self.n))
        for k in reversed(range(self.n)):
            if k != q:
                t = np.trace(t, axis1=k, axis2=k + t.ndim // 2)
        return t

    def trace(self) -> float:
        return float(np.trace(self.rho).real)


def apply_gate(st: DensityState, g: Gate) -> DensityState:
    if g.kind == "noisy1q":
        st.apply_1q(g.unitary, g.qubits[0])
        return st.depolarize(g.qubits[0], g.p)
    if g.kind == "perfect1q":
        return st.apply_1q(g.unitary, g.qubits[0])
    return st.apply(g.kind, g.qubits)


def parse_bits(bits, width: int) -> list[int]:
    if isinstance(bits, str):
        if any(ch not in "01" for ch in bits):
            raise ValueError(f"input must be a bit string, got {bits!r}")
        bits = [int(ch) for ch in bits]
    bits = [int(b) for b in bits]
    if len(bits) != width or any(b not in (0, 1) for b in bits):
        raise ValueError(f"input needs {width} bits, got {bits}")
    return bits


def dm_run(c: Circuit, inputs) -> float:
    """Exact probability of reading 1 on the output qubit, starting from |inputs>."""
    if c.width > MAX_DENSE_QUBITS:
        raise TooWide(f"{c.width} qubits exceeds the dense-oracle cap of {MAX_DENSE_QUBITS}")
    st = DensityState(c.width, parse_bits(inputs, c.width))
    for g in c.gates:
        apply_gate(st, g)
    return st.prob_one(c.output_qubit)


def tab_run(c: Circuit, inputs) -> float:
    """Clifford-only counterpart of :func:`dm_run` on the tableau."""
    t = Tableau(c.width)
    for q, b in enumerate(parse_bits(inputs, c.width)):
        if b:
            t.x_gate(q)
    for g in c.gates:
        tab_apply(t, g)
    return t.prob_one(c.output_qubit)
