"""Two-party simulation of Clifford circuits with classical and quantum shares.

Logical qubit j is encoded as ``X^{a_j} Z^{b_j} |psi_j>``: Alice holds the
bits ``(a_j, b_j)``, Bob holds ``|psi_j>``. Clifford gates update the two
sides independently, so the only communication is the final bit ``a`` of the
output qubit (plus two bits per perfect non-Clifford gate). Noisy one-qubit
gates are replaced by a Clifford drawn from a shared random stream.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import bloch, clifford, polytope
from .circuit import Circuit, Gate
from .sim import MAX_DENSE_QUBITS, DensityState, NonCliffordGate, Tableau, parse_bits

BALANCED_TOL = 1e-9


class Balanced(enum.Enum):
    """Outcome probability exactly 1/2: the circuit computes no function."""

    BALANCED = "balanced"

    def __str__(self):
        return self.value


BALANCED = Balanced.BALANCED


class PartitionError(ValueError):
    pass


@dataclass
class ShareState:
    a: np.ndarray
    b: np.ndarray
    bob: Tableau | DensityState
    rng: np.random.Generator
    comm_bits: int = 0
    log: list[str] | None = None


@dataclass(frozen=True)
class ParityForm:
    constant: int
    support: frozenset[int]

    def evaluate(self, bits) -> int:
        return (self.constant + sum(int(bits[j]) for j in self.support)) % 2


def split_inputs(bits, width: int, alice_mask: int) -> tuple[dict[int, int], dict[int, int]]:
    """Bit i of ``alice_mask`` set means input i belongs to Alice."""
    bits = parse_bits(bits, width)
    alice = {j: b for j, b in enumerate(bits) if alice_mask >> j & 1}
    bob = {j: b for j, b in enumerate(bits) if not alice_mask >> j & 1}
    return alice, bob


def init(c: Circuit, alice_bits: dict[int, int], bob_bits: dict[int, int],
         seed=0, backend: str | None = None, trace: bool = False) -> ShareState:
    """Initial shares: Alice's inputs go to her ``a`` bits, Bob's into his qubits."""
    if set(alice_bits) & set(bob_bits):
        raise PartitionError("an input is assigned to both parties")
    if set(alice_bits) | set(bob_bits) != set(range(c.width)):
        raise PartitionError(f"partition must cover inputs 0..{c.width - 1}")
    if backend is None:
        backend = "density" if any(g.kind == "perfect1q" for g in c.gates) else "tableau"
    if backend == "density":
        bob = DensityState(c.width, [bob_bits.get(j, 0) for j in range(c.width)])
    elif backend == "tableau":
        bob = Tableau(c.width)
        for j, y in bob_bits.items():
            if y:
                bob.x_gate(j)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    a = np.zeros(c.width, dtype=np.uint8)
    for j, x in alice_bits.items():
        a[j] = x
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return ShareState(a, np.zeros(c.width, dtype=np.uint8), bob, rng, 0, [] if trace else None)


@lru_cache(maxsize=256)
def _mixture(spec: str, p: float) -> polytope.CliffordMix:
    return polytope.decompose(bloch.unitary_to_rotation(bloch.gate_unitary(spec)), p)


def _clifford_step(st: ShareState, kind: str, qubits) -> None:
    a, b = st.a, st.b
    if kind == "h":
        q = qubits[0]
        a[q], b[q] = b[q], a[q]
    elif kind == "s":
        b[qubits[0]] ^= a[qubits[0]]
    elif kind == "cnot":
        c, t = qubits
        a[t] ^= a[c]
        b[c] ^= b[t]
    # Pauli gates only touch Alice's bits.
    if kind == "x":
        a[qubits[0]] ^= 1
    elif kind == "z":
        b[qubits[0]] ^= 1
    elif kind == "y":
        a[qubits[0]] ^= 1
        b[qubits[0]] ^= 1
    else:
        st.bob.apply(kind, qubits)


def _apply_element(st: ShareState, e: clifford.CliffordElement, q: int) -> None:
    # The word multiplies left to right, so its last letter acts first.
    for letter in reversed(e.word):
        _clifford_step(st, letter.lower(), (q,))


def step(st: ShareState, g: Gate, choice: int | None = None) -> ShareState:
    """Advance both parties through gate ``g``.

    For a noisy gate ``choice`` forces the Clifford id instead of drawing it
    from the shared stream.
    """
    if g.is_clifford:
        _clifford_step(st, g.kind, g.qubits)
    elif g.kind == "noisy1q":
        mix = _mixture(g.spec, g.p)
        e = clifford.element(choice) if choice is not None else mix.sample(st.rng)
        _apply_element(st, e, g.qubits[0])
    elif g.kind == "perfect1q":
        q = g.qubits[0]
        st.comm_bits += 2
        e = None
        if isinstance(st.bob, Tableau):
            e = clifford.closest_element(bloch.unitary_to_rotation(g.unitary), tol=1e-9)
            if e is None:
                raise NonCliffordGate("a non-Clifford perfect gate needs the density backend")
        # Bob undoes X^a Z^b, after which Alice's share of this qubit is trivial.
        if st.b[q]:
            st.bob.apply("z", (q,))
        if st.a[q]:
            st.bob.apply("x", (q,))
        st.a[q] = st.b[q] = 0
        if e is None:
            st.bob.apply_1q(g.unitary, q)
        else:
            _apply_element(st, e, q)
    else:
        raise ValueError(f"cannot step through {g.kind}")
    if st.log is not None:
        st.log.append(f"step gate={g.to_line().replace(' ', '_')} "
                      f"a={''.join(map(str, st.a))} b={''.join(map(str, st.b))} comm_bits={st.comm_bits}")
    return st


def output_probability(st: ShareState, q: int) -> float:
    """Alice sends ``a_q``; Bob flips his qubit accordingly and reads P(1)."""
    st.comm_bits += 1
    if st.a[q]:
        st.bob.apply("x", (q,))
    return st.bob.prob_one(q)


def decide(prob: float) -> int | Balanced:
    if abs(prob - 0.5) <= BALANCED_TOL:
        return BALANCED
    return int(prob > 0.5)


def finalize(st: ShareState, q: int) -> tuple[int | Balanced, int]:
    return decide(output_probability(st, q)), st.comm_bits


@dataclass
class ProtocolResult:
    output: int | Balanced
    comm_bits: int
    prob_one: float
    trace: list[str] = field(default_factory=list)


def run_protocol(c: Circuit, inputs, alice_mask: int, seed=0, backend: str | None = None,
                 trace: bool = False) -> ProtocolResult:
    alice, bob = split_inputs(inputs, c.width, alice_mask)
    st = init(c, alice, bob, seed=seed, backend=backend, trace=trace)
    for g in c.gates:
        step(st, g)
    prob = output_probability(st, c.output_qubit)
    return ProtocolResult(decide(prob), st.comm_bits, prob, st.log or [])


def sample_protocol(c: Circuit, inputs, alice_mask: int, n: int, seed=0) -> float:
    """Frequency of output 1 over ``n`` randomized protocol runs.

    The shared stream first draws the Clifford choices for every noisy gate
    (gate by gate, all runs at once), then one private coin per run that
    breaks balanced outcomes. Runs with identical choices share one
    deterministic share simulation.
    """
    rng = np.random.default_rng(seed)
    noisy = [g for g in c.gates if g.kind == "noisy1q"]
    if noisy:
        choices = np.stack([rng.choice(24, size=n, p=_mixture(g.spec, g.p).probabilities())
                            for g in noisy], axis=1)
    else:
        choices = np.zeros((n, 0), dtype=np.int64)
    coins = rng.random(n)
    combos, inverse = np.unique(choices, axis=0, return_inverse=True)
    alice, bob = split_inputs(inputs, c.width, alice_mask)
    probs = np.empty(len(combos))
    for k, combo in enumerate(combos):
        st = init(c, alice, bob)
        it = iter(combo)
        for g in c.gates:
            step(st, g, int(next(it)) if g.kind == "noisy1q" else None)
        probs[k] = output_probability(st, c.output_qubit)
    return float(np.mean(coins < probs[inverse.reshape(-1)]))


def extract_parity(c: Circuit) -> ParityForm | Balanced:
    """Parity form ``f(x) = c XOR (XOR of x_j, j in S)`` of a Clifford circuit.

    Alice's updates run symbolically over GF(2): each share bit is an affine
    form stored as ``(constant, support bitmask)``.
    """
    if not c.is_clifford:
        raise NonCliffordGate("parity extraction needs a Clifford-only circuit")
    a = [(0, 1 << j) for j in range(c.width)]
    b = [(0, 0) for _ in range(c.width)]
    bob = Tableau(c.width)

    def xor(u, v):
        return (u[0] ^ v[0], u[1] ^ v[1])

    for g in c.gates:
        q = g.qubits[0]
        if g.kind == "h":
            a[q], b[q] = b[q], a[q]
        elif g.kind == "s":
            b[q] = xor(b[q], a[q])
        elif g.kind == "cnot":
            t = g.qubits[1]
            a[t] = xor(a[t], a[q])
            b[q] = xor(b[q], b[t])
        elif g.kind == "x":
            a[q] = xor(a[q], (1, 0))
        elif g.kind == "z":
            b[q] = xor(b[q], (1, 0))
        elif g.kind == "y":
            a[q] = xor(a[q], (1, 0))
            b[q] = xor(b[q], (1, 0))
        if g.kind in ("h", "s", "cnot"):
            bob.apply(g.kind, g.qubits)

    prob = bob.prob_one(c.output_qubit)
    if prob == 0.5:
        return BALANCED
    const, mask = a[c.output_qubit]
    support = frozenset(j for j in range(c.width) if mask >> j & 1)
    return ParityForm(int(prob) ^ const, support)


def truth_table(c: Circuit) -> list[float]:
    """Dense-oracle P(1) for every input, indexed by the integer with bit j = x_j."""
    from .sim import dm_run

    if c.width > MAX_DENSE_QUBITS:
        raise ValueError("truth table needs the dense oracle")
    return [dm_run(c, [(x >> j) & 1 for j in range(c.width)]) for x in range(2 ** c.width)]
