"""The 24 one-qubit Clifford rotations and Pauli propagation through H, S, CNOT.

Each Clifford rotation is a signed permutation matrix ``C`` with
``C[sigma(i), i] = s_i`` and ``s_1 s_2 s_3 = sign(sigma)`` (so ``det C = 1``).
Elements get canonical ids 0..23 from the lexicographic order of
``(sigma, s)`` where ``sigma = (sigma(1), sigma(2), sigma(3))`` is 1-based.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cache

import numpy as np

from . import bloch

# Table of the six permutation classes; sigma_1..sigma_3 even, sigma_4..sigma_6 odd.
SIGMAS = {
    1: (1, 2, 3), 2: (2, 3, 1), 3: (3, 1, 2),
    4: (1, 3, 2), 5: (2, 1, 3), 6: (3, 2, 1),
}


def perm_sign(sigma) -> int:
    sign = 1
    for i, j in itertools.combinations(range(len(sigma)), 2):
        if sigma[i] > sigma[j]:
            sign = -sign
    return sign


@dataclass(frozen=True)
class SignedPerm:
    sigma: tuple[int, int, int]
    s: tuple[int, int, int]

    def __post_init__(self):
        if sorted(self.sigma) != [1, 2, 3] or any(v not in (-1, 1) for v in self.s):
            raise ValueError(f"not a signed permutation: {self}")
        if self.s[0] * self.s[1] * self.s[2] != perm_sign(self.sigma):
            raise ValueError("sign product must equal sign(sigma)")

    def matrix(self) -> np.ndarray:
        m = np.zeros((3, 3), dtype=np.int64)
        for i in range(3):
            m[self.sigma[i] - 1, i] = self.s[i]
        return m

    @classmethod
    def from_matrix(cls, m) -> "SignedPerm":
        m = np.asarray(m)
        sigma = tuple(int(np.flatnonzero(m[:, i])[0]) + 1 for i in range(3))
        s = tuple(int(m[sigma[i] - 1, i]) for i in range(3))
        return cls(sigma, s)


@dataclass(frozen=True, eq=False)
class CliffordElement:
    id: int
    mat: np.ndarray
    sp: SignedPerm
    word: tuple[str, ...]
    unitary: np.ndarray

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.mat.ravel())

    def __eq__(self, other):
        return isinstance(other, CliffordElement) and self.id == other.id

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"CliffordElement(id={self.id}, sigma={self.sp.sigma}, s={self.sp.s})"


R_H = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=np.int64)
R_S = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.int64)
_GENERATORS = (("H", R_H, bloch.H), ("S", R_S, bloch.S))


def _bfs_words() -> dict[tuple[int, ...], tuple[tuple[str, ...], np.ndarray]]:
    """Shortest {H, S} words by breadth-first search; ties go to the lexicographically smaller word."""
    start = np.eye(3, dtype=np.int64)
    found = {tuple(start.ravel()): ((), bloch.I2.copy())}
    queue = deque([(start, (), bloch.I2.copy())])
    while queue:
        mat, word, u = queue.popleft()
        for name, rg, ug in _GENERATORS:
            child = mat @ rg
            key = tuple(child.ravel())
            if key not in found:
                found[key] = (word + (name,), u @ ug)
                queue.append((child, word + (name,), u @ ug))
    return found


@cache
def enumerate_group() -> tuple[CliffordElement, ...]:
    words = _bfs_words()
    sps = []
    for sigma in itertools.permutations((1, 2, 3)):
        for s in itertools.product((-1, 1), repeat=3):
            if s[0] * s[1] * s[2] == perm_sign(sigma):
                sps.append(SignedPerm(sigma, s))
    sps.sort(key=lambda sp: (sp.sigma, sp.s))
    out = []
    for k, sp in enumerate(sps):
        m = sp.matrix()
        m.setflags(write=False)
        word, u = words[tuple(m.ravel())]
        u.setflags(write=False)
        out.append(CliffordElement(k, m, sp, word, u))
    return tuple(out)


@cache
def _index() -> dict[tuple[int, ...], CliffordElement]:
    return {e.key: e for e in enumerate_group()}


def element(i: int) -> CliffordElement:
    return enumerate_group()[i]


def lookup(mat) -> CliffordElement:
    """The group element with exactly this integer matrix; KeyError otherwise."""
    m = np.asarray(mat)
    if not np.all(m == np.round(m)):
        raise KeyError("matrix is not integral")
    return _index()[tuple(int(v) for v in np.round(m).ravel())]


def identity() -> CliffordElement:
    return lookup(np.eye(3, dtype=np.int64))


def multiply(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return lookup(a.mat @ b.mat)


def transpose(a: CliffordElement) -> CliffordElement:
    return lookup(a.mat.T)


inverse = transpose


def generator_word(e: CliffordElement) -> tuple[str, ...]:
    return e.word


def class_of(e: CliffordElement) -> int:
    """Index 1..6 of the permutation class containing ``e``."""
    return next(k for k, sig in SIGMAS.items() if sig == e.sp.sigma)


def classes() -> dict[int, list[CliffordElement]]:
    out = {k: [] for k in SIGMAS}
    for e in enumerate_group():
        out[class_of(e)].append(e)
    return out


def all_matrices() -> np.ndarray:
    """Integer array of shape (24, 3, 3) in canonical id order."""
    return np.array([e.mat for e in enumerate_group()])


def closest_element(r, tol: float = 1e-9) -> CliffordElement | None:
    """The element whose matrix equals ``r`` within ``tol``, if any."""
    r = np.asarray(r, dtype=float)
    for e in enumerate_group():
        if np.max(np.abs(e.mat - r)) <= tol:
            return e
    return None


# Pauli propagation --------------------------------------------------------

_LETTERS = "IXYZ"
_PAULI_MATS = dict(zip(_LETTERS, (bloch.I2, bloch.X, bloch.Y, bloch.Z)))
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_PHASES = (1, 1j, -1, -1j)


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class PauliWord:
    """Tensor product of Paulis with global factor ``i ** phase``."""

    letters: str
    phase: int = 0

    def __post_init__(self):
        if any(c not in _LETTERS for c in self.letters):
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        object.__setattr__(self, "phase", self.phase % 4)

    @property
    def sign(self) -> complex:
        return _PHASES[self.phase]

    def matrix(self) -> np.ndarray:
        m = np.array([[self.sign]], dtype=complex)
        for c in self.letters:
            m = np.kron(m, _PAULI_MATS[c])
        return m


def _conjugation_table(gate: np.ndarray, width: int) -> dict[str, tuple[int, str]]:
    table = {}
    dim = 2 ** width
    for letters in itertools.product(_LETTERS, repeat=width):
        p = PauliWord("".join(letters)).matrix()
        m = gate @ p @ gate.conj().T
        for out in itertools.product(_LETTERS, repeat=width):
            q = PauliWord("".join(out)).matrix()
            lam = np.trace(q.conj().T @ m) / dim
            if abs(lam) > 0.5:
                table["".join(letters)] = (_PHASES.index(complex(np.round(lam.real) + 1j * np.round(lam.imag))),
                                           "".join(out))
                break
    return table


_TABLES = {
    "H": _conjugation_table(bloch.H, 1),
    "S": _conjugation_table(bloch.S, 1),
    "X": _conjugation_table(bloch.X, 1),
    "Y": _conjugation_table(bloch.Y, 1),
    "Z": _conjugation_table(bloch.Z, 1),
    "CNOT": _conjugation_table(_CNOT, 2),
}


def propagate_pauli(gate: str, qubits: tuple[int, ...], p: PauliWord) -> PauliWord:
    """Return ``P2`` with ``C P1 = P2 C``, i.e. ``P2 = C P1 C*``.

    ``gate`` is one of H, S, X, Y, Z (one qubit index) or CNOT (control, target).
    """
    gate = gate.upper()
    if gate not in _TABLES:
        raise ValueError(f"unknown Clifford gate {gate!r}")
    arity = 2 if gate == "CNOT" else 1
    if len(qubits) != arity or any(not 0 <= q < len(p.letters) for q in qubits):
        raise IndexOutOfRange(f"qubits {qubits} invalid for a {len(p.letters)}-qubit word")
    if arity == 2 and qubits[0] == qubits[1]:
        raise IndexOutOfRange("CNOT control equals target")
    key = "".join(p.letters[q] for q in qubits)
    phase, out = _TABLES[gate][key]
    letters = list(p.letters)
    for q, c in zip(qubits, out):
        letters[q] = c
    return PauliWord("".join(letters), p.phase + phase)
