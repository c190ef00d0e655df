from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffpoly import circuit
from cliffpoly.circuit import CctSemanticError, CctSyntaxError

DATA = Path(__file__).parent / "data"


def test_golden_parse():
    c = circuit.parse((DATA / "ghz3.cct").read_text())
    assert c.width == 3 and c.output_qubit == 2
    assert [g.kind for g in c.gates] == ["h", "cnot", "cnot"]
    n = circuit.parse((DATA / "noisy_t.cct").read_text())
    assert n.gates[1] == circuit.Noisy1Q(0, "t", 0.46)
    assert not n.is_clifford


@pytest.mark.parametrize("name,err", [("bad_syntax.cct", CctSyntaxError), ("bad_range.cct", CctSemanticError),
                                      ("bad_order.cct", CctSemanticError)])
def test_golden_errors(name, err):
    with pytest.raises(err):
        circuit.parse((DATA / name).read_text())


@pytest.mark.parametrize("text", [
    "h 0\nmeasure 0",                        # no qubits yet
    "qubits 2\nh 0",                         # no measure
    "qubits 2\nqubits 2\nmeasure 0",
    "qubits 2\ncnot 1 1\nmeasure 0",
    "qubits 1\nnoisy1q 0 t 1.5\nmeasure 0",
    "qubits 1\nmeasure 3",
    "qubits 0\nmeasure 0",
])
def test_semantic_errors(text):
    with pytest.raises(CctSemanticError):
        circuit.parse(text)


@pytest.mark.parametrize("text", ["qubits 1\nfoo 0\nmeasure 0", "qubits 1\nh\nmeasure 0",
                                  "qubits 1\nnoisy1q 0 q 0.1\nmeasure 0", "qubits x\nmeasure 0"])
def test_syntax_errors(text):
    with pytest.raises(CctSyntaxError) as exc:
        circuit.parse(text)
    assert exc.value.line >= 1


def test_comments_and_case():
    c = circuit.parse("# hi\n\nQUBITS 2  # two\nH 1\n  measure 1 \n")
    assert c.gates == (circuit.H(1),)


def test_random_circuit_golden():
    c = circuit.random_clifford_circuit(3, 30, 7)
    expected = (DATA / "random_3_30_7.cct").read_text()
    assert circuit.serialize(c) == expected


@given(st.integers(1, 6), st.integers(0, 40), st.integers(0, 2**32 - 1))
def test_round_trip(width, depth, seed):
    rng = np.random.default_rng(seed)
    c = circuit.random_clifford_circuit(width, depth, rng)
    extra = [circuit.Noisy1Q(int(rng.integers(width)), "t", float(rng.random())),
             circuit.Perfect1Q(int(rng.integers(width)), f"rz:{rng.normal()!r}")]
    c = circuit.insert_gates(c, extra, rng)
    assert circuit.parse(circuit.serialize(c)) == c


@given(st.text(alphabet="qubitsmeasurehcnotxyz0123456789 .:#\n-", max_size=80))
def test_fuzz_only_typed_errors(text):
    try:
        circuit.parse(text)
    except (CctSyntaxError, CctSemanticError):
        pass


def test_unitary_gate_spec():
    g = circuit.Noisy1Q(0, np.diag([1, 1j]), 0.1)
    assert g.spec.startswith("axis:")
    assert np.allclose(np.abs(g.unitary), np.eye(2), atol=1e-12)
