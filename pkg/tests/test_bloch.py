import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffpoly import bloch

seeds = st.integers(0, 2**32 - 1)


def test_named_rotations():
    assert np.allclose(bloch.unitary_to_rotation(bloch.X), np.diag([1, -1, -1]))
    assert np.allclose(bloch.unitary_to_rotation(bloch.H), [[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    assert np.allclose(bloch.unitary_to_rotation(bloch.S), [[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    c = 1 / math.sqrt(2)
    assert np.allclose(bloch.unitary_to_rotation(bloch.T), [[c, -c, 0], [c, c, 0], [0, 0, 1]])


@given(seeds)
def test_su2_so3_round_trip(seed):
    rng = np.random.default_rng(seed)
    u = bloch.haar_unitary(rng)
    r = bloch.unitary_to_rotation(u)
    bloch.check_rotation(r)
    assert bloch.projective_distance(bloch.rotation_to_unitary(r), u) < 1e-9
    assert np.allclose(bloch.unitary_to_rotation(-u), r)


@given(seeds)
def test_homomorphism(seed):
    rng = np.random.default_rng(seed)
    u, v = bloch.haar_unitary(rng), bloch.haar_unitary(rng)
    assert np.allclose(bloch.unitary_to_rotation(u @ v),
                       bloch.unitary_to_rotation(u) @ bloch.unitary_to_rotation(v), atol=1e-12)


@given(seeds)
def test_axis_angle_round_trip(seed):
    rng = np.random.default_rng(seed)
    r = bloch.haar_rotation(rng)
    n, th = bloch.rotation_to_axis_angle(r)
    assert 0 <= th <= math.pi + 1e-12
    assert np.allclose(bloch.axis_angle_to_rotation(n, th), r, atol=1e-9)


@pytest.mark.parametrize("n", [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, -1, 1)])
def test_angle_pi(n):
    n = np.array(n, float) / np.linalg.norm(n)
    r = bloch.axis_angle_to_rotation(n, math.pi)
    m, th = bloch.rotation_to_axis_angle(r)
    assert th == pytest.approx(math.pi)
    assert np.allclose(bloch.axis_angle_to_rotation(m, th), r, atol=1e-9)


def test_identity_axis_angle():
    n, th = bloch.rotation_to_axis_angle(np.eye(3))
    assert th == 0.0


def test_validators():
    with pytest.raises(bloch.NotUnitary):
        bloch.check_unitary(np.array([[1, 1], [0, 1]]))
    with pytest.raises(bloch.NotRotation):
        bloch.check_rotation(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(bloch.BadProbability):
        bloch.check_probability(1.5)


@given(seeds, st.floats(0, 1))
def test_depolarize_matches_density(seed, p):
    rng = np.random.default_rng(seed)
    r = rng.normal(size=3)
    r *= rng.random() / np.linalg.norm(r)
    rho = bloch.density_from_bloch(r)
    mixed = (1 - p) * rho + p * bloch.I2 / 2
    assert np.allclose(bloch.bloch_vector(mixed), bloch.depolarize(r, p))


def test_gate_spec_grammar():
    assert bloch.canonical_gate_spec(" T ") == "t"
    assert bloch.canonical_gate_spec("rz:0.5") == "rz:0.5"
    assert bloch.parse_gate_spec("axis:0,0,2:1")[0] == "axis"
    assert bloch.projective_distance(bloch.gate_unitary("rz:0.7853981633974483"), bloch.T) < 1e-12
    assert bloch.projective_distance(bloch.gate_unitary("axis:0,0,1:0.7853981633974483"), bloch.T) < 1e-12
    for bad in ("q", "rz:", "rz:abc", "axis:0,0,0:1", "axis:1,0:1"):
        with pytest.raises(bloch.GateSpecError):
            bloch.parse_gate_spec(bad)


@given(seeds)
def test_unitary_to_spec_round_trip(seed):
    u = bloch.haar_unitary(np.random.default_rng(seed))
    assert bloch.projective_distance(bloch.gate_unitary(bloch.unitary_to_spec(u)), u) < 1e-9


def test_haar_moments():
    rs = bloch.haar_rotations(np.random.default_rng(0), 200_000)
    # E[R] = 0 and E[R_ij^2] = 1/3 for Haar measure on SO(3)
    assert np.abs(rs.mean(axis=0)).max() < 0.01
    assert np.abs((rs ** 2).mean(axis=0) - 1 / 3).max() < 0.01
    # trace density: E[tr R] = 0, E[(tr R)^2] = 1
    tr = np.trace(rs, axis1=1, axis2=2)
    assert abs(tr.mean()) < 0.01 and abs((tr ** 2).mean() - 1) < 0.02
