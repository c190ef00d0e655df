"""Bloch-sphere correspondence between one-qubit unitaries and SO(3).

Unitaries are plain 2x2 complex arrays, rotations plain 3x3 float arrays.
A unitary ``U`` acts on Bloch vectors through ``R_ij = tr(P_i U P_j U*) / 2``
with ``(P_1, P_2, P_3) = (X, Y, Z)``. Unitaries are only ever compared up to
global phase, see :func:`projective_distance`.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (X, Y, Z)

H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
T = np.diag([np.exp(-1j * math.pi / 8), np.exp(1j * math.pi / 8)])

NAMED_GATES = {"h": H, "s": S, "t": T, "x": X, "y": Y, "z": Z}

UNITARY_TOL = 1e-10
ROTATION_TOL = 1e-9
BLOCH_TOL = 1e-10


class NotUnitary(ValueError):
    pass


class NotRotation(ValueError):
    pass


class BadProbability(ValueError):
    pass


class GateSpecError(ValueError):
    pass


class AxisAngle(NamedTuple):
    n: np.ndarray
    theta: float


def check_unitary(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not np.all(np.isfinite(u)):
        raise NotUnitary(f"expected a finite 2x2 matrix, got shape {u.shape}")
    if np.max(np.abs(u @ u.conj().T - I2)) > UNITARY_TOL:
        raise NotUnitary("U U* differs from the identity")
    return u


def check_rotation(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not np.all(np.isfinite(r)):
        raise NotRotation(f"expected a finite 3x3 matrix, got shape {r.shape}")
    if np.max(np.abs(r.T @ r - np.eye(3))) > ROTATION_TOL:
        raise NotRotation("matrix is not orthogonal")
    if abs(np.linalg.det(r) - 1.0) > ROTATION_TOL:
        raise NotRotation("determinant is not +1")
    return r


def check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"noise level {p} outside [0, 1]")
    return p


def projective_distance(u, v) -> float:
    """``1 - |tr(U* V)| / 2``; zero iff the unitaries agree up to phase."""
    return 1.0 - abs(np.trace(np.asarray(u).conj().T @ np.asarray(v))) / 2.0


def unitary_to_rotation(u) -> np.ndarray:
    u = check_unitary(u)
    ud = u.conj().T
    r = np.empty((3, 3))
    for i, pi in enumerate(PAULIS):
        for j, pj in enumerate(PAULIS):
            r[i, j] = 0.5 * np.trace(pi @ u @ pj @ ud).real
    return r


def quaternion_to_rotation(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quaternion_to_unitary(q) -> np.ndarray:
    w, x, y, z = q
    return w * I2 - 1j * (x * X + y * Y + z * Z)


def rotation_to_quaternion(r) -> np.ndarray:
    """Unit quaternion ``(w, x, y, z)`` of a rotation, with ``w >= 0``.

    Uses the largest of the four diagonal combinations as pivot, which stays
    well conditioned for every angle. When ``w`` vanishes (angle pi) the
    vector part is flipped so that its first nonzero coordinate is positive.
    """
    r = check_rotation(r)
    tr = np.trace(r)
    cands = [1 + tr, 1 + r[0, 0] - r[1, 1] - r[2, 2],
             1 - r[0, 0] + r[1, 1] - r[2, 2], 1 - r[0, 0] - r[1, 1] + r[2, 2]]
    k = int(np.argmax(cands))
    s = 2.0 * math.sqrt(max(cands[k], 0.0))
    if k == 0:
        q = [s / 4, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s]
    elif k == 1:
        q = [(r[2, 1] - r[1, 2]) / s, s / 4, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s]
    elif k == 2:
        q = [(r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, s / 4, (r[1, 2] + r[2, 1]) / s]
    else:
        q = [(r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, s / 4]
    q = np.array(q)
    q /= np.linalg.norm(q)
    if q[0] < 0:
        q = -q
    if abs(q[0]) < 1e-12:
        lead = next((c for c in q[1:] if abs(c) > 1e-12), 1.0)
        if lead < 0:
            q = -q
    return q


def rotation_to_unitary(r) -> np.ndarray:
    """A unitary representative of ``r`` with rotation angle in ``[0, pi]``."""
    return quaternion_to_unitary(rotation_to_quaternion(r))


def axis_angle_to_rotation(n, theta: float) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    norm = np.linalg.norm(n)
    if abs(norm - 1.0) > BLOCH_TOL:
        raise ValueError(f"axis must be a unit vector, has norm {norm}")
    k = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + math.sin(theta) * k + (1 - math.cos(theta)) * (k @ k)


def rotation_to_axis_angle(r) -> AxisAngle:
    r = check_rotation(r)
    tr = np.trace(r)
    theta = math.acos(min(1.0, max(-1.0, (tr - 1.0) / 2.0)))
    if abs(tr + 1.0) < 1e-8:
        # Angle pi: R = 2 n n^T - I, read n off the dominant diagonal of (R + I) / 2.
        m = (r + np.eye(3)) / 2.0
        k = int(np.argmax(np.diag(m)))
        n = m[:, k] / math.sqrt(m[k, k])
        lead = next(c for c in n if abs(c) > 1e-12)
        if lead < 0:
            n = -n
        return AxisAngle(n / np.linalg.norm(n), math.pi)
    v = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    vn = np.linalg.norm(v)
    if vn < 1e-14:
        return AxisAngle(np.array([0.0, 0.0, 1.0]), 0.0)
    # atan2 keeps small angles accurate where acos loses half the digits.
    return AxisAngle(v / vn, math.atan2(vn / 2.0, (tr - 1.0) / 2.0))


def axis_unitary(n, theta: float) -> np.ndarray:
    """``exp(-i theta n.sigma / 2)``."""
    n = np.asarray(n, dtype=float)
    return math.cos(theta / 2) * I2 - 1j * math.sin(theta / 2) * (n[0] * X + n[1] * Y + n[2] * Z)


def rz(theta: float) -> np.ndarray:
    return axis_unitary((0.0, 0.0, 1.0), theta)


def rx(theta: float) -> np.ndarray:
    return axis_unitary((1.0, 0.0, 0.0), theta)


def ry(theta: float) -> np.ndarray:
    return axis_unitary((0.0, 1.0, 0.0), theta)


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(rho @ p).real for p in PAULIS])


def density_from_bloch(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) > 1 + BLOCH_TOL:
        raise ValueError("Bloch vector longer than 1")
    return (I2 + r[0] * X + r[1] * Y + r[2] * Z) / 2


def depolarize(r, p: float) -> np.ndarray:
    """Depolarizing noise ``p`` shrinks a Bloch vector by ``1 - p``."""
    p = check_probability(p)
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) > 1 + BLOCH_TOL:
        raise ValueError("Bloch vector longer than 1")
    return (1.0 - p) * r


def noisy_gate_rotation(u, p: float) -> np.ndarray:
    """Bloch representation ``(1 - p) R_U`` of U followed by depolarizing noise p.

    The result is a contraction, not a rotation, whenever ``p > 0``.
    """
    p = check_probability(p)
    return (1.0 - p) * unitary_to_rotation(u)


# Gate-spec mini-grammar: rz:<t> | rx:<t> | ry:<t> | axis:<nx>,<ny>,<nz>:<t> | h|s|t|x|y|z

def _num(text: str, spec: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise GateSpecError(f"bad number {text!r} in gate spec {spec!r}") from None
    if not math.isfinite(v):
        raise GateSpecError(f"non-finite number in gate spec {spec!r}")
    return v


def _fmt(v: float) -> str:
    return format(v, ".17g")


def parse_gate_spec(spec: str) -> tuple[str, tuple[float, ...]]:
    """Split a gate spec into ``(kind, params)``."""
    s = spec.strip().lower()
    if s in NAMED_GATES:
        return s, ()
    head, _, rest = s.partition(":")
    if head in ("rz", "rx", "ry") and rest:
        return head, (_num(rest, spec),)
    if head == "axis":
        axis, _, angle = rest.rpartition(":")
        parts = axis.split(",")
        if len(parts) != 3 or not angle:
            raise GateSpecError(f"axis spec needs 'axis:nx,ny,nz:theta', got {spec!r}")
        n = tuple(_num(c, spec) for c in parts)
        if math.sqrt(sum(c * c for c in n)) < 1e-12:
            raise GateSpecError(f"zero axis in gate spec {spec!r}")
        return "axis", n + (_num(angle, spec),)
    raise GateSpecError(f"unknown gate spec {spec!r}")


def canonical_gate_spec(spec: str) -> str:
    kind, params = parse_gate_spec(spec)
    if kind in NAMED_GATES:
        return kind
    if kind == "axis":
        return "axis:" + ",".join(_fmt(v) for v in params[:3]) + ":" + _fmt(params[3])
    return f"{kind}:{_fmt(params[0])}"


def gate_unitary(spec: str) -> np.ndarray:
    kind, params = parse_gate_spec(spec)
    if kind in NAMED_GATES:
        return NAMED_GATES[kind].copy()
    if kind == "axis":
        n = np.array(params[:3])
        return axis_unitary(n / np.linalg.norm(n), params[3])
    return {"rz": rz, "rx": rx, "ry": ry}[kind](params[0])


def unitary_to_spec(u) -> str:
    """Axis-angle gate spec reproducing ``u`` up to global phase."""
    q = rotation_to_quaternion(unitary_to_rotation(u))
    vn = np.linalg.norm(q[1:])
    if vn < 1e-15:
        return "rz:0"
    theta = 2.0 * math.atan2(vn, q[0])
    n = q[1:] / vn
    return "axis:" + ",".join(_fmt(c) for c in n) + ":" + _fmt(theta)


# Haar sampling: a normalized 4-d Gaussian is a uniform unit quaternion.

def haar_quaternions(rng: np.random.Generator, size: int) -> np.ndarray:
    q = rng.standard_normal((size, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def haar_rotations(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` Haar-random rotations, shape ``(size, 3, 3)``."""
    q = haar_quaternions(rng, size)
    w, x, y, z = q.T
    r = np.empty((size, 3, 3))
    r[:, 0, 0] = 1 - 2 * (y * y + z * z)
    r[:, 0, 1] = 2 * (x * y - w * z)
    r[:, 0, 2] = 2 * (x * z + w * y)
    r[:, 1, 0] = 2 * (x * y + w * z)
    r[:, 1, 1] = 1 - 2 * (x * x + z * z)
    r[:, 1, 2] = 2 * (y * z - w * x)
    r[:, 2, 0] = 2 * (x * z - w * y)
    r[:, 2, 1] = 2 * (y * z + w * x)
    r[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return r


def haar_rotation(rng: np.random.Generator) -> np.ndarray:
    return haar_rotations(rng, 1)[0]


def haar_unitary(rng: np.random.Generator) -> np.ndarray:
    return quaternion_to_unitary(haar_quaternions(rng, 1)[0])
