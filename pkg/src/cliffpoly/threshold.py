"""Maximizing <B, S> over SO(3), the noise threshold, and related bounds.

The maximum of the linear function S -> <B, S> over rotations has the
special-orthogonal Procrustes closed form sigma_1 + sigma_2 + sign(det B) sigma_3.
A gradient-free random-restart search over SO(3) serves as an independent
check of that closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bloch, polytope
from .mathkit import as_mat3, inner, svd3
from .sim import DensityState

THETA_HAT = polytope.THETA_HAT
# Worst-case noise of the pi/8 gate as reported in earlier work; not recomputed here.
PI8_WORST_CASE_REPORTED = 0.5 - 1.0 / (2.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class So3MaxResult:
    value: float
    argmax: np.ndarray


@dataclass(frozen=True)
class NoiseBounds:
    theta_hat: float
    worst_case_lower: float
    worst_case_upper: float
    pi8_worst_case_reported: float


def so3_max_inner(b) -> So3MaxResult:
    b = as_mat3(b)
    u, sigma, v = svd3(b)
    d = 1.0 if np.linalg.det(u) * np.linalg.det(v) > 0 else -1.0
    argmax = u @ np.diag([1.0, 1.0, d]) @ v.T
    return So3MaxResult(float(sigma[0] + sigma[1] + d * sigma[2]), argmax)


def _expm_so3(w0: float, w1: float, w2: float) -> np.ndarray:
    th = math.sqrt(w0 * w0 + w1 * w1 + w2 * w2)
    k = np.array([[0.0, -w2, w1], [w2, 0.0, -w0], [-w1, w0, 0.0]])
    if th < 1e-12:
        return np.eye(3) + k
    return np.eye(3) + (math.sin(th) / th) * k + ((1 - math.cos(th)) / (th * th)) * (k @ k)


def local_search_max(b, start: np.ndarray, step: float = 0.5, min_step: float = 1e-9) -> tuple[float, np.ndarray]:
    """Coordinate ascent of <B, R exp(w)> over the rotation vector w, recentred after each move."""
    b = as_mat3(b)
    r = start.copy()
    best = inner(b, r)
    while step > min_step:
        improved = False
        for axis in range(3):
            for sgn in (1.0, -1.0):
                w = [0.0, 0.0, 0.0]
                w[axis] = sgn * step
                cand = r @ _expm_so3(*w)
                val = inner(b, cand)
                if val > best:
                    best, r, improved = val, cand, True
                    break
        if not improved:
            step *= 0.5
    # Re-orthonormalize accumulated products.
    u, _, vt = np.linalg.svd(r)
    r = u @ vt
    return inner(b, r), r


def random_restart_max(b, restarts: int = 200, seed: int = 0) -> So3MaxResult:
    """Best local maximum over Haar-random starting rotations (deterministic given seed)."""
    rng = np.random.default_rng(seed)
    starts = bloch.haar_rotations(rng, restarts)
    best_val, best_r = -math.inf, None
    for s in starts:
        val, r = local_search_max(b, s)
        if val > best_val:
            best_val, best_r = val, r
    return So3MaxResult(best_val, best_r)


def haar_sample_max(b, n: int = 1_000_000, seed: int = 0, chunk: int = 200_000) -> float:
    rng = np.random.default_rng(seed)
    flat = as_mat3(b).ravel()
    best = -math.inf
    for start in range(0, n, chunk):
        rs = bloch.haar_rotations(rng, min(chunk, n - start))
        best = max(best, float(np.max(rs.reshape(-1, 9) @ flat)))
    return best


def compute_theta_hat() -> float:
    return 1.0 - 1.0 / so3_max_inner(polytope.B2).value


def extremal_gate() -> tuple[np.ndarray, np.ndarray]:
    """Maximizer of <B2, S> over SO(3) and the matching unitary (the pi/8 gate T).

    The maximizer is the rotation by pi/4 about z.
    """
    c = 1.0 / math.sqrt(2.0)
    s_star = np.array([[c, -c, 0.0], [c, c, 0.0], [0.0, 0.0, 1.0]])
    return s_star, bloch.T.copy()


def octahedron_distance(u) -> tuple[np.ndarray, float]:
    """Nearest point of the l1 unit ball to ``u`` along the ray through u, and its distance."""
    u = np.asarray(u, dtype=float)
    inside = u / np.sum(np.abs(u))
    return inside, float(np.linalg.norm(u - inside))


def worst_case_lower() -> float:
    """Noise needed to pull (1,1,1)/sqrt(3) into the octahedron by mixing towards its antipode.

    Solves (1 - 2p) ||u||_1 = 1.
    """
    u = np.ones(3) / math.sqrt(3.0)
    return 0.5 * (1.0 - 1.0 / float(np.sum(np.abs(u))))


def worst_case_upper() -> float:
    return 0.75 * compute_theta_hat()


def twirled_channel(u, rho, p: float) -> np.ndarray:
    """(1 - 3p/4) U rho U* + (3p/4) E_U(rho), with E_U the Pauli-averaged image."""
    v = np.asarray(u) @ np.asarray(rho) @ np.asarray(u).conj().T
    e = sum(P @ v @ P for P in bloch.PAULIS) / 3.0
    return (1 - 0.75 * p) * v + 0.75 * p * e


def depolarized_channel(u, rho, p: float) -> np.ndarray:
    v = np.asarray(u) @ np.asarray(rho) @ np.asarray(u).conj().T
    return (1 - p) * v + p * bloch.I2 / 2


def magic_state(p: float) -> tuple[np.ndarray, float]:
    """Noisy-T magic-state preparation on a density matrix.

    EPR pair, noisy T on qubit 1, project onto Z x Z = +1, CNOT 0 -> 1.
    Returns the Bloch vector of qubit 0 and the post-selection probability.
    """
    p = bloch.check_probability(p)
    if p >= 1.0:
        raise bloch.BadProbability("magic-state preparation needs p < 1")
    st = DensityState(2)
    st.apply_1q(bloch.H, 0)
    st.apply_cnot(0, 1)
    st.apply_1q(bloch.T, 1)
    st.depolarize(1, p)
    zz = np.kron(bloch.Z, bloch.Z)
    prob = st.project((np.eye(4) + zz) / 2)
    st.apply_cnot(0, 1)
    r = bloch.bloch_vector(st.reduced(0))
    q1 = st.reduced(1)
    if np.max(np.abs(q1 - np.diag([1.0, 0.0]))) > 1e-12:
        raise RuntimeError("second qubit did not end in |0><0|")
    return r, prob


def noise_bounds() -> NoiseBounds:
    return NoiseBounds(compute_theta_hat(), worst_case_lower(), worst_case_upper(), PI8_WORST_CASE_REPORTED)
