"""Small dense numerics: 3x3 SVD, exact integer rank, and a simplex LP solver.

Everything here is sized for the Clifford-polytope problems (3x3 matrices,
10x24 equality systems), so the implementations favour clarity over speed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Centralized tolerances.
ORTHO_TOL = 1e-12
JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 200
LP_PIVOT_TOL = 1e-11
LP_FEAS_TOL = 1e-9


class ConvergenceDefect(RuntimeError):
    """An iteration that must converge did not; indicates a bug, not bad input."""


class DimensionMismatch(ValueError):
    pass


class LPUnbounded(ValueError):
    pass


def as_mat3(a) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.shape != (3, 3):
        raise DimensionMismatch(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def inner(a, b) -> float:
    """Frobenius inner product <A, B> = tr(A^T B)."""
    return float(np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float)))


def is_orthogonal(m, tol: float = 1e-9) -> bool:
    m = np.asarray(m, dtype=float)
    return bool(np.max(np.abs(m.T @ m - np.eye(m.shape[0]))) <= tol)


def _complete_basis(u: np.ndarray, good: list[int]) -> None:
    """Fill the columns of ``u`` not listed in ``good`` with an orthonormal completion."""
    cols = [u[:, k] for k in good]
    for k in range(3):
        if k in good:
            continue
        if len(cols) == 2:
            v = np.cross(cols[0], cols[1])
        else:
            v = None
            for e in np.eye(3):
                w = e - sum(np.dot(e, c) * c for c in cols)
                if v is None or np.linalg.norm(w) > np.linalg.norm(v):
                    v = w
        v = v / np.linalg.norm(v)
        u[:, k] = v
        cols.append(v)
        good = good + [k]


def svd3(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition of a 3x3 matrix by one-sided Jacobi.

    Returns ``(U, sigma, V)`` with ``A = U @ diag(sigma) @ V.T``, both factors
    orthogonal and ``sigma`` sorted in decreasing order.
    """
    w = as_mat3(a).copy()
    v = np.eye(3)
    # Absolute floor so that numerically null columns stop rotating.
    floor = 1e-30 * float(np.sum(w * w))
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p, q in ((0, 1), (0, 2), (1, 2)):
            alpha = w[:, p] @ w[:, p]
            beta = w[:, q] @ w[:, q]
            gamma = w[:, p] @ w[:, q]
            if abs(gamma) <= max(JACOBI_TOL * np.sqrt(alpha * beta), floor) or gamma == 0.0:
                continue
            rotated = True
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            wp, wq = w[:, p].copy(), w[:, q].copy()
            w[:, p], w[:, q] = c * wp - s * wq, s * wp + c * wq
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        if not rotated:
            break
    else:
        raise ConvergenceDefect("one-sided Jacobi did not converge in 200 sweeps")

    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, w, v = sigma[order], w[:, order], v[:, order]

    u = np.zeros((3, 3))
    scale = max(sigma[0], 1.0)
    good = []
    for k in range(3):
        if sigma[k] > 1e-13 * scale:
            u[:, k] = w[:, k] / sigma[k]
            good.append(k)
    if len(good) < 3:
        _complete_basis(u, good)
    return u, sigma, v


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    m = [[int(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    if any(len(r) != ncols for r in m):
        raise DimensionMismatch("rows have different lengths")
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            lead = m[i][col]
            for j in range(col + 1, ncols):
                num = p * m[i][j] - lead * m[rank][j]
                q, r = divmod(num, prev)
                if r:
                    raise ArithmeticError("Bareiss division not exact")
                m[i][j] = q
            m[i][col] = 0
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


@dataclass(frozen=True)
class LPProblem:
    """Feasibility problem ``A x = b, x >= 0``; an optional cost ``c`` is minimized."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray | None = None

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise DimensionMismatch(f"A has shape {A.shape} but b has length {b.shape[0]}")
        if A.shape[0] > A.shape[1]:
            raise DimensionMismatch("more equations than variables")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        if self.c is not None:
            c = np.asarray(self.c, dtype=float).reshape(-1)
            if c.shape[0] != A.shape[1]:
                raise DimensionMismatch("cost vector length does not match A")
            object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class Feasible:
    x: np.ndarray


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: ``y @ A <= 0`` componentwise and ``y @ b > 0``."""

    y: np.ndarray


LPOutcome = Feasible | Infeasible


def _pivot(t: np.ndarray, r: int, c: int) -> None:
    t[r] /= t[r, c]
    col = t[:, c].copy()
    col[r] = 0.0
    t -= np.outer(col, t[r])


def _simplex(t: np.ndarray, basis: list[int], cost: np.ndarray, allowed: int) -> None:
    """Bland's-rule primal simplex on the constraint rows of tableau ``t``.

    Only columns ``< allowed`` may enter. Raises LPUnbounded.
    """
    m = t.shape[0]
    for _ in range(50_000):
        reduced = cost - cost[basis] @ t[:, :-1]
        entering = next((j for j in range(allowed) if reduced[j] < -LP_PIVOT_TOL), None)
        if entering is None:
            return
        col = t[:, entering]
        best, leave = None, None
        for i in range(m):
            if col[i] > LP_PIVOT_TOL:
                ratio = t[i, -1] / col[i]
                if (best is None or ratio < best - 1e-15
                        or (abs(ratio - best) <= 1e-15 and basis[i] < basis[leave])):
                    best, leave = ratio, i
        if leave is None:
            raise LPUnbounded("objective is unbounded below")
        _pivot(t, leave, entering)
        basis[leave] = entering
    raise ConvergenceDefect("simplex exceeded its pivot budget")


def lp_solve(p: LPProblem) -> LPOutcome:
    """Two-phase dense simplex. Deterministic: Bland's rule, no randomness."""
    A, b = p.A, p.b
    m, n = A.shape
    flip = np.where(b < 0, -1.0, 1.0)
    t = np.zeros((m, n + m + 1))
    t[:, :n] = A * flip[:, None]
    t[:, n:n + m] = np.eye(m)
    t[:, -1] = b * flip
    basis = list(range(n, n + m))

    phase1 = np.zeros(n + m)
    phase1[n:] = 1.0
    _simplex(t, basis, phase1, n + m)
    infeas = float(phase1[basis] @ t[:, -1])
    scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
    if infeas > LP_FEAS_TOL * scale:
        w = phase1[basis] @ t[:, n:n + m]
        return Infeasible(y=w * flip)

    # Drive remaining artificials out of the basis; rows where that fails are redundant.
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if abs(t[i, j]) > 1e-9), None)
            if j is not None:
                _pivot(t, i, j)
                basis[i] = j

    if p.c is not None:
        cost = np.concatenate([p.c, np.zeros(m)])
        _simplex(t, basis, cost, n)

    x = np.zeros(n)
    cols = [j for j in basis if j < n]
    if cols:
        # Re-solve the final basis against the original data to shed pivoting error.
        xb, *_ = np.linalg.lstsq(A[:, cols], b, rcond=None)
        if np.all(xb >= -1e-12):
            x[cols] = xb
        else:
            for i, j in enumerate(basis):
                if j < n:
                    x[j] = t[i, -1]
    x[(x < 0) & (x > -1e-12)] = 0.0
    return Feasible(x=x)
