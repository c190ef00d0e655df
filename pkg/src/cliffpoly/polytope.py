"""The Clifford polytope P = conv(24 Clifford rotations) in R^{3x3}.

Its facets are the inequalities <F, M> <= 1 for F in {C1 B C2}, with B one of
B1, B1^T, B2. Membership is decided by an exact-integer facet scan; the LP is
only used to produce an explicit mixture over the vertices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from . import bloch, clifford
from .mathkit import Feasible, LPProblem, int_rank, lp_solve

B1 = np.array([[1, 0, 0], [1, 0, 0], [1, 0, 0]], dtype=np.int64)
B2 = np.array([[1, -1, 0], [1, 1, 0], [0, 0, -1]], dtype=np.int64)
BASE_FACETS = {"B1": B1, "B1T": B1.T.copy(), "B2": B2}
CLASS_ORDER = ("B1", "B1T", "B2")

THETA_HAT = (6 - 2 * math.sqrt(2)) / 7
BOUNDARY_TOL = 1e-9


class NotRepresentable(ValueError):
    def __init__(self, facet: "Facet", value: float):
        super().__init__(f"facet {facet.id} ({facet.class_tag}) has value {value!r} > 1")
        self.facet = facet
        self.value = value


@dataclass(frozen=True, eq=False)
class Facet:
    normal: np.ndarray
    class_tag: str
    id: int

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.normal.ravel())

    def __eq__(self, other):
        return isinstance(other, Facet) and self.key == other.key and self.class_tag == other.class_tag

    def __hash__(self):
        return hash(self.key)

    def to_line(self) -> str:
        rows = ",".join(str(v) for v in self.key)
        return f"facet id={self.id} class={self.class_tag} rows={rows}"


def parse_facet_lines(text: str) -> list[Facet]:
    """Inverse of :meth:`Facet.to_line`; blank lines and ``#`` comments are skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] != "facet":
                raise ValueError("expected 'facet'")
            kv = dict(f.split("=", 1) for f in fields[1:])
            rows = [int(v) for v in kv["rows"].split(",")]
            if len(rows) != 9:
                raise ValueError("rows must hold 9 integers")
            tag = kv["class"]
            if tag not in CLASS_ORDER:
                raise ValueError(f"unknown class {tag!r}")
            normal = np.array(rows, dtype=np.int64).reshape(3, 3)
            normal.setflags(write=False)
            out.append(Facet(normal, tag, int(kv["id"])))
        except (ValueError, KeyError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return out


@cache
def facet_family() -> tuple[Facet, ...]:
    mats = clifford.all_matrices()
    keyed = {}
    for tag in CLASS_ORDER:
        base = BASE_FACETS[tag]
        for c1 in mats:
            for c2 in mats:
                f = c1 @ base @ c2
                keyed.setdefault((CLASS_ORDER.index(tag), tuple(int(v) for v in f.ravel())), tag)
    out = []
    for k, (cls_key, key) in enumerate(sorted(keyed)):
        normal = np.array(key, dtype=np.int64).reshape(3, 3)
        normal.setflags(write=False)
        out.append(Facet(normal, CLASS_ORDER[cls_key], k))
    return tuple(out)


@cache
def _normals() -> np.ndarray:
    return np.array([f.key for f in facet_family()], dtype=np.int64)


def facet_values(m, facets=None) -> np.ndarray:
    """``<F, M>`` for each facet; ``m`` may be a single matrix or a stack (k, 3, 3)."""
    normals = _normals() if facets is None else np.array([f.key for f in facets], dtype=np.int64)
    m = np.asarray(m, dtype=float)
    flat = m.reshape(-1, 9)
    vals = flat @ normals.T.astype(float)
    return vals[0] if m.ndim == 2 else vals


def max_facet(m) -> tuple[Facet, float]:
    vals = facet_values(m)
    k = int(np.argmax(vals))
    return facet_family()[k], float(vals[k])


@dataclass
class CliffordMix:
    """Probability weights over the 24 Clifford rotations, indexed by canonical id."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (24,):
            raise ValueError("a Clifford mixture has 24 weights")
        if np.any(w < -1e-12) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights are not a probability distribution")
        self.weights = w

    def matrix(self) -> np.ndarray:
        return np.tensordot(self.weights, clifford.all_matrices().astype(float), axes=1)

    def support(self, cutoff: float = 1e-12) -> list[tuple[int, float]]:
        return [(k, float(w)) for k, w in enumerate(self.weights) if w >= cutoff]

    def probabilities(self) -> np.ndarray:
        p = np.clip(self.weights, 0.0, None)
        return p / p.sum()

    def sample(self, rng: np.random.Generator) -> clifford.CliffordElement:
        return clifford.element(int(rng.choice(24, p=self.probabilities())))

    def to_lines(self) -> list[str]:
        return [f"mix id={k} w={format(w, '.17g')}" for k, w in self.support()]

    @classmethod
    def point_mass(cls, k: int) -> "CliffordMix":
        w = np.zeros(24)
        w[k] = 1.0
        return cls(w)


@dataclass(frozen=True)
class Inside:
    mix: CliffordMix


@dataclass(frozen=True)
class Outside:
    violated: Facet
    value: float


MembershipVerdict = Inside | Outside


def _lp_mixture(m: np.ndarray) -> CliffordMix | None:
    verts = clifford.all_matrices().reshape(24, 9).T.astype(float)
    A = np.vstack([verts, np.ones((1, 24))])
    b = np.concatenate([m.ravel(), [1.0]])
    out = lp_solve(LPProblem(A, b))
    if not isinstance(out, Feasible):
        return None
    x = np.clip(out.x, 0.0, None)
    return CliffordMix(x / x.sum())


def membership(m, tol: float = BOUNDARY_TOL) -> MembershipVerdict:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise ValueError("membership needs a finite 3x3 matrix")
    facet, value = max_facet(m)
    if value > 1.0 + tol:
        return Outside(facet, value)
    vertex = clifford.closest_element(m, tol=0.0)
    if vertex is not None:
        return Inside(CliffordMix.point_mass(vertex.id))
    mix = _lp_mixture(m)
    if mix is None:
        raise RuntimeError("facet scan says inside but the LP found no mixture")
    return Inside(mix)


def decompose(r, p: float) -> CliffordMix:
    """Mixture of Clifford rotations whose average is ``(1 - p) R``.

    Raises NotRepresentable when ``p`` is below the gate's minimal noise.
    """
    r = bloch.check_rotation(r)
    p = bloch.check_probability(p)
    verdict = membership((1.0 - p) * r)
    if isinstance(verdict, Outside):
        raise NotRepresentable(verdict.violated, verdict.value)
    return verdict.mix


def min_noise(r) -> float:
    """Smallest depolarizing level at which ``R`` becomes a Clifford mixture."""
    r = bloch.check_rotation(r)
    if clifford.closest_element(r, tol=1e-12) is not None:
        return 0.0
    _, h = max_facet(r)
    return max(0.0, 1.0 - 1.0 / h)


def in_polytope(ms, tol: float = BOUNDARY_TOL) -> np.ndarray:
    """Vectorized facet-scan membership for a stack of matrices."""
    return np.max(facet_values(ms), axis=-1) <= 1.0 + tol


# Certification -------------------------------------------------------------

@dataclass
class VerificationReport:
    n_facets: int
    class_counts: dict[str, int]
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and all(self.checks.values())

    def fail(self, check: str, message: str) -> None:
        self.checks[check] = False
        self.failures.append(f"{check}: {message}")


def _vertex_values(normal: np.ndarray, verts: np.ndarray) -> np.ndarray:
    return np.einsum("ij,kij->k", normal, verts)


def verify_facets(facets=None, n_probe: int = 10_000, seed: int = 0) -> VerificationReport:
    """Exact-integer certification of a facet list for the Clifford polytope.

    Checks: (a) validity at every vertex, (b) >= 9 affinely independent tight
    vertices, (c) at most 3 tight vertices per permutation class, (d) every
    +-1 entry forces tightness of all vertices sharing it, (e) Haar rotations
    scaled by 1 - THETA_HAT pass the scan, (f) the 576 Clifford copies of the
    T rotation scaled by 1 - THETA_HAT + 1e-3 all fail it, plus membership of each normal in
    the closed-form family and absence of duplicates.
    """
    facets = list(facet_family() if facets is None else facets)
    verts = clifford.all_matrices()
    flat = verts.reshape(24, 9)
    cls = np.array([clifford.class_of(e) for e in clifford.enumerate_group()])
    counts = {tag: sum(f.class_tag == tag for f in facets) for tag in CLASS_ORDER}
    rep = VerificationReport(len(facets), counts)
    for name in ("family", "distinct", "validity", "rank", "class_bound", "entry_one", "probe", "orbit"):
        rep.checks[name] = True

    family = {(f.class_tag, f.key) for f in facet_family()}
    seen = set()
    for f in facets:
        if (f.class_tag, f.key) not in family:
            rep.fail("family", f"facet {f.id} is not of the form C1 {f.class_tag} C2")
        if f.key in seen:
            rep.fail("distinct", f"facet {f.id} duplicates an earlier facet")
        seen.add(f.key)

        vals = _vertex_values(f.normal, verts)
        if np.any(vals > 1):
            rep.fail("validity", f"facet {f.id} exceeds 1 at vertices {np.flatnonzero(vals > 1).tolist()}")
            continue
        tight = np.flatnonzero(vals == 1)
        if len(tight) < 9:
            rep.fail("rank", f"facet {f.id} has only {len(tight)} tight vertices")
        else:
            base = flat[tight[0]]
            diffs = [flat[k] - base for k in tight[1:]]
            if int_rank(diffs) != 8:
                rep.fail("rank", f"facet {f.id} tight vertices span affine dimension {int_rank(diffs)}")
        for sigma in range(1, 7):
            n_tight = int(np.sum(cls[tight] == sigma))
            if n_tight > 3:
                rep.fail("class_bound", f"facet {f.id} has {n_tight} tight vertices in class {sigma}")
        for i in range(3):
            for j in range(3):
                d = f.normal[i, j]
                if d in (-1, 1):
                    forced = np.flatnonzero(verts[:, i, j] == d)
                    if not np.all(vals[forced] == 1):
                        rep.fail("entry_one", f"facet {f.id} entry ({i},{j})={d} does not force tightness")

    if n_probe:
        rng = np.random.default_rng(seed)
        probes = (1.0 - THETA_HAT) * bloch.haar_rotations(rng, n_probe)
        normals = np.array([f.key for f in facets], dtype=float)
        worst = np.max(probes.reshape(-1, 9) @ normals.T, axis=1)
        bad = np.flatnonzero(worst > 1.0 + BOUNDARY_TOL)
        if len(bad):
            rep.fail("probe", f"{len(bad)} of {n_probe} scaled Haar rotations fall outside")

    # Every Clifford copy of the T rotation, scaled just past the threshold, must be cut off.
    r_t = bloch.unitary_to_rotation(bloch.T)
    orbit = np.array([c1 @ r_t @ c2 for c1 in verts for c2 in verts]) * (1.0 - THETA_HAT + 1e-3)
    normals = np.array([f.key for f in facets], dtype=float).reshape(-1, 9)
    worst = np.max(orbit.reshape(-1, 9) @ normals.T, axis=1, initial=-np.inf)
    n_in = int(np.sum(worst <= 1.0 + BOUNDARY_TOL))
    if n_in:
        rep.fail("orbit", f"{n_in} of {len(orbit)} points of the extremal orbit are not cut off")
    return rep
