"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Lines are collected in RESULTS and printed in the pytest terminal summary
(see conftest.py). Running this file directly prints them as well.
"""
import math
import time

import numpy as np
import pytest

from cliffpoly import bloch, circuit, clifford, polytope, shares, sim, threshold
from cliffpoly.polytope import THETA_HAT

RESULTS: dict[int, str] = {}

# Pinned tolerances and budgets.
TOL_THETA = 1e-12
TOL_PROCRUSTES = 1e-9
TOL_RESTART = 1e-6
TOL_RECON = 1e-9
TOL_PMIN = 1e-9
TOL_CONST = 1e-12
MARGIN = 1e-6
N_SIGMA = 4.0
N_RUNS = 100_000


def report(n: int, name: str, ok: bool, detail: str) -> None:
    RESULTS[n] = f"acceptance {n} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def test_1_threshold_value():
    t0 = time.perf_counter()
    th = threshold.compute_theta_hat()
    b2 = threshold.so3_max_inner(polytope.B2).value
    b1 = threshold.so3_max_inner(polytope.B1).value
    rr = threshold.random_restart_max(polytope.B2, restarts=200, seed=0).value
    dt = time.perf_counter() - t0
    errs = (abs(th - (6 - 2 * math.sqrt(2)) / 7), abs(b2 - (2 * math.sqrt(2) - 1)),
            abs(rr - (2 * math.sqrt(2) - 1)), abs(b1 - math.sqrt(3)))
    ok = (errs[0] <= TOL_THETA and errs[1] <= TOL_PROCRUSTES and errs[2] <= TOL_RESTART
          and errs[3] <= TOL_PROCRUSTES and dt < 5)
    report(1, "threshold value", ok,
           f"theta_hat={th:.15f} err={errs[0]:.1e}; B2 procrustes err={errs[1]:.1e}, "
           f"200-restart err={errs[2]:.1e}; B1 err={errs[3]:.1e}; {dt:.2f}s < 5s")


def test_2_facet_certification():
    t0 = time.perf_counter()
    rep = polytope.verify_facets(n_probe=10_000, seed=0)
    rng = np.random.default_rng(2)
    s_star, _ = threshold.extremal_gate()
    mats = clifford.all_matrices().astype(float)
    i, j = rng.integers(24, size=(2, 10_000))
    orbit = (1 - THETA_HAT + 1e-3) * np.einsum("nab,bc,ncd->nad", mats[i], s_star, mats[j])
    n_inside = int(polytope.in_polytope(orbit).sum())
    dt = time.perf_counter() - t0
    ok = rep.ok and rep.n_facets == 120 and n_inside == 0 and dt < 60
    failed = [k for k, v in rep.checks.items() if not v]
    report(2, "facet certification", ok,
           f"{rep.n_facets} facets {rep.class_counts}; checks failed={failed or 'none'}; "
           f"orbit points inside={n_inside}/10000; {dt:.2f}s < 60s")


def test_3_decomposition_soundness():
    rng = np.random.default_rng(3)
    worst_recon, worst_sum, n_above, n_below, bad = 0.0, 0.0, 0, 0, 0
    for r in bloch.haar_rotations(rng, 1000):
        pmin = polytope.min_noise(r)
        if rng.random() < 0.5 or pmin < MARGIN:
            p = rng.uniform(pmin + MARGIN, 1.0)
            mix = polytope.decompose(r, p)
            worst_recon = max(worst_recon, float(np.abs(mix.matrix() - (1 - p) * r).max()))
            worst_sum = max(worst_sum, abs(float(mix.weights.sum()) - 1))
            n_above += 1
        else:
            p = rng.uniform(0.0, pmin - MARGIN)
            try:
                polytope.decompose(r, p)
                bad += 1
            except polytope.NotRepresentable as exc:
                bad += exc.value <= 1
            n_below += 1
    r_t = bloch.unitary_to_rotation(bloch.T)
    t_err = abs(polytope.min_noise(r_t) - THETA_HAT)
    clifford_zero = all(polytope.min_noise(e.mat.astype(float)) == 0.0 for e in clifford.enumerate_group())
    ok = worst_recon <= TOL_RECON and worst_sum <= TOL_RECON and bad == 0 and t_err <= TOL_PMIN and clifford_zero
    report(3, "decomposition soundness", ok,
           f"{n_above} feasible, max recon err={worst_recon:.1e}, max |sum w - 1|={worst_sum:.1e}; "
           f"{n_below} infeasible, wrong verdicts={bad}; |pmin(T)-theta_hat|={t_err:.1e}; "
           f"pmin=0 on all 24 Cliffords: {clifford_zero}")


def test_4_parity_theorem():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    mismatches, n_balanced = 0, 0
    for width in (1, 2, 3, 4):
        for _ in range(100):
            c = circuit.random_clifford_circuit(width, int(rng.integers(0, 31)), rng)
            form = shares.extract_parity(c)
            tt = shares.truth_table(c)
            if form is shares.BALANCED:
                n_balanced += 1
                mismatches += any(abs(p - 0.5) > 1e-12 for p in tt)
            else:
                for x, p in enumerate(tt):
                    mismatches += abs(p - form.evaluate([(x >> j) & 1 for j in range(width)])) > 1e-12
    dt = time.perf_counter() - t0
    report(4, "parity theorem", mismatches == 0 and dt < 30,
           f"400 circuits, widths 1-4, {n_balanced} balanced; mismatches={mismatches}; {dt:.2f}s < 30s")


def test_5_one_bit_protocol():
    rng = np.random.default_rng(5)
    bad_out, bad_comm = 0, 0
    for _ in range(200):
        width = int(rng.integers(1, 6))
        c = circuit.random_clifford_circuit(width, int(rng.integers(0, 31)), rng)
        bits = [int(x) for x in rng.integers(0, 2, width)]
        res = shares.run_protocol(c, bits, int(rng.integers(2 ** width)), seed=int(rng.integers(2**31)))
        bad_out += res.output != shares.decide(sim.dm_run(c, bits))
        bad_comm += res.comm_bits != 1
    bad_perfect = 0
    for s in (1, 2, 3):
        for _ in range(20):
            width = int(rng.integers(1, 5))
            c = circuit.random_clifford_circuit(width, int(rng.integers(0, 21)), rng)
            extra = [circuit.Perfect1Q(int(rng.integers(width)), bloch.haar_unitary(rng)) for _ in range(s)]
            c = circuit.insert_gates(c, extra, rng)
            bits = [int(x) for x in rng.integers(0, 2, width)]
            res = shares.run_protocol(c, bits, int(rng.integers(2 ** width)))
            bad_perfect += res.comm_bits != 2 * s + 1
            bad_out += abs(res.prob_one - sim.dm_run(c, bits)) > 1e-9
    ok = bad_out == 0 and bad_comm == 0 and bad_perfect == 0
    report(5, "one-bit protocol", ok,
           f"200 Clifford circuits: wrong outputs={bad_out}, comm_bits!=1: {bad_comm}; "
           f"60 circuits with s in {{1,2,3}} perfect gates: comm_bits!=2s+1: {bad_perfect}")


def noisy_circuits(n: int, seed: int):
    """Random 3-qubit circuits with 1-3 Noisy1Q(T, theta_hat) gates whose output probability
    is not 0, 1/2 or 1 (degenerate cases would not exercise the noise)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        c = circuit.random_clifford_circuit(3, int(rng.integers(4, 16)), rng)
        extra = [circuit.Noisy1Q(int(rng.integers(3)), "t", THETA_HAT) for _ in range(int(rng.integers(1, 4)))]
        c = circuit.insert_gates(c, extra, rng)
        bits = [int(x) for x in rng.integers(0, 2, 3)]
        mask = int(rng.integers(8))
        p = sim.dm_run(c, bits)
        if min(abs(p - v) for v in (0.0, 0.5, 1.0)) > 1e-6:
            out.append((c, bits, mask, p))
    return out


def test_6_noisy_circuit_equivalence():
    t0 = time.perf_counter()
    worst = 0.0
    for k, (c, bits, mask, p) in enumerate(noisy_circuits(20, seed=6)):
        f = shares.sample_protocol(c, bits, mask, N_RUNS, seed=k)
        worst = max(worst, abs(f - p) / math.sqrt(p * (1 - p) / N_RUNS))
    dt = time.perf_counter() - t0
    report(6, "noisy-circuit equivalence", worst <= N_SIGMA and dt < 120,
           f"20 circuits x {N_RUNS} runs; worst deviation={worst:.2f} sigma <= {N_SIGMA}; {dt:.2f}s < 120s")


def test_7_section5_constants():
    rng = np.random.default_rng(7)
    low = threshold.worst_case_lower()
    low_err = abs(low - 0.5 * (1 - 1 / math.sqrt(3)))
    u = np.ones(3) / math.sqrt(3)
    p = low - 0.01
    hits = 0
    for _ in range(10):
        w = rng.normal(size=(100_000, 3))
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        hits += int(np.sum(np.abs((1 - p) * u + p * w).sum(axis=1) <= 1))
    up_err = abs(threshold.worst_case_upper() - 0.75 * THETA_HAT)
    twirl = 0.0
    for _ in range(100):
        uu = bloch.haar_unitary(rng)
        r = rng.normal(size=3)
        rho = bloch.density_from_bloch(r * rng.random() / np.linalg.norm(r))
        q = rng.random()
        twirl = max(twirl, float(np.abs(threshold.twirled_channel(uu, rho, q)
                                        - threshold.depolarized_channel(uu, rho, q)).max()))
    magic = 0.0
    for q in (0.0, 0.1, 0.4):
        vec, _ = threshold.magic_state(q)
        c = (1 - q) / ((1 - q / 2) * math.sqrt(2))
        magic = max(magic, float(np.abs(vec - [c, c, 0]).max()))
    ok = low_err <= TOL_CONST and hits == 0 and up_err <= TOL_CONST and twirl <= TOL_CONST and magic <= TOL_CONST
    report(7, "worst-case and magic-state constants", ok,
           f"lower={low:.12f} err={low_err:.1e}, audit counterexamples={hits}/1000000; "
           f"upper={threshold.worst_case_upper():.12f} err={up_err:.1e}; twirl err={twirl:.1e}; "
           f"magic err={magic:.1e}")


def test_8_backend_equivalence():
    rng = np.random.default_rng(8)
    bad, off_grid = 0, 0
    for _ in range(200):
        width = int(rng.integers(1, 6))
        c = circuit.random_clifford_circuit(width, int(rng.integers(0, 41)), rng)
        bits = [int(x) for x in rng.integers(0, 2, width)]
        pt, pd = sim.tab_run(c, bits), sim.dm_run(c, bits)
        off_grid += pt not in (0.0, 0.5, 1.0)
        bad += abs(pt - pd) > 1e-12
    report(8, "backend equivalence", bad == 0 and off_grid == 0,
           f"200 circuits, width <= 5: disagreements={bad}, tableau values off {{0,1/2,1}}={off_grid}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
