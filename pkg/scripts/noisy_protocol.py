"""Share-protocol Monte Carlo vs exact density-matrix probability on noisy T circuits.

Sweeps the noise level from theta_hat upwards; below theta_hat the gate has no
Clifford mixture and the protocol refuses to run.
"""
import argparse
import math
from dataclasses import dataclass, field

import numpy as np

from cliffpoly import circuit, polytope, shares, sim


@dataclass
class Config:
    width: int = 3
    depth: int = 12
    n_noisy: int = 2
    runs: int = 100_000
    noise: list[float] = field(default_factory=lambda: [polytope.THETA_HAT, 0.5, 0.7, 0.9])
    seed: int = 0


def main(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    base = circuit.random_clifford_circuit(cfg.width, cfg.depth, rng)
    places = [int(rng.integers(cfg.width)) for _ in range(cfg.n_noisy)]
    bits = [int(x) for x in rng.integers(0, 2, cfg.width)]
    mask = int(rng.integers(2 ** cfg.width))
    print(f"width={cfg.width} depth={cfg.depth} noisy T on qubits {places} input={bits} alice_mask={mask:b}")
    for p in cfg.noise:
        c = circuit.insert_gates(base, [circuit.Noisy1Q(q, "t", p) for q in places],
                                 np.random.default_rng(cfg.seed + 1))
        exact = sim.dm_run(c, bits)
        freq = shares.sample_protocol(c, bits, mask, cfg.runs, seed=cfg.seed)
        sd = math.sqrt(max(exact * (1 - exact), 1e-300) / cfg.runs)
        print(f"p={p:.4f} exact={exact:.5f} protocol={freq:.5f} deviation={(freq - exact) / sd:+.2f} sigma")
    try:
        shares.run_protocol(circuit.Circuit(1, (circuit.Noisy1Q(0, "t", 0.44),), 0), "0", 1)
    except polytope.NotRepresentable as exc:
        print(f"p=0.44 < theta_hat: refused, facet {exc.facet.id} reaches {exc.value:.4f} > 1")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--width", type=int, default=Config.width)
    ap.add_argument("--depth", type=int, default=Config.depth)
    ap.add_argument("--n-noisy", type=int, default=Config.n_noisy)
    ap.add_argument("--runs", type=int, default=Config.runs)
    ap.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(ap.parse_args())))
