"""Minimal noise of z-rotations over one period, and the Haar distribution of min_noise."""
import argparse
import math
from dataclasses import dataclass

import numpy as np

from cliffpoly import bloch, polytope


@dataclass
class Config:
    angles: int = 33
    haar_samples: int = 20_000
    seed: int = 0


def main(cfg: Config) -> None:
    print("angle/pi   p_min")
    for th in np.linspace(0.0, math.pi, cfg.angles):
        p = polytope.min_noise(bloch.unitary_to_rotation(bloch.rz(th)))
        print(f"{th / math.pi:8.4f}   {p:.6f}")
    rs = bloch.haar_rotations(np.random.default_rng(cfg.seed), cfg.haar_samples)
    ps = np.array([polytope.min_noise(r) for r in rs])
    qs = np.quantile(ps, [0.5, 0.9, 0.99, 1.0])
    print(f"Haar p_min quantiles 50/90/99/100%: {np.round(qs, 4).tolist()} (theta_hat={polytope.THETA_HAT:.4f})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--angles", type=int, default=Config.angles)
    ap.add_argument("--haar-samples", type=int, default=Config.haar_samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(ap.parse_args())))
