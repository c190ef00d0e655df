"""Threshold value three ways: closed form, random-restart search, Haar sampling."""
import argparse
import math
import time
from dataclasses import dataclass

from cliffpoly import polytope, threshold


@dataclass
class Config:
    restarts: int = 200
    haar_samples: int = 1_000_000
    seed: int = 0


def main(cfg: Config) -> None:
    target = 2 * math.sqrt(2) - 1
    for name, b in (("B1", polytope.B1), ("B2", polytope.B2)):
        t0 = time.perf_counter()
        closed = threshold.so3_max_inner(b).value
        search = threshold.random_restart_max(b, cfg.restarts, cfg.seed).value
        sampled = threshold.haar_sample_max(b, cfg.haar_samples, cfg.seed)
        print(f"{name}: procrustes={closed:.15f} restarts={search:.15f} haar_max={sampled:.6f} "
              f"({time.perf_counter() - t0:.1f}s)")
    print(f"2*sqrt(2)-1 = {target:.15f}")
    nb = threshold.noise_bounds()
    print(f"theta_hat = {nb.theta_hat:.15f}")
    print(f"worst-case bracket: [{nb.worst_case_lower:.6f}, {nb.worst_case_upper:.6f}]")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--restarts", type=int, default=Config.restarts)
    ap.add_argument("--haar-samples", type=int, default=Config.haar_samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(ap.parse_args())))
