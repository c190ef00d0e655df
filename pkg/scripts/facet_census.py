"""Facet family census: per-class counts, tight-vertex profile, certification report."""
import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from cliffpoly import clifford, polytope


@dataclass
class Config:
    probes: int = 10_000
    seed: int = 0


def main(cfg: Config) -> None:
    fam = polytope.facet_family()
    verts = clifford.all_matrices()
    profile = Counter()
    for f in fam:
        tight = int(np.sum(np.einsum("ij,kij->k", f.normal, verts) == 1))
        profile[(f.class_tag, tight)] += 1
    print(f"facets: {len(fam)}")
    for (tag, tight), n in sorted(profile.items()):
        print(f"  class {tag:3s} tight vertices {tight:2d}: {n} facets")
    rep = polytope.verify_facets(fam, n_probe=cfg.probes, seed=cfg.seed)
    for name, ok in rep.checks.items():
        print(f"  check {name:12s} {'pass' if ok else 'FAIL'}")
    for msg in rep.failures:
        print("  ", msg)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--probes", type=int, default=Config.probes)
    ap.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(ap.parse_args())))
