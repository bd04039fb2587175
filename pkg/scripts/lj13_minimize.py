"""Minimize LJ-13 from a perturbed icosahedron with every local method; write the best geometry.

Usage: python scripts/lj13_minimize.py [--perturbation 0.05] [--seed 1] [--xyz lj13.xyz]
"""
import argparse
import time

import numpy as np

from nanoopt.ljcluster import LJObjective, icosahedron13, write_xyz
from nanoopt.localopt import METHODS, LocalOptConfig
from nanoopt.rng import RngStream


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--perturbation", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-iter", type=int, default=50000)
    ap.add_argument("--xyz")
    args = ap.parse_args()

    obj = LJObjective(13)
    x0 = icosahedron13() + args.perturbation * RngStream(args.seed).normals(39)
    cfg = LocalOptConfig(max_iter=args.max_iter)
    best = None
    print(f"{'method':>7} {'E/eps':>18} {'|force|':>10} {'iters':>7} {'status':>10} {'s':>6}")
    for name, method in METHODS.items():
        t0 = time.perf_counter()
        r = method(obj, x0, cfg)
        dt = time.perf_counter() - t0
        fn = float(np.linalg.norm(obj.force(r.best_point)))
        print(f"{name:>7} {r.best_value:18.12f} {fn:10.2e} {r.iterations:7d} {r.termination.value:>10} {dt:6.2f}")
        if best is None or r.best_value < best.best_value:
            best = r
    if args.xyz:
        write_xyz(args.xyz, best.best_point, best.best_value)


if __name__ == "__main__":
    main()
