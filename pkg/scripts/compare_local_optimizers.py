"""Iteration counts of the four local methods on the shipped objectives.

Damped dynamics is compared with plain steepest descent at the same lambda;
no ranking is asserted, the counts are only reported.

Usage: python scripts/compare_local_optimizers.py [--lam 0.01] [--mu 0.5]
"""
import argparse

import numpy as np

from nanoopt.ljcluster import LJObjective, seed_geometry
from nanoopt.localopt import METHODS, LocalOptConfig
from nanoopt.objectives import Quadratic, Rosenbrock, TiltedDoubleWell
from nanoopt.rng import RngStream


def problems():
    rng = RngStream(0)
    yield "quadratic-2", Quadratic.reference(), np.zeros(2)
    yield "spd-10", Quadratic.random_spd(10, rng), np.ones(10)
    yield "rosenbrock", Rosenbrock(), np.array([-1.2, 1.0])
    yield "doublewell", TiltedDoubleWell(), np.array([1.5])
    yield "lj-7", LJObjective(7), seed_geometry(7, rng, min_dist=0.8).coordinates


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lam", type=float, default=0.01)
    ap.add_argument("--mu", type=float, default=0.5)
    ap.add_argument("--max-iter", type=int, default=200000)
    args = ap.parse_args()

    variants = {
        "sdm": LocalOptConfig(lam=args.lam, max_iter=args.max_iter),
        "sdm-fixed": LocalOptConfig(lam=args.lam, max_iter=args.max_iter, use_backtracking=False),
        "damped": LocalOptConfig(lam=args.lam, mu=args.mu, max_iter=args.max_iter),
        "cg": LocalOptConfig(max_iter=args.max_iter),
        "bfgs": LocalOptConfig(max_iter=args.max_iter),
    }
    print(f"{'problem':>12} " + " ".join(f"{k:>14}" for k in variants))
    for label, obj, x0 in problems():
        cells = []
        for name, cfg in variants.items():
            method = METHODS[name.split("-")[0]]
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    r = method(obj, x0, cfg)
                cells.append(f"{r.iterations}{'' if r.converged else '*'}")
            except FloatingPointError:
                cells.append("diverged")
        print(f"{label:>12} " + " ".join(f"{c:>14}" for c in cells))
    print("* = did not reach grad_tol")


if __name__ == "__main__":
    main()
