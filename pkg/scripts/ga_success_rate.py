"""Fraction of GA seeds that reach 0.999 x the exhaustive optimum, per mutation rate.

16-bit device genome at 300 GHz, population 20, 100 generations.

Usage: python scripts/ga_success_rate.py [--seeds 200] [--rates 0.001 0.0625]
"""
import argparse

from nanoopt.globalopt import GaConfig, evolve
from nanoopt.harness.oracle import brute_force_oracle
from nanoopt.qwdevice import DEFAULT_BOUNDS, BiasCondition, make_fitness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--rates", type=float, nargs="+", default=[0.001, 1 / 16])
    args = ap.parse_args()

    fit = make_fitness(BiasCondition(0.75e5, 300e9))
    target = 0.999 * brute_force_oracle(fit, 16).best_fitness
    for rate in args.rates:
        hits = sum(
            evolve(fit, GaConfig(DEFAULT_BOUNDS, (4, 4, 4, 4), mutation_rate=rate, seed=s)).best_fitness >= target
            for s in range(args.seeds)
        )
        print(f"mutation rate {rate:.4g}: {hits}/{args.seeds} = {100 * hits / args.seeds:.1f}%")


if __name__ == "__main__":
    main()
