"""GA-optimized device parameters at each listed frequency (10 bits per parameter).

Usage: python scripts/frequency_sweep.py [--f0 1e5] [--seed 0] [--out sweep.csv]
"""
import argparse

from nanoopt.globalopt import GaConfig
from nanoopt.qwdevice import DEFAULT_BOUNDS, SWEEP_FREQUENCIES_GHZ, DeviceSpace, sweep_optimize, write_sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f0", type=float, default=1.0e5, help="dc bias field, V/m")
    ap.add_argument("--bits", type=int, default=10)
    ap.add_argument("--generations", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()

    space = DeviceSpace(bits_per_param=(args.bits,) * 4)
    ga = GaConfig(DEFAULT_BOUNDS, space.bits_per_param, generations=args.generations,
                  mutation_rate=1.0 / space.genome_length, seed=args.seed)
    rows = sweep_optimize([f * 1e9 for f in SWEEP_FREQUENCIES_GHZ], args.f0, ga, space=space)
    print(f"{'f (GHz)':>8} {'n2D (1e15/m2)':>14} {'Lz (nm)':>8} {'T_L (K)':>8} {'T_e (K)':>8} "
          f"{'mu_ac':>7} {'f3dB (GHz)':>11}")
    for r in rows:
        print(f"{r.frequency_hz / 1e9:8.0f} {r.n2d_per_m2 / 1e15:14.2f} {r.l_z_m * 1e9:8.1f} "
              f"{r.t_l_k:8.1f} {r.t_e_k:8.1f} {r.mu_ac_m2_per_vs:7.3f} {r.f3db_hz / 1e9:11.1f}")
    if args.out:
        write_sweep_csv(rows, args.out)


if __name__ == "__main__":
    main()
