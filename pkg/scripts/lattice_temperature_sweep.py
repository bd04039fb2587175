"""Optimize T_e, n_2D and L_z at 300 GHz for a series of fixed lattice temperatures.

Usage: python scripts/lattice_temperature_sweep.py [--f0 0.75e5] [--out rows.csv]
"""
import argparse
import dataclasses

from nanoopt.globalopt import GaConfig
from nanoopt.qwdevice import DEFAULT_BOUNDS, DeviceSpace, optimize_at, write_sweep_csv

LATTICE_TEMPERATURES = (77, 100, 125, 150, 175, 200, 225, 250, 275, 300)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frequency", type=float, default=300e9, help="Hz")
    ap.add_argument("--f0", type=float, default=0.75e5, help="dc bias field, V/m")
    ap.add_argument("--bits", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = []
    print(f"{'mu_ac':>7} {'T_L (K)':>8} {'T_e (K)':>8} {'n2D (1e15/m2)':>14} {'Lz (nm)':>8}")
    for i, t_l in enumerate(LATTICE_TEMPERATURES):
        space = DeviceSpace(bits_per_param=(args.bits,) * 4, fixed={"t_l": float(t_l)})
        ga = GaConfig(DEFAULT_BOUNDS, space.bits_per_param, mutation_rate=1.0 / space.genome_length,
                      seed=args.seed + i)
        row, _ = optimize_at(args.frequency, args.f0, ga, space)
        rows.append(dataclasses.replace(row, seed=args.seed + i))
        print(f"{row.mu_ac_m2_per_vs:7.3f} {row.t_l_k:8.0f} {row.t_e_k:8.1f} "
              f"{row.n2d_per_m2 / 1e15:14.2f} {row.l_z_m * 1e9:8.1f}")
    if args.out:
        write_sweep_csv(rows, args.out)


if __name__ == "__main__":
    main()
