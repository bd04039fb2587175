"""``nanoopt`` command line: one subcommand per campaign task."""
from __future__ import annotations

import argparse
import logging
import sys

from ..errors import ConfigError
from .campaign import EXIT_CONFIG, run_campaign
from .config import METHODS, OBJECTIVES, SEED_ENV, TASKS, load_file, resolve

HELP = {
    "optimize": "local minimization of an analytic objective",
    "evolve": "genetic algorithm run",
    "anneal": "simulated annealing run",
    "sweep": "GA-optimized device parameters over a frequency list",
    "oracle": "exhaustive search over the genome space",
    "ljmin": "Lennard-Jones cluster minimization (writes XYZ)",
    "gradcheck": "analytic force vs finite differences",
}


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nanoopt",
        description="Local and global optimizers with quantum-well and LJ-cluster campaigns.",
        epilog=f"Seed precedence: ${SEED_ENV} > --seed > config file.",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    for task in TASKS:
        p = sub.add_parser(task, help=HELP[task])
        p.add_argument("--config", help="TOML config file or a previous run manifest (.json)")
        p.add_argument("--seed", type=_u64)
        p.add_argument("--out", help="main CSV output path; manifest is written next to it")
        p.add_argument("--quiet", action="store_true", default=None)
        p.add_argument("--objective", choices=OBJECTIVES)
        p.add_argument("--method", choices=METHODS)
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="SECTION.KEY=VALUE", help="override any config key (repeatable)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_cfg = load_file(args.config) if args.config else None
        cfg = resolve(args.task, file_cfg, args.overrides, seed=args.seed, out=args.out,
                      quiet=args.quiet, objective=args.objective, method=args.method)
    except ConfigError as exc:
        print(f"nanoopt: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.WARNING if cfg.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    return run_campaign(cfg)


if __name__ == "__main__":
    sys.exit(main())
