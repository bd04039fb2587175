from .annealing import AnnealReport, SaConfig, anneal, metropolis_accept
from .genetic import (
    GaConfig,
    GaReport,
    crossover,
    decode,
    encode,
    evolve,
    genome,
    genome_int,
    genome_str,
    mutate,
    mutate_many,
    roulette_weights,
    select,
)

__all__ = [
    "AnnealReport", "SaConfig", "anneal", "metropolis_accept",
    "GaConfig", "GaReport", "crossover", "decode", "encode", "evolve", "genome",
    "genome_int", "genome_str", "mutate", "mutate_many", "roulette_weights", "select",
]
