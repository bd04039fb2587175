"""Exhaustive enumeration of small genome spaces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import OracleCapError
from ..globalopt.genetic import Genome

ORACLE_CAP = 24


@dataclass(frozen=True)
class OracleResult:
    best_genome: Genome
    best_fitness: float
    evaluations: int


def all_genomes(length: int) -> np.ndarray:
    """Every bit string of ``length`` as rows, ordered by binary value."""
    values = np.arange(1 << length, dtype=np.uint32)
    shifts = np.arange(length - 1, -1, -1, dtype=np.uint32)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8)


def brute_force_oracle(fitness: Callable[[Genome], float], genome_length: int) -> OracleResult:
    """Exact argmax of ``fitness`` over all 2**genome_length bit strings.

    Genomes are visited in increasing binary value and only a strictly
    better fitness replaces the incumbent, so ties go to the lowest value.
    Non-finite fitness values never win.
    """
    if genome_length > ORACLE_CAP:
        raise OracleCapError("oracle cap exceeded")
    if genome_length < 1:
        raise ValueError("genome_length must be >= 1")
    best_idx, best_f = 0, -np.inf
    genomes = all_genomes(genome_length)
    for idx, g in enumerate(genomes):
        f = float(fitness(g))
        if f > best_f:
            best_idx, best_f = idx, f
    if best_f == -np.inf:
        best_f = float("nan")
    return OracleResult(genomes[best_idx].copy(), best_f, len(genomes))
