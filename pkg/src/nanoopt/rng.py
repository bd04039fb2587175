"""Seeded, portable random stream shared by every stochastic routine.

Generator: PCG64 (PCG XSL-RR 128/64, O'Neill 2014) with the published
multiplier 0x2360ED051FC65DA44385DF649FCCF645. Each call advances the
128-bit LCG state (``state = state * MULT + inc mod 2**128``) and then emits
``rotr64(hi ^ lo, state >> 122)``.

Seeding does not go through numpy's SeedSequence. The 64-bit user seed
drives a SplitMix64 sequence; its first two outputs form the 128-bit state
(high word first) and the next two form the stream selector ``s``, with
``inc = (s << 1) | 1``. numpy's ``PCG64`` bit generator is then used only as
a fast engine for that exact recurrence.

Derived draws, all built on the raw 64-bit outputs in stream order:

* ``uniform()``   -- ``(u64 >> 11) * 2**-53``, in [0, 1)
* ``below(n)``    -- ``floor(uniform() * n)``
* ``normal()``    -- Box-Muller on two uniforms ``u1, u2``:
  ``r = sqrt(-2 ln(1 - u1))``; returns ``r cos(2 pi u2)`` and caches
  ``r sin(2 pi u2)`` for the next call.
"""
from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
MASK128 = (1 << 128) - 1
PCG_MULT = 0x2360ED051FC65DA44385DF649FCCF645

_BUFFER = 512
_INV53 = 2.0 ** -53


def splitmix64(x: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (new_state, output)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return x, z ^ (z >> 31)


def pcg_state_from_seed(seed: int) -> tuple[int, int]:
    """Map a 64-bit seed to the (state, inc) pair of the PCG64 generator."""
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    x = seed
    words = []
    for _ in range(4):
        x, out = splitmix64(x)
        words.append(out)
    state = (words[0] << 64) | words[1]
    stream = (words[2] << 64) | words[3]
    inc = ((stream << 1) | 1) & MASK128
    return state, inc


class RngStream:
    """Deterministic random stream; identical seed gives an identical sequence."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        state, inc = pcg_state_from_seed(self.seed)
        self._bitgen = np.random.PCG64()
        self._bitgen.state = {
            "bit_generator": "PCG64",
            "state": {"state": state, "inc": inc},
            "has_uint32": 0,
            "uinteger": 0,
        }
        self._buf: list[int] = []
        self._pos = 0
        self._spare_normal: float | None = None

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed})"

    def _refill(self) -> None:
        self._buf = self._bitgen.random_raw(_BUFFER).tolist()
        self._pos = 0

    def next_u64(self) -> int:
        if self._pos >= len(self._buf):
            self._refill()
        v = self._buf[self._pos]
        self._pos += 1
        return v

    def raw(self, n: int) -> np.ndarray:
        """Next ``n`` raw outputs as uint64, same order as repeated ``next_u64``."""
        out = np.empty(n, dtype=np.uint64)
        avail = len(self._buf) - self._pos
        take = min(avail, n)
        if take:
            out[:take] = self._buf[self._pos:self._pos + take]
            self._pos += take
        if n > take:
            out[take:] = self._bitgen.random_raw(n - take)
        return out

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * _INV53

    def uniforms(self, n: int) -> np.ndarray:
        """Vector of ``n`` uniforms, identical to ``n`` calls of ``uniform``."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _INV53

    def below(self, n: int) -> int:
        """Integer uniform on {0, ..., n-1}."""
        if n < 1:
            raise ValueError("below() needs n >= 1")
        return min(int(self.uniform() * n), n - 1)

    def normal(self) -> float:
        if self._spare_normal is not None:
            z, self._spare_normal = self._spare_normal, None
            return z
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log1p(-u1))
        theta = 2.0 * math.pi * u2
        self._spare_normal = r * math.sin(theta)
        return r * math.cos(theta)

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)])
