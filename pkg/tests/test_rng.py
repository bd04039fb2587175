import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nanoopt.rng import MASK64, MASK128, PCG_MULT, RngStream, pcg_state_from_seed, splitmix64


def reference_pcg64(seed, n):
    """Pure-Python XSL-RR 128/64, independent of numpy's engine."""
    state, inc = pcg_state_from_seed(seed)
    out = []
    for _ in range(n):
        state = (state * PCG_MULT + inc) & MASK128
        x = ((state >> 64) ^ state) & MASK64
        rot = state >> 122
        out.append(((x >> rot) | (x << ((64 - rot) & 63))) & MASK64)
    return out


def test_splitmix64_published_vector():
    # first outputs of SplitMix64 seeded with 1234567 (reference C implementation)
    x, out = splitmix64(1234567)
    assert out == 6457827717110365317
    x, out = splitmix64(x)
    assert out == 3203168211198807973


@pytest.mark.parametrize("seed", [0, 1, 42, 2**64 - 1])
def test_stream_matches_reference(seed):
    r = RngStream(seed)
    assert [r.next_u64() for _ in range(1500)] == reference_pcg64(seed, 1500)


def test_identical_seed_identical_stream():
    a, b = RngStream(99), RngStream(99)
    assert [a.uniform() for _ in range(100)] == [b.uniform() for _ in range(100)]
    assert RngStream(1).next_u64() != RngStream(2).next_u64()


def test_vector_draws_follow_scalar_order():
    a, b = RngStream(5), RngStream(5)
    a.uniform()
    b.uniform()
    v = a.uniforms(1000)
    assert v.tolist() == [b.uniform() for _ in range(1000)]
    assert a.uniform() == b.uniform()


def test_uniform_formula():
    r, ref = RngStream(11), reference_pcg64(11, 3)
    assert [r.uniform() for _ in range(3)] == [(u >> 11) * 2.0**-53 for u in ref]


def test_normal_box_muller():
    r = RngStream(3)
    u1, u2 = [(u >> 11) * 2.0**-53 for u in reference_pcg64(3, 2)]
    rad = math.sqrt(-2.0 * math.log1p(-u1))
    assert r.normal() == rad * math.cos(2 * math.pi * u2)
    assert r.normal() == rad * math.sin(2 * math.pi * u2)


def test_normal_moments():
    z = RngStream(8).normals(20000)
    assert abs(z.mean()) < 0.03
    assert abs(z.std() - 1.0) < 0.03


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 1000))
def test_below_in_range(seed, n):
    r = RngStream(seed)
    assert all(0 <= r.below(n) < n for _ in range(20))


def test_bad_seed_rejected():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(2**64)
