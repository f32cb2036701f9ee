import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avlgram.fingerprints import MERSENNE61, DedupMap, FingerprintContext


def test_empty_string_is_zero():
    ctx = FingerprintContext(seed=1)
    assert ctx.of_bytes(b"") == 0


def test_small_modulus_example():
    ctx = FingerprintContext(q=7, r=3)
    assert ctx.of_bytes([1, 2]) == (1 * 3 + 2) % 7


def test_concat_small_example():
    ctx = FingerprintContext(q=7, r=3)
    fx = ctx.of_bytes([1])
    fy = ctx.of_bytes([2])
    assert ctx.concat(fx, 1, fy) == 5 == ctx.of_bytes([1, 2])


def test_concat_with_empty_is_identity():
    ctx = FingerprintContext(seed=9)
    fx = ctx.of_bytes(b"hello")
    assert ctx.concat(fx, 0, 0) == fx


def test_equal_strings_equal_fingerprints():
    ctx = FingerprintContext(seed=2)
    rng = random.Random(5)
    for _ in range(2000):
        s = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 40)))
        assert ctx.of_bytes(s) == ctx.of_bytes(bytearray(s))


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200), st.binary(max_size=200))
def test_concat_homomorphism(u, v):
    ctx = FingerprintContext(seed=3)
    assert ctx.concat(ctx.of_bytes(u), len(v), ctx.of_bytes(v)) == ctx.of_bytes(u + v)


def test_power_cache_consistency():
    ctx = FingerprintContext(seed=4)
    for e in (0, 1, 2, 63, 1000, 2**20):
        assert ctx.power(e) == pow(ctx.r, e, ctx.q)


def test_base_range_and_determinism():
    a = FingerprintContext(seed=7)
    b = FingerprintContext(seed=7)
    assert a.r == b.r
    assert 1 <= a.r < a.q == MERSENNE61


def test_collision_rarity():
    # Distinct equal-length strings should essentially never collide at
    # q = 2^61 - 1: the union bound over this many trials is far below 1.
    ctx = FingerprintContext(seed=8)
    rng = random.Random(6)
    collisions = 0
    for _ in range(20_000):
        n = rng.randrange(1, 64)
        u = bytes(rng.randrange(4) for _ in range(n))
        v = bytes(rng.randrange(4) for _ in range(n))
        if u != v and ctx.of_bytes(u) == ctx.of_bytes(v):
            collisions += 1
    assert collisions == 0


def test_dedup_never_stores_at_zero():
    m = DedupMap(0.0, seed=1)
    for k in range(100):
        assert not m.offer(k, fp=k, length=1)
    assert len(m) == 0


def test_dedup_always_stores_at_one():
    m = DedupMap(1.0, seed=1)
    for k in range(100):
        assert m.offer(k, fp=k, length=1)
    assert len(m) == 100


def test_dedup_insert_then_find():
    m = DedupMap(1.0, seed=1)
    m.offer(42, fp=777, length=9)
    assert m.lookup(777, 9) == 42


def test_dedup_length_guard():
    m = DedupMap(1.0, seed=1)
    m.offer(42, fp=777, length=9)
    assert m.lookup(777, 8) is None
    assert not m.has_length(8)
    assert m.has_length(9)


def test_dedup_first_writer_wins():
    m = DedupMap(1.0, seed=1)
    assert m.offer(1, fp=5, length=3)
    assert not m.offer(2, fp=5, length=3)
    assert m.lookup(5, 3) == 1


def test_dedup_acceptance_fraction():
    m = DedupMap(0.5, seed=11)
    stored = sum(m.offer(k, fp=k, length=7) for k in range(100_000))
    assert abs(stored / 100_000 - 0.5) < 0.01


def test_dedup_deterministic_given_seed():
    a = DedupMap(0.3, seed=13)
    b = DedupMap(0.3, seed=13)
    ra = [a.offer(k, fp=k, length=2) for k in range(1000)]
    rb = [b.offer(k, fp=k, length=2) for k in range(1000)]
    assert ra == rb


def test_dedup_rejects_bad_probability():
    with pytest.raises(ValueError):
        DedupMap(1.5, seed=0)
