import random

import pytest

from avlgram.containers import BlockedArray, RootsSequence, SideTables


class NaiveRoots:
    """Reference model: a plain list of live (ell, nt) pairs."""

    def __init__(self):
        self.items = []

    def push(self, ell, nt):
        if self.items and ell <= self.items[-1][0]:
            raise ValueError("non-monotone roots")
        self.items.append((ell, nt))

    def range_enclosed(self, i, j):
        # Ordinals (1-based) of the roots lying fully inside [i..j].
        x = None
        prev = 0
        for t, (ell, _) in enumerate(self.items, start=1):
            if prev >= i - 1:
                x = t
                break
            prev = ell
        y = 0
        for t, (ell, _) in enumerate(self.items, start=1):
            if ell <= j:
                y = t
        if x is None or y < x:
            return None
        return x, y

    def replace(self, x, y, nt):
        ell = self.items[y - 1][0]
        self.items[x - 1 : y] = [(ell, nt)]


def test_blocked_array_matches_list():
    arr = BlockedArray()
    ref = []
    for k in range(1_000_000):
        arr.append(k)
        ref.append(k)
    assert len(arr) == len(ref)
    assert list(arr) == ref
    rng = random.Random(1)
    for _ in range(2000):
        i = rng.randrange(len(ref))
        assert arr[i] == ref[i]


def test_blocked_array_single_push():
    arr = BlockedArray()
    arr.append("x")
    assert len(arr) == 1
    assert arr[0] == "x"
    with pytest.raises(IndexError):
        arr[1]


def test_blocked_array_slack_bound():
    arr = BlockedArray()
    for k in range(50_000):
        arr.append(k)
        assert arr.slack <= arr.capacity / 16 + 64, (len(arr), arr.capacity)


def test_blocked_array_growth_never_moves_blocks():
    arr = BlockedArray()
    arr.append(0)
    first_block = arr._blocks[0]
    for k in range(1, 200_000):
        arr.append(k)
    assert arr._blocks[0] is first_block
    assert arr[0] == 0
    assert arr.block_count > 10


def test_roots_push_and_error():
    r = RootsSequence()
    r.push(2, 10)
    r.push(5, 11)
    assert list(r.live_items()) == [(2, 10), (5, 11)]
    with pytest.raises(ValueError, match="non-monotone roots"):
        r.push(5, 12)


def test_roots_range_examples():
    r = RootsSequence()
    for ell, nt in ((2, 0), (5, 1), (9, 2)):
        r.push(ell, nt)
    assert r.range_ordinals(1, 9) == (1, 3)
    assert r.range_ordinals(3, 9) == (2, 3)
    assert r.range_ordinals(4, 5) is None
    with pytest.raises(ValueError):
        r.range_enclosed(0, 9)
    with pytest.raises(ValueError):
        r.range_enclosed(1, 10)


def test_roots_replace_full_and_middle():
    r = RootsSequence()
    for ell, nt in ((2, 0), (5, 1), (9, 2)):
        r.push(ell, nt)
    span = r.range_enclosed(1, 9)
    r.replace_range(span[0], span[1], 9, 99)
    assert list(r.live_items()) == [(9, 99)]

    r = RootsSequence()
    for k in range(5):
        r.push(2 * (k + 1), k)
    span = r.range_enclosed(3, 8)  # encloses roots 2..4 (ells 4, 6, 8)
    r.replace_range(span[0], span[1], 8, 77)
    assert list(r.live_items()) == [(2, 0), (8, 77), (10, 4)]


def test_roots_replace_requires_matching_ell():
    r = RootsSequence()
    r.push(2, 0)
    r.push(5, 1)
    with pytest.raises(ValueError):
        r.replace_range(0, 1, 4, 9)


def test_roots_gc_noop_without_deletions():
    r = RootsSequence()
    for k in range(100):
        r.push(k + 1, k)
    r.gc()
    assert r.gc_runs == 0 or r.physical_size == 100
    assert list(r.live_items()) == [(k + 1, k) for k in range(100)]


def test_roots_gc_compacts_after_heavy_deletion():
    r = RootsSequence()
    n = 10_000
    for k in range(n):
        r.push(k + 1, k)
    span = r.range_enclosed(1, n - 1000)
    r.replace_range(span[0], span[1], n - 1000, 12345)
    # Burn accesses through predecessor searches until the collector runs.
    for _ in range(n):
        r.pred(n)
        if r.gc_runs:
            break
    assert r.gc_runs >= 1
    assert r.physical_size == len(r)
    assert r.deleted_access_counter < r.physical_size


def test_roots_differential_against_naive():
    rng = random.Random(7)
    ops = 0
    for _ in range(30):
        real = RootsSequence()
        ref = NaiveRoots()
        ell = 0
        while ops % 4000 != 3999:
            ops += 1
            action = rng.random()
            if action < 0.5 or len(ref.items) < 3:
                ell += rng.randrange(1, 10)
                nt = rng.randrange(10**6)
                real.push(ell, nt)
                ref.push(ell, nt)
            else:
                hi = ref.items[-1][0]
                i = rng.randrange(1, hi + 1)
                j = rng.randrange(i, hi + 1)
                span_real = real.range_enclosed(i, j)
                span_ref = ref.range_enclosed(i, j)
                assert (span_real is None) == (span_ref is None), (i, j)
                if span_real is None:
                    continue
                x, y = span_real
                got = real.live_slice(x, y)
                want = ref.items[span_ref[0] - 1 : span_ref[1]]
                assert got == want, (i, j)
                if rng.random() < 0.5 and got:
                    nt = rng.randrange(10**6)
                    real.replace_range(x, y, got[-1][0], nt)
                    ref.replace(span_ref[0], span_ref[1], nt)
            assert list(real.live_items()) == ref.items
        ops += 1


def test_roots_gc_amortized_bound():
    rng = random.Random(9)
    r = RootsSequence()
    ops = 0
    ell = 0
    for _ in range(20_000):
        ops += 1
        if rng.random() < 0.6 or len(r) < 2:
            ell += rng.randrange(1, 5)
            r.push(ell, ops)
        else:
            span = r.range_enclosed(1, ell)
            if span:
                x, y = span
                items = r.live_slice(x, y)
                r.replace_range(x, y, items[-1][0], ops)
    assert r.gc_moved_total <= 2 * ops


def test_side_tables_boundaries():
    t = SideTables()
    t.add_length(0, 254)
    t.add_length(1, 255)
    t.add_length(2, 300_000)
    assert t.length(0) == 254
    assert not t.is_long(0)
    assert t.length(1) == 255
    assert t.is_long(1)
    assert t.length(2) == 300_000
    assert t.overflow_count() == 2
    t.set_long_fp(1, 111)
    t.set_long_fp(2, 222)
    assert t.long_fp(1) == 111
    assert t.long_fp(2) == 222
    assert t.long_fp(0) is None
    with pytest.raises(IndexError):
        t.length(3)
    with pytest.raises(ValueError):
        t.set_long_fp(0, 5)


def test_side_tables_random_against_dict():
    rng = random.Random(11)
    t = SideTables()
    ref = {}
    for nt in range(10_000):
        length = rng.choice([rng.randrange(1, 255), rng.randrange(255, 10**6)])
        t.add_length(nt, length)
        ref[nt] = length
    for nt, want in ref.items():
        assert t.length(nt) == want
        assert t.is_long(nt) == (want >= 255)


def test_side_tables_sequential_ids_enforced():
    t = SideTables()
    t.add_length(0, 5)
    with pytest.raises(ValueError):
        t.add_length(2, 5)
