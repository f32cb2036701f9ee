"""Karp-Rabin fingerprint algebra and the sampled fingerprint registry."""

from __future__ import annotations

import random

# Mersenne prime 2^61 - 1: fingerprints fit in 64 bits and Python's native
# integers absorb the double-width intermediate products.
MERSENNE61 = (1 << 61) - 1


class FingerprintContext:
    """Modulus, random base, and a cache of base powers.

    The context is immutable after construction and may be shared freely.
    The base is drawn from a seeded RNG so runs are reproducible.
    """

    __slots__ = ("q", "r", "_powers")

    def __init__(self, seed: int = 0, q: int = MERSENNE61, r: int | None = None):
        if q < 3:
            raise ValueError("modulus too small")
        self.q = q
        self.r = random.Random(seed).randrange(1, q) if r is None else r
        if not 1 <= self.r < q:
            raise ValueError("base must lie in [1, q)")
        self._powers = {0: 1, 1: self.r}

    def power(self, e: int) -> int:
        """r**e mod q, memoized per exponent."""
        p = self._powers.get(e)
        if p is None:
            p = pow(self.r, e, self.q)
            self._powers[e] = p
        return p

    def of_bytes(self, s) -> int:
        """Fingerprint of a symbol sequence; the empty sequence maps to 0."""
        q = self.q
        r = self.r
        v = 0
        for c in s:
            v = (v * r + c) % q
        return v

    def concat(self, fx: int, leny: int, fy: int) -> int:
        """Fingerprint of xy given fp(x), len(y) and fp(y)."""
        return (fx * self.power(leny) + fy) % self.q


class DedupMap:
    """Sampled map from (fingerprint, expansion length) to a rule id.

    Each offered rule is stored with probability ``sample_prob``; misses are
    harmless (the caller just creates a fresh rule). Keys include the
    expansion length because equal fingerprints only certify equality for
    strings of the same length. First writer wins: an existing entry is
    never remapped.
    """

    __slots__ = ("entries", "sample_prob", "_rng", "_lengths")

    def __init__(self, sample_prob: float, seed: int = 0):
        if not 0.0 <= sample_prob <= 1.0:
            raise ValueError("sample_prob must lie in [0, 1]")
        self.entries: dict[tuple[int, int], int] = {}
        self.sample_prob = sample_prob
        self._rng = random.Random(seed)
        self._lengths: set[int] = set()

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, fp: int, length: int) -> int | None:
        return self.entries.get((fp, length))

    def has_length(self, length: int) -> bool:
        """Cheap pre-filter: can any stored entry match this length?"""
        return length in self._lengths

    def offer(self, nt: int, fp: int, length: int) -> bool:
        """Store (fp, length) -> nt with probability sample_prob."""
        return self.offer_deferred(nt, length, lambda: fp)

    def offer_deferred(self, nt: int, length: int, fp_fn) -> bool:
        """Like offer, but the fingerprint is only computed when the draw
        succeeds (computing it can cost an expansion)."""
        p = self.sample_prob
        if p <= 0.0:
            return False
        if p < 1.0 and self._rng.random() >= p:
            return False
        key = (fp_fn(), length)
        if key in self.entries:
            return False
        self.entries[key] = nt
        self._lengths.add(length)
        return True
