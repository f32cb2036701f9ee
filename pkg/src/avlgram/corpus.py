"""Synthetic repetitive corpora for desk-scale benchmarks."""

from __future__ import annotations

import math
import random


def repetitive_bytes(seed_size: int, copies: int, mutation_rate: float,
                     seed: int = 0, alphabet: int = 4) -> bytes:
    """A random seed block followed by copies with point mutations.

    The output holds ``copies`` blocks in total, the first being the seed
    itself; every later block is the seed with each position independently
    mutated with probability ``mutation_rate`` (to a different symbol).
    Deterministic for a fixed RNG seed.
    """
    if seed_size < 1 or copies < 1:
        raise ValueError("seed_size and copies must be positive")
    if not 0.0 <= mutation_rate <= 1.0:
        raise ValueError("mutation_rate must lie in [0, 1]")
    if alphabet < 2 or alphabet > 256:
        raise ValueError("alphabet must lie in [2, 256]")
    rng = random.Random(seed)
    base = bytes(rng.randrange(alphabet) for _ in range(seed_size))
    parts = [base]
    if mutation_rate == 0.0:
        parts.extend(base for _ in range(copies - 1))
        return b"".join(parts)
    log1m = math.log1p(-mutation_rate) if mutation_rate < 1.0 else None
    for _ in range(copies - 1):
        buf = bytearray(base)
        if log1m is None:
            hits = range(seed_size)
        else:
            # Geometric gaps give the exact Bernoulli process in O(#hits).
            hits = []
            pos = -1
            while True:
                u = rng.random()
                pos += 1 + int(math.log(1.0 - u) / log1m)
                if pos >= seed_size:
                    break
                hits.append(pos)
        for pos in hits:
            buf[pos] = (buf[pos] + rng.randrange(1, alphabet)) % alphabet
        parts.append(bytes(buf))
    return b"".join(parts)


def write_corpus_file(path: str, seed_size: int, copies: int, mutation_rate: float,
                      seed: int = 0, alphabet: int = 4) -> int:
    data = repetitive_bytes(seed_size, copies, mutation_rate, seed, alphabet)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)
