"""Pair-replacement grammar compressor, used as the size baseline.

Repeatedly replaces the most frequent adjacent symbol pair with a fresh
rule until no pair occurs twice. Replacement counts non-overlapping
occurrences (a run of equal symbols of length L contributes floor(L/2)),
and ties go to the lexicographically smallest (left, right) pair, making
the output deterministic. The sequence lives in a doubly linked list with
per-pair occurrence sets and a lazy max-heap, giving O(n log n) overall.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

# Pairs are packed into one int for cheap heap keys; symbol ids stay below
# 2^21 for any text under a gigabyte.
_SHIFT = 21
_MASK = (1 << _SHIFT) - 1


@dataclass(slots=True)
class RepairResult:
    rules: list[tuple[int, int]]  # rule t defines symbol 256 + t
    sequence: list[int]

    @property
    def size(self) -> int:
        return 2 * len(self.rules) + len(self.sequence)


def repair_size(result: RepairResult) -> int:
    """Total right-hand-side length plus the final sequence length."""
    return result.size


def repair_compress(data: bytes) -> RepairResult:
    if len(data) == 0:
        raise ValueError("empty text")
    seq = list(data)
    n = len(seq)
    nxt = list(range(1, n)) + [-1]
    prv = [-1] + list(range(n - 1))
    occ: dict[int, set[int]] = {}
    for p in range(n - 1):
        key = (seq[p] << _SHIFT) | seq[p + 1]
        s = occ.get(key)
        if s is None:
            occ[key] = {p}
        else:
            s.add(p)

    # Lazy max-heap over (negated count, packed pair). Adds push a fresh
    # entry; drops leave stale overestimates that get one corrective
    # re-push when popped, so validation is O(1).
    heap = [(-len(s), key) for key, s in occ.items() if len(s) >= 2]
    heapq.heapify(heap)

    rules: list[tuple[int, int]] = []
    while heap:
        negcount, key = heapq.heappop(heap)
        positions = occ.get(key)
        if positions is None or len(positions) < 2:
            continue
        if len(positions) != -negcount:
            heapq.heappush(heap, (-len(positions), key))
            continue
        a = key >> _SHIFT
        b = key & _MASK
        if a == b:
            # Overlaps happen only in runs: keep a greedy non-overlapping
            # subset, scanning left to right.
            chosen = []
            barrier = -1
            for p in sorted(positions):
                if p == barrier:
                    continue
                chosen.append(p)
                barrier = nxt[p]
            if len(chosen) < 2:
                continue
        else:
            chosen = sorted(positions)
        new_sym = 256 + len(rules)
        rules.append((a, b))
        for p in chosen:
            q = nxt[p]
            # The occurrence may have been consumed by a neighbor
            # replacement in this same pass (runs again).
            if q == -1 or seq[p] != a or seq[q] != b:
                continue
            lp = prv[p]
            rq = nxt[q]
            if lp != -1:
                k = (seq[lp] << _SHIFT) | a
                s = occ.get(k)
                if s is not None:
                    s.discard(lp)
                    if not s:
                        del occ[k]
            positions.discard(p)
            if rq != -1:
                k = (b << _SHIFT) | seq[rq]
                s = occ.get(k)
                if s is not None:
                    s.discard(q)
                    if not s:
                        del occ[k]
            seq[p] = new_sym
            nxt[p] = rq
            if rq != -1:
                prv[rq] = p
            seq[q] = -1
            nxt[q] = -1
            prv[q] = -1
            if lp != -1:
                k = (seq[lp] << _SHIFT) | new_sym
                s = occ.get(k)
                if s is None:
                    occ[k] = {lp}
                else:
                    s.add(lp)
                    heapq.heappush(heap, (-len(s), k))
            if rq != -1:
                k = (new_sym << _SHIFT) | seq[rq]
                s = occ.get(k)
                if s is None:
                    occ[k] = {p}
                else:
                    s.add(p)
                    heapq.heappush(heap, (-len(s), k))
        if not positions:
            occ.pop(key, None)

    out = []
    p = 0
    while p != -1 and seq[p] == -1:
        p = nxt[p]  # unreachable in practice: slot 0 always survives
    while p != -1:
        out.append(seq[p])
        p = nxt[p]
    return RepairResult(rules, out)


def repair_decode(result: RepairResult) -> bytes:
    """Inverse of repair_compress."""
    memo: dict[int, bytes] = {}

    def expand(sym: int) -> bytes:
        if sym < 256:
            return bytes((sym,))
        b = memo.get(sym)
        if b is None:
            l, r = result.rules[sym - 256]
            b = expand(l) + expand(r)
            memo[sym] = b
        return b

    return b"".join(expand(s) for s in result.sequence)
