"""Storage machinery: blocked dynamic array, roots sequence, side tables.

These structures favor low peak memory over raw speed: the blocked array
grows by allocating one extra small block instead of doubling, the roots
sequence reuses its slots with lazy deletion and an amortized compaction
pass, and per-rule expansion lengths live in one byte with an overflow
table for the rare long rules.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

_FIRST_BLOCK = 64
_GROWTH_DIVISOR = 31

# Expansion lengths at or above this value spill into the overflow table;
# the byte slot holds the sentinel instead.
LONG_RULE_THRESHOLD = 255


class BlockedArray:
    """Append-only-growth array backed by many fixed blocks.

    Growth allocates exactly one new block of about capacity/31 slots, so
    slack (allocated but unused slots) stays below capacity/16 + 64 at every
    moment, including mid-growth, and existing elements are never copied.
    """

    __slots__ = ("_blocks", "_starts", "_size", "_capacity", "_tail", "_tail_start")

    def __init__(self):
        self._blocks: list[list] = []
        self._starts: list[int] = []
        self._size = 0
        self._capacity = 0
        self._tail: list | None = None
        self._tail_start = 0

    def __len__(self) -> int:
        return self._size

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def slack(self) -> int:
        return self._capacity - self._size

    @property
    def block_count(self) -> int:
        return len(self._blocks)

    def _grow(self):
        if self._capacity == 0:
            size = _FIRST_BLOCK
        else:
            size = -(-self._capacity // _GROWTH_DIVISOR)
        block = [None] * size
        self._blocks.append(block)
        self._starts.append(self._capacity)
        self._tail = block
        self._tail_start = self._capacity
        self._capacity += size

    def append(self, x):
        if self._size == self._capacity:
            self._grow()
        self._tail[self._size - self._tail_start] = x
        self._size += 1

    def __getitem__(self, i: int):
        if i < 0 or i >= self._size:
            raise IndexError(i)
        if i >= self._tail_start:
            return self._tail[i - self._tail_start]
        k = bisect_right(self._starts, i) - 1
        return self._blocks[k][i - self._starts[k]]

    def __iter__(self):
        emitted = 0
        for k, block in enumerate(self._blocks):
            take = min(len(block), self._size - emitted)
            if take <= 0:
                break
            yield from block[:take]
            emitted += take


class RootsSequence:
    """Monotone (end position, rule id) pairs with lazy deletion.

    New pairs are appended; a replaced span is marked deleted in place with
    the replacement written into the span's last slot, so the physical
    order never changes. Binary searches skip deleted slots and charge an
    access counter; once the counter reaches the physical size, the next
    operation compacts the array. This keeps searches amortized logarithmic
    without a tree on top.
    """

    __slots__ = (
        "_entries",
        "live_count",
        "deleted_count",
        "deleted_access_counter",
        "_last_ell",
        "gc_runs",
        "gc_moved_total",
    )

    def __init__(self):
        self._entries = BlockedArray()
        self.live_count = 0
        self.deleted_count = 0
        self.deleted_access_counter = 0
        self._last_ell = 0
        self.gc_runs = 0
        self.gc_moved_total = 0

    def __len__(self) -> int:
        return self.live_count

    @property
    def physical_size(self) -> int:
        return len(self._entries)

    @property
    def last_ell(self) -> int:
        return self._last_ell

    def _maybe_gc(self):
        if self.deleted_count and self.deleted_access_counter >= len(self._entries):
            self.gc()

    def gc(self):
        """Compact live entries to the left and reset the access counter."""
        if self.deleted_count == 0:
            self.deleted_access_counter = 0
            return
        fresh = BlockedArray()
        for e in self._entries:
            if not e[2]:
                fresh.append(e)
        self.gc_moved_total += len(fresh)
        self._entries = fresh
        self.deleted_count = 0
        self.deleted_access_counter = 0
        self.gc_runs += 1

    def push(self, ell: int, nt: int):
        self._maybe_gc()
        if self.live_count and ell <= self._last_ell:
            raise ValueError("non-monotone roots")
        if ell < 1:
            raise ValueError("non-monotone roots")
        self._entries.append([ell, nt, False])
        self.live_count += 1
        self._last_ell = ell

    def pred(self, v: int) -> int:
        """Physical index of the last live entry with ell <= v, or -1."""
        entries = self._entries
        lo, hi = 0, len(entries) - 1
        best = -1
        touched = 0
        while lo <= hi:
            m = (lo + hi) // 2
            while m >= lo and entries[m][2]:
                touched += 1
                m -= 1
            if m < lo:
                lo = (lo + hi) // 2 + 1
                continue
            if entries[m][0] <= v:
                best = m
                lo = (lo + hi) // 2 + 1
            else:
                hi = m - 1
        self.deleted_access_counter += touched
        return best

    def succ(self, v: int) -> int:
        """Physical index of the first live entry with ell >= v, or -1."""
        entries = self._entries
        lo, hi = 0, len(entries) - 1
        best = -1
        touched = 0
        while lo <= hi:
            m = (lo + hi) // 2
            while m <= hi and entries[m][2]:
                touched += 1
                m += 1
            if m > hi:
                hi = (lo + hi) // 2 - 1
                continue
            if entries[m][0] >= v:
                best = m
                hi = (lo + hi) // 2 - 1
            else:
                lo = m + 1
        self.deleted_access_counter += touched
        return best

    def first_live(self) -> int:
        return self.next_live(-1)

    def next_live(self, phys: int) -> int:
        """First live physical index strictly after phys, or -1."""
        entries = self._entries
        i = phys + 1
        n = len(entries)
        while i < n:
            if not entries[i][2]:
                return i
            self.deleted_access_counter += 1
            i += 1
        return -1

    def prev_live(self, phys: int) -> int:
        """Last live physical index strictly before phys, or -1."""
        entries = self._entries
        i = phys - 1
        while i >= 0:
            if not entries[i][2]:
                return i
            self.deleted_access_counter += 1
            i -= 1
        return -1

    def entry(self, phys: int) -> tuple[int, int]:
        e = self._entries[phys]
        return e[0], e[1]

    def range_enclosed(self, i: int, j: int) -> tuple[int, int] | None:
        """Physical span (x, y) of live entries whose expansions lie fully
        inside text positions [i..j], or None when there is none."""
        self._maybe_gc()
        if not (1 <= i <= j <= self._last_ell):
            raise ValueError(f"range ({i}, {j}) outside [1, {self._last_ell}]")
        y = self.pred(j)
        if i == 1:
            x = self.first_live()
        else:
            t = self.succ(i - 1)
            x = self.next_live(t) if t >= 0 else -1
        if x < 0 or y < 0 or y < x:
            return None
        return x, y

    def range_ordinals(self, i: int, j: int) -> tuple[int, int] | None:
        """Like range_enclosed but as 1-based live ordinals (test helper)."""
        span = self.range_enclosed(i, j)
        if span is None:
            return None
        x, y = span
        ord_x = ord_y = 0
        seen = 0
        for phys in range(y + 1):
            if not self._entries[phys][2]:
                seen += 1
                if phys == x:
                    ord_x = seen
                if phys == y:
                    ord_y = seen
        return ord_x, ord_y

    def live_slice(self, x: int, y: int) -> list[tuple[int, int]]:
        """Live (ell, nt) pairs between physical x and y inclusive."""
        out = []
        entries = self._entries
        for phys in range(x, y + 1):
            e = entries[phys]
            if e[2]:
                self.deleted_access_counter += 1
            else:
                out.append((e[0], e[1]))
        return out

    def replace_range(self, x: int, y: int, ell_new: int, nt_new: int):
        """Mark live entries in [x..y] deleted and write the replacement
        into slot y. ell_new must equal slot y's current ell, so physical
        ell order is preserved. Compaction is checked only on the way out,
        so x and y may come from a just-run search."""
        entries = self._entries
        if x < 0 or y >= len(entries) or x > y:
            raise ValueError("bad replacement span")
        ey = entries[y]
        if ey[2] or entries[x][2]:
            raise ValueError("replacement span must start and end on live entries")
        if ell_new != ey[0]:
            raise ValueError("replacement must keep the span's end position")
        removed = 0
        for phys in range(x, y):
            e = entries[phys]
            if not e[2]:
                e[2] = True
                removed += 1
        ey[1] = nt_new
        self.live_count -= removed
        self.deleted_count += removed
        self._maybe_gc()

    def live_items(self):
        for e in self._entries:
            if not e[2]:
                yield e[0], e[1]


class SideTables:
    """Per-rule expansion lengths and fingerprints of long expansions.

    Lengths below LONG_RULE_THRESHOLD live in one byte per rule; longer
    rules store a sentinel byte plus an exact entry in an id-ordered
    overflow list. Fingerprints are kept only for the long rules, in the
    same id-ordered fashion.
    """

    __slots__ = ("_len_byte", "_over_ids", "_over_lens", "_fp_ids", "_fp_vals")

    def __init__(self):
        self._len_byte = bytearray()
        self._over_ids: list[int] = []
        self._over_lens: list[int] = []
        self._fp_ids: list[int] = []
        self._fp_vals: list[int] = []

    def __len__(self) -> int:
        return len(self._len_byte)

    def add_length(self, nt: int, length: int):
        if nt != len(self._len_byte):
            raise ValueError("rule ids must be added in order")
        if length < LONG_RULE_THRESHOLD:
            self._len_byte.append(length)
        else:
            self._len_byte.append(LONG_RULE_THRESHOLD)
            self._over_ids.append(nt)
            self._over_lens.append(length)

    def length(self, nt: int) -> int:
        b = self._len_byte[nt]  # IndexError doubles as the unknown-id error
        if b < LONG_RULE_THRESHOLD:
            return b
        return self._over_lens[bisect_left(self._over_ids, nt)]

    def is_long(self, nt: int) -> bool:
        return self._len_byte[nt] == LONG_RULE_THRESHOLD

    def overflow_count(self) -> int:
        return len(self._over_ids)

    def set_long_fp(self, nt: int, fp: int):
        if not self.is_long(nt):
            raise ValueError("fingerprints are stored for long rules only")
        if self._fp_ids and nt <= self._fp_ids[-1]:
            raise ValueError("rule ids must be added in order")
        self._fp_ids.append(nt)
        self._fp_vals.append(fp)

    def long_fp(self, nt: int) -> int | None:
        if nt < 0 or nt >= len(self._len_byte):
            raise IndexError(nt)
        if self._len_byte[nt] != LONG_RULE_THRESHOLD:
            return None
        k = bisect_left(self._fp_ids, nt)
        if k < len(self._fp_ids) and self._fp_ids[k] == nt:
            return self._fp_vals[k]
        return None
