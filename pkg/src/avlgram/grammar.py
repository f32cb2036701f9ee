"""Append-only AVL grammars.

A grammar here is a straight-line program: every rule derives exactly one
string, and a rule is either a single terminal symbol or an ordered pair
of earlier rules. Binary rules keep the AVL restriction (parse-tree
heights of the two children differ by at most one), which bounds rule
height logarithmically in expansion length and is what makes concatenation
and substring extraction cheap.

Rules are never modified once created; concatenation rebuilds the spine it
touches (path copying) instead of rotating in place.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .containers import LONG_RULE_THRESHOLD, BlockedArray, SideTables
from .fingerprints import FingerprintContext


@dataclass(frozen=True, slots=True)
class NonterminalRecord:
    """Read-only view of one rule."""

    symbol: int | None
    left: int | None
    right: int | None
    height: int
    explen: int

    @property
    def is_terminal(self) -> bool:
        return self.symbol is not None


class _MergeNode:
    """Linked-list element used while folding a rule sequence."""

    __slots__ = ("nt", "height", "length", "fp", "prev", "next", "alive", "order")

    def __init__(self, nt, height, length, order):
        self.nt = nt
        self.height = height
        self.length = length
        self.fp = None
        self.prev = None
        self.next = None
        self.alive = True
        self.order = order


class Grammar:
    """Arena of immutable rules plus the operations that grow it.

    When a fingerprint context is attached, the grammar maintains the
    fingerprint table for long rules and a byte cache of short expansions
    as rules are created; the ``on_create`` hook (if set) sees every new
    rule id, including the intermediate ones made during concatenation.
    """

    def __init__(self, fingerprint_ctx: FingerprintContext | None = None):
        self._left = BlockedArray()
        self._right = BlockedArray()
        self._height = BlockedArray()
        self.tables = SideTables()
        self._terminal_ids: dict[int, int] = {}
        self.start: int | None = None
        self.ctx = fingerprint_ctx
        self._short_exp: dict[int, bytes] = {}
        self.on_create = None
        self._size = 0
        self.fp_expansions = 0

    # ------------------------------------------------------------------
    # record access

    def __len__(self) -> int:
        return len(self._height)

    def is_terminal(self, a: int) -> bool:
        return self._right[a] < 0

    def symbol(self, a: int) -> int:
        if self._right[a] >= 0:
            raise ValueError(f"rule {a} is not a terminal")
        return self._left[a]

    def children(self, a: int) -> tuple[int, int]:
        r = self._right[a]
        if r < 0:
            raise ValueError(f"rule {a} is a terminal")
        return self._left[a], r

    def height(self, a: int) -> int:
        return self._height[a]

    def explen(self, a: int) -> int:
        return self.tables.length(a)

    def record(self, a: int) -> NonterminalRecord:
        r = self._right[a]
        if r < 0:
            return NonterminalRecord(self._left[a], None, None, 0, 1)
        return NonterminalRecord(None, self._left[a], r, self._height[a], self.explen(a))

    def size(self) -> int:
        """Total length of all right-hand sides."""
        return self._size

    # ------------------------------------------------------------------
    # raw creation (no balance checks; used by builders and deserialization)

    def _append_terminal(self, symbol: int) -> int:
        if not 0 <= symbol < 256:
            raise ValueError(f"symbol {symbol} outside byte alphabet")
        nt = len(self._height)
        self._left.append(symbol)
        self._right.append(-1)
        self._height.append(0)
        self.tables.add_length(nt, 1)
        self._size += 1
        if self.ctx is not None:
            self._short_exp[nt] = bytes((symbol,))
        if self.on_create is not None:
            self.on_create(nt)
        return nt

    def _append_binary(self, x: int, y: int) -> int:
        nt = len(self._height)
        self._left.append(x)
        self._right.append(y)
        self._height.append(1 + max(self._height[x], self._height[y]))
        length = self.tables.length(x) + self.tables.length(y)
        self.tables.add_length(nt, length)
        self._size += 2
        if self.ctx is not None:
            if length < LONG_RULE_THRESHOLD:
                self._short_exp[nt] = self._short_of(x) + self._short_of(y)
            else:
                fp = self.ctx.concat(self._fp_of(x), self.tables.length(y), self._fp_of(y))
                self.tables.set_long_fp(nt, fp)
        if self.on_create is not None:
            self.on_create(nt)
        return nt

    def _create_binary(self, x: int, y: int) -> int:
        assert abs(self._height[x] - self._height[y]) <= 1, "unbalanced pair"
        return self._append_binary(x, y)

    # ------------------------------------------------------------------
    # builders

    def add_symbol(self, symbol: int) -> int:
        """Rule deriving one terminal symbol; memoized per symbol."""
        nt = self._terminal_ids.get(symbol)
        if nt is None:
            nt = self._append_terminal(symbol)
            self._terminal_ids[symbol] = nt
        return nt

    def add_merged(self, x: int, y: int) -> int:
        """Rule deriving exp(x) + exp(y), keeping the grammar AVL.

        Works like balanced-tree concatenation: descend the taller
        operand's spine to a subtree of compatible height, bridge there,
        and re-create the spine above with at most one rebalancing step.
        Creates O(|height(x) - height(y)| + 1) rules.
        """
        hx = self._height[x]
        hy = self._height[y]
        if abs(hx - hy) <= 1:
            return self._create_binary(x, y)
        if hx > hy:
            return self._join_right(x, y, hy)
        return self._join_left(x, y, hx)

    def _join_right(self, x: int, y: int, hy: int) -> int:
        # height(x) >= height(y) + 2: walk x's right spine.
        l, c = self.children(x)
        if self._height[c] <= hy + 1:
            return self._rebalance(l, self._create_binary(c, y))
        return self._rebalance(l, self._join_right(c, y, hy))

    def _join_left(self, x: int, y: int, hx: int) -> int:
        # height(y) >= height(x) + 2: walk y's left spine.
        c, r = self.children(y)
        if self._height[c] <= hx + 1:
            return self._rebalance(self._create_binary(x, c), r)
        return self._rebalance(self._join_left(x, c, hx), r)

    def _rebalance(self, l: int, r: int) -> int:
        """Combine adjacent subtrees whose heights differ by at most two."""
        hl = self._height[l]
        hr = self._height[r]
        if abs(hl - hr) <= 1:
            return self._create_binary(l, r)
        if hr == hl + 2:
            a, b = self.children(r)
            if self._height[a] > self._height[b]:
                a1, a2 = self.children(a)
                return self._create_binary(self._create_binary(l, a1), self._create_binary(a2, b))
            return self._create_binary(self._create_binary(l, a), b)
        assert hl == hr + 2, "rebalance called with height gap > 2"
        a, b = self.children(l)
        if self._height[b] > self._height[a]:
            b1, b2 = self.children(b)
            return self._create_binary(self._create_binary(a, b1), self._create_binary(b2, r))
        return self._create_binary(a, self._create_binary(b, r))

    # ------------------------------------------------------------------
    # substring machinery

    def decompose(self, a: int, i: int, j: int) -> list[int]:
        """Rule ids whose expansions concatenate to exp(a)[i..j] (1-based,
        inclusive). The result has O(log explen(a)) elements and bitonic
        heights: the part from the left descent climbs, the rest falls."""
        if not 1 <= i <= j <= self.explen(a):
            raise ValueError(f"range ({i}, {j}) outside [1, {self.explen(a)}]")
        while True:
            if i == 1 and j == self.explen(a):
                return [a]
            l, r = self.children(a)
            ll = self.tables.length(l)
            if j <= ll:
                a = l
            elif i > ll:
                a = r
                i -= ll
                j -= ll
            else:
                break
        return self._suffix_pieces(l, i) + self._prefix_pieces(r, j - ll)

    def _suffix_pieces(self, a: int, i: int) -> list[int]:
        # Pieces covering exp(a)[i..end], left to right.
        pend = []
        while i != 1:
            l, r = self.children(a)
            ll = self.tables.length(l)
            if i <= ll:
                pend.append(r)
                a = l
            else:
                a = r
                i -= ll
        out = [a]
        out.extend(reversed(pend))
        return out

    def _prefix_pieces(self, a: int, j: int) -> list[int]:
        # Pieces covering exp(a)[1..j], left to right.
        pend = []
        while j != self.tables.length(a):
            l, r = self.children(a)
            ll = self.tables.length(l)
            if j <= ll:
                a = l
            else:
                pend.append(l)
                a = r
                j -= ll
        pend.append(a)
        return pend

    def add_substring(self, a: int, i: int, j: int) -> int:
        """Rule deriving exp(a)[i..j]; adds O(log explen(a)) rules."""
        return self.merge_sequence(self.decompose(a, i, j))

    def merge_sequence(self, ids: list[int], pair_hook=None) -> int:
        """Fold a rule sequence into one rule deriving the concatenation.

        Greedy order: repeatedly take the lowest remaining element and join
        it with its lower neighbor (the left one on ties). ``pair_hook``
        may return a preexisting equivalent rule for a pair, in which case
        the join is skipped.
        """
        if not ids:
            raise ValueError("empty sequence")
        if len(ids) == 1:
            return ids[0]
        tables = self.tables
        nodes = []
        for order, nt in enumerate(ids):
            nodes.append(_MergeNode(nt, self._height[nt], tables.length(nt), order))
        for k in range(len(nodes) - 1):
            nodes[k].next = nodes[k + 1]
            nodes[k + 1].prev = nodes[k]
        # Key: lowest height first, leftmost position on ties; the serial
        # only separates a node from the stale entry of its predecessor.
        heap = [(node.height, node.order, k, node) for k, node in enumerate(nodes)]
        heapq.heapify(heap)
        serial = len(nodes)
        remaining = len(nodes)
        last = nodes[0]
        while remaining > 1:
            _, _, _, node = heapq.heappop(heap)
            if not node.alive:
                continue
            ln = node.prev
            rn = node.next
            if ln is None:
                partner, as_left = rn, False
            elif rn is None:
                partner, as_left = ln, True
            elif ln.height <= rn.height:
                partner, as_left = ln, True
            else:
                partner, as_left = rn, False
            xn, yn = (partner, node) if as_left else (node, partner)
            merged_nt = pair_hook(xn, yn) if pair_hook is not None else None
            if merged_nt is None:
                merged_nt = self.add_merged(xn.nt, yn.nt)
            new = _MergeNode(merged_nt, self._height[merged_nt], xn.length + yn.length, xn.order)
            if pair_hook is not None and xn.fp is not None and yn.fp is not None:
                new.fp = self.ctx.concat(xn.fp, yn.length, yn.fp)
            new.prev = xn.prev
            new.next = yn.next
            if new.prev is not None:
                new.prev.next = new
            if new.next is not None:
                new.next.prev = new
            xn.alive = False
            yn.alive = False
            heapq.heappush(heap, (new.height, new.order, serial, new))
            serial += 1
            remaining -= 1
            last = new
        return last.nt

    # ------------------------------------------------------------------
    # expansion

    def _short_of(self, a: int) -> bytes:
        b = self._short_exp.get(a)
        if b is None:
            r = self._right[a]
            if r < 0:
                b = bytes((self._left[a],))
            else:
                b = self._short_of(self._left[a]) + self._short_of(r)
            self._short_exp[a] = b
        return b

    def expand_chunks(self, a: int):
        """Yield exp(a) as byte chunks, left to right, without recursion on
        the parse tree; long rules are split, short ones come memoized."""
        if self.tables.length(a) < LONG_RULE_THRESHOLD:
            yield self._short_of(a)
            return
        stack = [a]
        tables = self.tables
        while stack:
            v = stack.pop()
            if tables.length(v) < LONG_RULE_THRESHOLD:
                yield self._short_of(v)
            else:
                stack.append(self._right[v])
                stack.append(self._left[v])

    def expand(self, a: int) -> bytes:
        return b"".join(self.expand_chunks(a))

    def expand_prefix(self, a: int, k: int) -> bytes:
        """First k symbols of exp(a); linear in k."""
        if not 0 <= k <= self.explen(a):
            raise ValueError(f"prefix length {k} outside [0, {self.explen(a)}]")
        if k == 0:
            return b""
        out = []
        got = 0
        for chunk in self.expand_chunks(a):
            need = k - got
            if len(chunk) >= need:
                out.append(chunk[:need])
                break
            out.append(chunk)
            got += len(chunk)
        return b"".join(out)

    # ------------------------------------------------------------------
    # fingerprints

    def _fp_of(self, a: int) -> int:
        ctx = self.ctx
        if self.tables.is_long(a):
            v = self.tables.long_fp(a)
            if v is not None:
                return v
            self.fp_expansions += 1
            return ctx.of_bytes(self.expand(a))
        self.fp_expansions += 1
        return ctx.of_bytes(self._short_of(a))

    def fingerprint(self, a: int, ctx: FingerprintContext | None = None) -> int:
        """Fingerprint of exp(a): long rules come from the side table,
        everything else is recomputed from the expansion."""
        if ctx is None or ctx is self.ctx:
            if self.ctx is None:
                raise ValueError("grammar has no fingerprint context")
            return self._fp_of(a)
        self.fp_expansions += 1
        return ctx.of_bytes(self.expand(a))

    # ------------------------------------------------------------------
    # whole-grammar operations

    def prune(self, roots) -> tuple["Grammar", dict[int, int]]:
        """New grammar holding exactly the rules reachable from ``roots``,
        ids remapped in ascending order. Returns (grammar, id map)."""
        reachable = set()
        stack = list(roots)
        while stack:
            a = stack.pop()
            if a in reachable:
                continue
            reachable.add(a)
            if self._right[a] >= 0:
                stack.append(self._left[a])
                stack.append(self._right[a])
        remap: dict[int, int] = {}
        ng = Grammar()
        for old in sorted(reachable):
            r = self._right[old]
            if r < 0:
                nid = ng._append_terminal(self._left[old])
                ng._terminal_ids.setdefault(self._left[old], nid)
            else:
                nid = ng._append_binary(remap[self._left[old]], remap[r])
            remap[old] = nid
        if self.start is not None and self.start in remap:
            ng.start = remap[self.start]
        return ng, remap

    def avl_check(self) -> bool:
        """Balance and bookkeeping consistency of every rule."""
        for a in range(len(self)):
            r = self._right[a]
            if r < 0:
                if self._height[a] != 0 or self.tables.length(a) != 1:
                    return False
                continue
            l = self._left[a]
            if l >= a or r >= a:
                return False
            if abs(self._height[l] - self._height[r]) > 1:
                return False
            if self._height[a] != 1 + max(self._height[l], self._height[r]):
                return False
            if self.tables.length(a) != self.tables.length(l) + self.tables.length(r):
                return False
        return True

    def height_check(self) -> bool:
        """Logarithmic height bound for every rule."""
        for a in range(len(self)):
            if self._height[a] > 1.45 * math.log2(self.tables.length(a) + 2) + 2:
                return False
        return True
