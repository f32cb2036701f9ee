"""Lazy converter: keep a sequence of prefix roots, merge only inside
phrase sources, and reuse equal-expansion rules found by fingerprint.

Instead of folding the whole processed prefix into one rule after every
phrase, the converter maintains a roots sequence whose expansions
concatenate to the prefix. A copy phrase first merges the roots enclosed
by its source interval (so the interval is covered by few rules), cuts the
source out of at most two boundary roots, then appends the cut pieces as
new roots. Merging is where rules get created, so two fingerprint tricks
cut the count further: a pairwise merge whose concatenation already exists
in the grammar reuses the old rule, and each appended piece sequence is
rewritten to the shortest known equivalent by dynamic programming.
"""

from __future__ import annotations

import time

from .containers import RootsSequence
from .fingerprints import DedupMap, FingerprintContext
from .grammar import Grammar
from .lz77 import Factorization, validate_factorization
from .serialization import RunStats

DEFAULT_SAMPLE_PROB = 0.125


class LazyConverter:
    """Single-use conversion state machine; drive it with ``convert`` or
    exercise the individual steps directly in tests."""

    def __init__(self, sample_prob: float = DEFAULT_SAMPLE_PROB, seed: int = 0,
                 paranoid: bool = False):
        self.ctx = FingerprintContext(seed)
        self.grammar = Grammar(self.ctx)
        self.roots = RootsSequence()
        # Separate stream from the base draw so p changes never shift r.
        self.dedup = DedupMap(sample_prob, seed + 1)
        self.paranoid = paranoid
        self.sample_prob = sample_prob
        self.kr_seed = seed
        self.built = 0
        self.attempted_merges = 0
        self.avoided_merges = 0
        self.dp_rewritten = 0
        self.dp_pieces_saved = 0
        self.paranoid_collisions = 0
        if sample_prob > 0:
            self.grammar.on_create = self._offer_new_rule

    # ------------------------------------------------------------------

    def _offer_new_rule(self, nt: int):
        g = self.grammar
        self.dedup.offer_deferred(nt, g.explen(nt), lambda: g._fp_of(nt))

    def _pair_hook(self, xn, yn):
        """Called for every pairwise merge attempt; returns a preexisting
        rule equal to exp(x)exp(y), or None to let the join happen."""
        self.attempted_merges += 1
        dedup = self.dedup
        if dedup.sample_prob <= 0 or not dedup.entries:
            return None
        length = xn.length + yn.length
        if not dedup.has_length(length):
            return None
        g = self.grammar
        if xn.fp is None:
            xn.fp = g._fp_of(xn.nt)
        if yn.fp is None:
            yn.fp = g._fp_of(yn.nt)
        found = dedup.lookup(self.ctx.concat(xn.fp, yn.length, yn.fp), length)
        if found is None:
            return None
        if self.paranoid:
            if g.expand(found) != g.expand(xn.nt) + g.expand(yn.nt):
                self.paranoid_collisions += 1
                return None
        self.avoided_merges += 1
        return found

    # ------------------------------------------------------------------

    def merge_enclosed(self, i: int, j: int):
        """Replace all roots lying entirely inside prefix positions [i..j]
        with one rule expanding to their concatenation."""
        span = self.roots.range_enclosed(i, j)
        if span is None:
            return
        x, y = span
        if x == y:
            return
        items = self.roots.live_slice(x, y)
        merged = self.grammar.merge_sequence([nt for _, nt in items], pair_hook=self._pair_hook)
        self.roots.replace_range(x, y, items[-1][0], merged)

    def decompose_with_roots(self, i: int, j: int) -> list[int]:
        """Rule ids covering prefix positions [i..j], reusing whole roots
        wherever possible and decomposing only the two boundary roots."""
        if not 1 <= i <= j <= self.built:
            raise ValueError(f"range ({i}, {j}) outside [1, {self.built}]")
        r = self.roots
        g = self.grammar
        out: list[int] = []
        if i == 1:
            x = r.first_live()
        else:
            s = r.succ(i - 1)
            ell_s, nt_s = r.entry(s)
            if ell_s == i - 1:
                x = r.next_live(s)
            else:
                p = r.prev_live(s)
                base = r.entry(p)[0] if p >= 0 else 0
                if ell_s >= j:
                    # Whole query inside one root.
                    return g.decompose(nt_s, i - base, j - base)
                out.extend(g.decompose(nt_s, i - base, ell_s - base))
                x = r.next_live(s)
        y = r.pred(j)
        ell_y = r.entry(y)[0] if y >= 0 else 0
        if 0 <= x <= y:
            out.extend(nt for _, nt in r.live_slice(x, y))
        if ell_y < j:
            ynext = r.next_live(y) if y >= 0 else r.first_live()
            out.extend(g.decompose(r.entry(ynext)[1], 1, j - ell_y))
        return out

    def shortest_equivalent(self, seq: list[int]) -> list[int]:
        """Shortest rule sequence with the same concatenated expansion.

        A segment of two or more pieces is replaceable when the registry
        holds its (fingerprint, length); single pieces always stand for
        themselves. Quadratic DP over the piece boundaries; ties prefer
        longer first segments.
        """
        q = len(seq)
        if q <= 1:
            return list(seq)
        dedup = self.dedup
        if dedup.sample_prob <= 0 or not dedup.entries:
            return list(seq)
        g = self.grammar
        ctx = self.ctx
        lens = [g.explen(a) for a in seq]
        fps = [g._fp_of(a) for a in seq]
        lpref = [0] * (q + 1)
        fpref = [0] * (q + 1)
        for t in range(q):
            lpref[t + 1] = lpref[t] + lens[t]
            fpref[t + 1] = ctx.concat(fpref[t], lens[t], fps[t])
        reps: dict[tuple[int, int], int] = {}
        best = [q + 1] * (q + 1)
        best[q] = 0
        for a in range(q - 1, -1, -1):
            bb = best[a + 1] + 1
            for b in range(a + 2, q + 1):
                seg_len = lpref[b] - lpref[a]
                if not dedup.has_length(seg_len):
                    continue
                fp_seg = (fpref[b] - fpref[a] * ctx.power(seg_len)) % ctx.q
                hit = dedup.lookup(fp_seg, seg_len)
                if hit is None:
                    continue
                if self.paranoid:
                    if g.expand(hit) != b"".join(g.expand(t) for t in seq[a:b]):
                        self.paranoid_collisions += 1
                        continue
                reps[(a, b)] = hit
                if best[b] + 1 < bb:
                    bb = best[b] + 1
            best[a] = bb
        out: list[int] = []
        a = 0
        while a < q:
            target = best[a] - 1
            chosen = a + 1
            for b in range(q, a, -1):
                if (b == a + 1 or (a, b) in reps) and best[b] == target:
                    chosen = b
                    break
            out.append(seq[a] if chosen == a + 1 else reps[(a, chosen)])
            a = chosen
        if len(out) < q:
            self.dp_rewritten += 1
            self.dp_pieces_saved += q - len(out)
        return out

    def append_roots(self, ids: list[int]):
        g = self.grammar
        for nt in ids:
            self.built += g.explen(nt)
            self.roots.push(self.built, nt)

    _REWRITE_WINDOW = 32

    def _final_consolidation(self):
        """Collapse the remaining roots into one start rule.

        Before the closing merge, the roots are rewritten window by window
        to the shortest registered equivalents, so segments the registry
        already knows never cost a join at all.
        """
        g = self.grammar
        if len(self.roots) > 1 and self.dedup.sample_prob > 0 and self.dedup.entries:
            roots = [nt for _, nt in self.roots.live_items()]
            w = self._REWRITE_WINDOW
            rewritten: list[int] = []
            for k in range(0, len(roots), w):
                rewritten.extend(self.shortest_equivalent(roots[k : k + w]))
            if len(rewritten) < len(roots):
                fresh = RootsSequence()
                pos = 0
                for nt in rewritten:
                    pos += g.explen(nt)
                    fresh.push(pos, nt)
                assert pos == self.built, "rewrite changed the covered prefix"
                self.roots = fresh
        if len(self.roots) > 1:
            self.merge_enclosed(1, self.built)

    # ------------------------------------------------------------------

    def convert(self, fact: Factorization) -> tuple[Grammar, int, RunStats]:
        t0 = time.perf_counter()
        report = validate_factorization(fact)
        if not report.ok:
            where = "" if report.bad_index is None else f" (phrase {report.bad_index})"
            raise ValueError(f"invalid factorization: {report.message}{where}")
        g = self.grammar
        for ph in fact.phrases:
            if ph.is_literal:
                self.append_roots([g.add_symbol(ph.value)])
            else:
                # Rounds handle overlapping sources; plain copies take one.
                pos = ph.value
                remaining = ph.length
                while remaining:
                    end = min(pos + remaining - 1, self.built)
                    self.merge_enclosed(pos, end)
                    pieces = self.decompose_with_roots(pos, end)
                    pieces = self.shortest_equivalent(pieces)
                    self.append_roots(pieces)
                    took = end - pos + 1
                    remaining -= took
                    pos += took
        size_pre = g.size()
        avoided_src = self.avoided_merges
        attempted_src = self.attempted_merges
        self._final_consolidation()
        start = next(self.roots.live_items())[1]
        g.start = start
        stats = RunStats(
            algo="lazy",
            n=fact.n,
            f=fact.f,
            sample_prob=self.sample_prob,
            kr_seed=self.kr_seed,
            paranoid=self.paranoid,
            records=len(g),
            size_pre_flatten=size_pre,
            size=g.size(),
            avoided_merges=self.avoided_merges,
            attempted_merges=self.attempted_merges,
            avoided_src_merges=avoided_src,
            attempted_src_merges=attempted_src,
            dp_rewritten=self.dp_rewritten,
            dp_pieces_saved=self.dp_pieces_saved,
            paranoid_collisions=self.paranoid_collisions,
            gc_runs=self.roots.gc_runs,
            peak_records=len(g),
            wall_time_s=time.perf_counter() - t0,
        )
        return g, start, stats


def convert_lazy(fact: Factorization, sample_prob: float = DEFAULT_SAMPLE_PROB,
                 seed: int = 0, paranoid: bool = False) -> tuple[Grammar, int, RunStats]:
    """Convert a factorization (and nothing else: the text is never read)
    into an AVL grammar. Returns (grammar, start id, stats)."""
    return LazyConverter(sample_prob, seed, paranoid).convert(fact)
