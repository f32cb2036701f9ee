"""LZ77 factorization over byte texts: exact greedy parser, decoder,
validation, and the LZ7F file format.

The production parser builds a suffix array plus LCP array and answers the
per-phrase questions (longest previous factor, rightmost source) with
segment trees, so it stays near O(n log n) even on highly repetitive
inputs. A quadratic reference parser driven by bytes.rfind is kept as an
independent oracle for tests.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from numba import njit


@dataclass(frozen=True, slots=True)
class Phrase:
    """One parse unit: a literal symbol or a copy of an earlier occurrence.

    Literals carry the symbol code in ``value`` and have length 0 on the
    wire (they decode to a single symbol). Copies carry the 1-based source
    position and a length of at least 1; the source interval may overlap
    the phrase itself.
    """

    value: int
    length: int

    @property
    def is_literal(self) -> bool:
        return self.length == 0

    @property
    def decoded_length(self) -> int:
        return 1 if self.length == 0 else self.length

    def is_self_referential(self, position: int) -> bool:
        """True when the source interval reaches into the phrase at the
        given 1-based start position."""
        return self.length > 0 and self.value + self.length > position


@dataclass(slots=True)
class Factorization:
    phrases: list[Phrase]
    n: int

    @property
    def f(self) -> int:
        return len(self.phrases)


@dataclass(frozen=True, slots=True)
class ValidationReport:
    ok: bool
    bad_index: int | None = None
    message: str = ""


class LZFormatError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@njit(cache=True)
def _sa_doubling(codes):
    """Suffix array by prefix doubling with two-pass radix sort."""
    n = codes.shape[0]
    sa = np.empty(n, np.int32)
    rank = np.empty(n, np.int32)
    tmp = np.empty(n, np.int32)
    sa2 = np.empty(n, np.int32)
    cnt = np.zeros(257, np.int64)
    for i in range(n):
        cnt[codes[i] + 1] += 1
    for c in range(1, 257):
        cnt[c] += cnt[c - 1]
    for i in range(n):
        sa[cnt[codes[i]]] = i
        cnt[codes[i]] += 1
    r = 0
    rank[sa[0]] = 0
    for k in range(1, n):
        if codes[sa[k]] != codes[sa[k - 1]]:
            r += 1
        rank[sa[k]] = r
    k = 1
    count = np.zeros(n + 2, np.int64)
    while r < n - 1 and k < n:
        count[: n + 2] = 0
        for i in range(n):
            key = rank[i + k] + 1 if i + k < n else 0
            tmp[i] = key
            count[key + 1] += 1
        for c in range(1, n + 1):
            count[c] += count[c - 1]
        for i in range(n):
            key = tmp[i]
            sa2[count[key]] = i
            count[key] += 1
        count[: n + 2] = 0
        for i in range(n):
            count[rank[i] + 1] += 1
        for c in range(1, n + 1):
            count[c] += count[c - 1]
        for j in range(n):
            i = sa2[j]
            sa[count[rank[i]]] = i
            count[rank[i]] += 1
        r = 0
        prev = sa[0]
        tmp[prev] = 0
        for j in range(1, n):
            cur = sa[j]
            pr = rank[prev]
            pc = rank[cur]
            sr = rank[prev + k] if prev + k < n else -1
            sc = rank[cur + k] if cur + k < n else -1
            if pc != pr or sc != sr:
                r += 1
            tmp[cur] = r
            prev = cur
        rank[:] = tmp
        k <<= 1
    return sa


@njit(cache=True)
def _lcp_kasai(codes, sa):
    """LCP array: lcp[j] = common prefix length of suffixes sa[j], sa[j+1]."""
    n = codes.shape[0]
    rank = np.empty(n, np.int32)
    for j in range(n):
        rank[sa[j]] = j
    lcp = np.zeros(n, np.int32)
    h = 0
    for i in range(n):
        if rank[i] + 1 < n:
            j = sa[rank[i] + 1]
            while i + h < n and j + h < n and codes[i + h] == codes[j + h]:
                h += 1
            lcp[rank[i]] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


_I32_INF = 2**31 - 1


@njit(cache=True)
def _lcp_range_min(t, m, lo, hi):
    # Minimum over leaves [lo..hi] inclusive.
    lo += m
    hi += m + 1
    res = _I32_INF
    while lo < hi:
        if lo & 1:
            if t[lo] < res:
                res = t[lo]
            lo += 1
        if hi & 1:
            hi -= 1
            if t[hi] < res:
                res = t[hi]
        lo >>= 1
        hi >>= 1
    return res


@njit(cache=True)
def _lcp_left_below(t, m, k, limit):
    # Largest leaf index <= k with value < limit, or -1.
    i = m + k
    if t[i] < limit:
        return k
    while i > 1:
        if (i & 1) and t[i - 1] < limit:
            i -= 1
            while i < m:
                i = 2 * i + 1
                if t[i] >= limit:
                    i -= 1
            return i - m
        i >>= 1
    return -1


@njit(cache=True)
def _lcp_right_below(t, m, k, limit):
    # Smallest leaf index >= k with value < limit, or -1.
    i = m + k
    if t[i] < limit:
        return k
    while i > 1:
        if (i & 1) == 0 and t[i + 1] < limit:
            i += 1
            while i < m:
                i = 2 * i
                if t[i] >= limit:
                    i += 1
            return i - m
        i >>= 1
    return -1


@njit(cache=True)
def _parse_kernel(codes, sa, lcp, rank):
    """Greedy left-to-right parse over precomputed suffix structures.

    Positions strictly left of the current phrase become 'active' in a
    max-segment tree indexed by rank, so the longest-factor neighbors and
    the rightmost source are both plain tree descents.
    """
    n = codes.shape[0]
    # Min tree over lcp[0 .. n-2].
    m1 = 1
    while m1 < n - 1:
        m1 <<= 1
    tmin = np.full(2 * m1, _I32_INF, np.int32)
    tmin[m1 : m1 + n - 1] = lcp[: n - 1]
    for v in range(m1 - 1, 0, -1):
        a = tmin[2 * v]
        b = tmin[2 * v + 1]
        tmin[v] = a if a < b else b
    # Max tree over ranks: leaf rank holds the text position once active.
    m2 = 1
    while m2 < n:
        m2 <<= 1
    act = np.full(2 * m2, -1, np.int32)

    out_val = np.empty(n, np.int64)
    out_len = np.empty(n, np.int64)
    nf = 0
    i = 0
    upto = 0
    while i < n:
        while upto < i:
            node = m2 + rank[upto]
            act[node] = upto
            node >>= 1
            while node >= 1 and act[node] < upto:
                act[node] = upto
                node >>= 1
            upto += 1
        k = rank[i]
        best = 0
        # Nearest active ranks on both sides of k.
        node = m2 + k
        kl = -1
        if act[node] >= 0:
            kl = k
        else:
            v = node
            while v > 1:
                if (v & 1) and act[v - 1] >= 0:
                    v -= 1
                    while v < m2:
                        v = 2 * v + 1
                        if act[v] < 0:
                            v -= 1
                    kl = v - m2
                    break
                v >>= 1
        if kl >= 0:
            best = _lcp_range_min(tmin, m1, kl, k - 1)
        kr = -1
        v = node
        while v > 1:
            if (v & 1) == 0 and act[v + 1] >= 0:
                v += 1
                while v < m2:
                    v = 2 * v
                    if act[v] < 0:
                        v += 1
                kr = v - m2
                break
            v >>= 1
        if kr >= 0 and kr < n:
            ell_r = _lcp_range_min(tmin, m1, k, kr - 1)
            if ell_r > best:
                best = ell_r
        if best <= 0:
            out_val[nf] = codes[i]
            out_len[nf] = 0
            nf += 1
            i += 1
            continue
        # Rank interval of suffixes sharing a prefix of length >= best.
        if k == 0:
            lo = 0
        else:
            j = _lcp_left_below(tmin, m1, k - 1, best)
            lo = j + 1
        if k == n - 1:
            hi = n - 1
        else:
            j = _lcp_right_below(tmin, m1, k, best)
            hi = j if j >= 0 else n - 1
        # Rightmost active position in the interval: plain range max.
        src = -1
        plo = lo + m2
        phi = hi + m2 + 1
        while plo < phi:
            if plo & 1:
                if act[plo] > src:
                    src = act[plo]
                plo += 1
            if phi & 1:
                phi -= 1
                if act[phi] > src:
                    src = act[phi]
            plo >>= 1
            phi >>= 1
        out_val[nf] = src + 1
        out_len[nf] = best
        nf += 1
        i += best
    return out_val[:nf], out_len[:nf]


def lz77_parse(data: bytes) -> Factorization:
    """Exact greedy LZ77 parse of a byte text.

    Each phrase is the longest previous factor starting at its position
    (overlapping sources allowed); among equal-length sources the rightmost
    one is chosen. Raises ValueError on empty input.
    """
    if len(data) == 0:
        raise ValueError("empty text")
    data = bytes(data)
    n = len(data)
    if n == 1:
        return Factorization([Phrase(data[0], 0)], 1)
    codes = np.frombuffer(data, np.uint8)
    sa = _sa_doubling(codes)
    lcp = _lcp_kasai(codes, sa)
    rank = np.empty(n, np.int32)
    rank[sa] = np.arange(n, dtype=np.int32)
    values, lengths = _parse_kernel(codes, sa, lcp, rank)
    phrases = [Phrase(int(v), int(le)) for v, le in zip(values.tolist(), lengths.tolist())]
    return Factorization(phrases, n)


def lz77_parse_slow(data: bytes) -> Factorization:
    """Quadratic reference parser built on bytes.find/rfind.

    Independent of the suffix-array machinery; same greedy semantics and
    the same rightmost-source tie-break.
    """
    if len(data) == 0:
        raise ValueError("empty text")
    data = bytes(data)
    n = len(data)
    phrases: list[Phrase] = []
    i = 0
    while i < n:
        lo, hi = 1, n - i
        best = 0
        while lo <= hi:
            mid = (lo + hi) // 2
            # A match inside data[0 : i+mid-1] must start at or before i-1.
            if data.find(data[i : i + mid], 0, i + mid - 1) != -1:
                best = mid
                lo = mid + 1
            else:
                hi = mid - 1
        if best == 0:
            phrases.append(Phrase(data[i], 0))
            i += 1
        else:
            src = data.rfind(data[i : i + best], 0, i + best - 1)
            phrases.append(Phrase(src + 1, best))
            i += best
    return Factorization(phrases, n)


def lz_decode(fact: Factorization) -> bytes:
    """Reconstruct the text; raises ValueError on inconsistent input."""
    out = bytearray()
    for idx, ph in enumerate(fact.phrases):
        if ph.is_literal:
            if not 0 <= ph.value < 256:
                raise ValueError(f"invalid factorization: bad literal at phrase {idx}")
            out.append(ph.value)
        else:
            src = ph.value - 1
            if src < 0 or src >= len(out):
                raise ValueError(f"invalid factorization: bad source at phrase {idx}")
            remaining = ph.length
            pos = src
            # Overlapping copies double the available span each pass.
            while remaining:
                take = min(remaining, len(out) - pos)
                out += out[pos : pos + take]
                pos += take
                remaining -= take
    if fact.n != len(out):
        raise ValueError("invalid factorization: length total mismatch")
    return bytes(out)


def validate_factorization(fact: Factorization, data: bytes | None = None) -> ValidationReport:
    """Structural checks, plus decode and source checks when text is given.

    Returns a report naming the first offending phrase instead of raising.
    """
    pos = 1
    for idx, ph in enumerate(fact.phrases):
        if ph.is_literal:
            if not 0 <= ph.value < 256:
                return ValidationReport(False, idx, "literal outside byte alphabet")
        else:
            if ph.length < 1:
                return ValidationReport(False, idx, "empty phrase")
            if ph.value < 1 or ph.value >= pos:
                return ValidationReport(False, idx, "source beyond written prefix")
        pos += ph.decoded_length
    total = pos - 1
    if total != fact.n:
        return ValidationReport(False, None, "length total mismatch")
    if data is not None:
        if len(data) != fact.n:
            return ValidationReport(False, None, "text length mismatch")
        pos = 1
        for idx, ph in enumerate(fact.phrases):
            if ph.is_literal:
                if data[pos - 1] != ph.value:
                    return ValidationReport(False, idx, "literal does not match text")
            else:
                src = ph.value - 1
                if data[src : src + ph.length] != data[pos - 1 : pos - 1 + ph.length]:
                    return ValidationReport(False, idx, "copy does not match its source")
            pos += ph.decoded_length
    return ValidationReport(True)


LZ7F_MAGIC = b"LZ7F"
_LZ7F_HEADER = struct.Struct("<4sBQQ")


def write_lz7f(fact: Factorization, path: str):
    arr = np.empty((len(fact.phrases), 2), np.uint64)
    for k, ph in enumerate(fact.phrases):
        arr[k, 0] = ph.value
        arr[k, 1] = ph.length
    with open(path, "wb") as fh:
        fh.write(_LZ7F_HEADER.pack(LZ7F_MAGIC, 1, fact.n, fact.f))
        fh.write(arr.tobytes())


def read_lz7f(path: str) -> Factorization:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _LZ7F_HEADER.size:
        raise LZFormatError("unexpected_end", "unexpected end of LZ7F stream")
    magic, version, n, f = _LZ7F_HEADER.unpack_from(raw)
    if magic != LZ7F_MAGIC:
        raise LZFormatError("bad_magic", "not an LZ7F file")
    if version != 1:
        raise LZFormatError("bad_version", f"unsupported LZ7F version {version}")
    body = raw[_LZ7F_HEADER.size :]
    if len(body) < 16 * f:
        raise LZFormatError("unexpected_end", "unexpected end of LZ7F stream")
    arr = np.frombuffer(body[: 16 * f], np.uint64).reshape(f, 2)
    phrases = [Phrase(int(v), int(le)) for v, le in arr]
    return Factorization(phrases, int(n))
