"""Grammar file format, text verification, and run statistics reporting."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, fields

from .grammar import Grammar

AVLG_MAGIC = b"AVLG"
_HEADER = struct.Struct("<4sBQQ")
_PAIR = struct.Struct("<QQ")


class FormatError(ValueError):
    """Malformed grammar or parse file; ``code`` names the violated rule."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def serialize(g: Grammar, start: int) -> bytes:
    """Binary encoding: header, then one tagged record per rule in id order."""
    count = len(g)
    if not 0 <= start < count:
        raise FormatError("dangling_id", f"start id {start} outside grammar")
    out = bytearray(_HEADER.pack(AVLG_MAGIC, 1, count, start))
    for a in range(count):
        if g.is_terminal(a):
            out.append(0)
            out.append(g.symbol(a))
        else:
            l, r = g.children(a)
            out.append(1)
            out += _PAIR.pack(l, r)
    return bytes(out)


def deserialize(blob: bytes) -> tuple[Grammar, int]:
    """Decode and re-validate a serialized grammar.

    Checks the magic and version, record boundaries, acyclicity (children
    must have smaller ids) and the AVL balance of every rule; each failure
    raises FormatError with a distinct code.
    """
    if len(blob) < _HEADER.size:
        raise FormatError("unexpected_end", "unexpected end of AVLG stream")
    magic, version, count, start = _HEADER.unpack_from(blob)
    if magic != AVLG_MAGIC:
        raise FormatError("bad_magic", "not an AVLG file")
    if version != 1:
        raise FormatError("bad_version", f"unsupported AVLG version {version}")
    g = Grammar()
    pos = _HEADER.size
    end = len(blob)
    for a in range(count):
        if pos >= end:
            raise FormatError("unexpected_end", "unexpected end of AVLG stream")
        tag = blob[pos]
        pos += 1
        if tag == 0:
            if pos >= end:
                raise FormatError("unexpected_end", "unexpected end of AVLG stream")
            nid = g._append_terminal(blob[pos])
            g._terminal_ids.setdefault(blob[pos], nid)
            pos += 1
        elif tag == 1:
            if pos + 16 > end:
                raise FormatError("unexpected_end", "unexpected end of AVLG stream")
            l, r = _PAIR.unpack_from(blob, pos)
            pos += 16
            if l >= a or r >= a:
                raise FormatError("acyclicity", f"rule {a} references id not smaller than itself")
            if abs(g.height(l) - g.height(r)) > 1:
                raise FormatError("avl_violation", f"rule {a} violates the balance condition")
            g._append_binary(l, r)
        else:
            raise FormatError("bad_tag", f"unknown record tag {tag}")
    if not 0 <= start < count:
        raise FormatError("dangling_id", f"start id {start} outside grammar")
    g.start = start
    return g, start


def write_grammar(path: str, g: Grammar, start: int):
    with open(path, "wb") as fh:
        fh.write(serialize(g, start))


def read_grammar(path: str) -> tuple[Grammar, int]:
    with open(path, "rb") as fh:
        return deserialize(fh.read())


def dump_text(g: Grammar) -> str:
    """Debug listing, one rule per line, ids ascending."""
    lines = []
    for a in range(len(g)):
        if g.is_terminal(a):
            lines.append(f"A_{a} -> {g.symbol(a)}")
        else:
            l, r = g.children(a)
            lines.append(f"A_{a} -> A_{l} A_{r}")
    return "\n".join(lines) + "\n"


def verify_against_text(g: Grammar, start: int, data: bytes) -> bool:
    """Streaming comparison of exp(start) against the text; the expansion
    is consumed chunk by chunk, never materialized in full."""
    if g.explen(start) != len(data):
        return False
    mv = memoryview(data)
    pos = 0
    for chunk in g.expand_chunks(start):
        nxt = pos + len(chunk)
        if mv[pos:nxt] != chunk:
            return False
        pos = nxt
    return pos == len(data)


@dataclass(slots=True)
class RunStats:
    """Everything one conversion run reports."""

    algo: str = ""
    n: int = 0
    f: int = 0
    z: int | None = None
    sample_prob: float | None = None
    kr_seed: int | None = None
    paranoid: bool = False
    records: int = 0
    size_pre_flatten: int | None = None
    size: int = 0
    avoided_merges: int = 0
    attempted_merges: int = 0
    # Same counters restricted to source-interval merges, before the final
    # consolidation into one start rule.
    avoided_src_merges: int = 0
    attempted_src_merges: int = 0
    dp_rewritten: int = 0
    dp_pieces_saved: int = 0
    paranoid_collisions: int = 0
    gc_runs: int = 0
    peak_records: int = 0
    wall_time_s: float | None = None
    peak_mem_kb: int | None = None

    @property
    def avoided_pct(self) -> float:
        if self.attempted_merges == 0:
            return 0.0
        return 100.0 * self.avoided_merges / self.attempted_merges

    @property
    def avoided_src_pct(self) -> float:
        if self.attempted_src_merges == 0:
            return 0.0
        return 100.0 * self.avoided_src_merges / self.attempted_src_merges

    @property
    def size_per_z(self) -> float | None:
        if not self.z:
            return None
        return self.size / self.z


STATS_COLUMNS = (
    "file",
    "algo",
    "n",
    "f",
    "z",
    "sample_prob",
    "kr_seed",
    "records",
    "size_pre_flatten",
    "size",
    "size_per_z",
    "avoided_merges",
    "attempted_merges",
    "avoided_pct",
    "avoided_src_merges",
    "attempted_src_merges",
    "avoided_src_pct",
    "dp_rewritten",
    "dp_pieces_saved",
    "paranoid_collisions",
    "gc_runs",
    "peak_records",
    "wall_time_s",
    "peak_mem_kb",
)


def _stats_mapping(stats: RunStats, file: str = "") -> dict:
    out = {"file": file}
    for fld in fields(RunStats):
        out[fld.name] = getattr(stats, fld.name)
    out["avoided_pct"] = round(stats.avoided_pct, 4)
    out["avoided_src_pct"] = round(stats.avoided_src_pct, 4)
    spz = stats.size_per_z
    out["size_per_z"] = None if spz is None else round(spz, 4)
    return out

def stats_csv_header() -> str:
    return ",".join(STATS_COLUMNS)


def stats_csv_row(stats: RunStats, file: str = "") -> str:
    m = _stats_mapping(stats, file)
    cells = []
    for col in STATS_COLUMNS:
        v = m[col]
        if v is None:
            cells.append("")
        elif isinstance(v, float):
            cells.append(f"{v:.6g}")
        else:
            cells.append(str(v))
    return ",".join(cells)


def stats_json(stats: RunStats, file: str = "") -> str:
    return json.dumps(_stats_mapping(stats, file), sort_keys=False)
