"""Command-line front end: parse, convert, verify, stats, repair, bench,
gen-corpus."""

from __future__ import annotations

import argparse
import os
import resource
import sys
import time

from .basic import convert_basic
from .corpus import write_corpus_file
from .lazy import DEFAULT_SAMPLE_PROB, convert_lazy
from .lz77 import LZFormatError, lz77_parse, read_lz7f, write_lz7f
from .repair import repair_compress
from .serialization import (
    FormatError,
    RunStats,
    read_grammar,
    stats_csv_header,
    stats_csv_row,
    stats_json,
    verify_against_text,
    write_grammar,
)

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


def _peak_rss_kb() -> int:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise SystemExit(f"error: cannot read {path}: {exc.strerror}")


def _append_csv(path: str, row: str):
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a") as fh:
        if fresh:
            fh.write(stats_csv_header() + "\n")
        fh.write(row + "\n")


def _cmd_parse(args) -> int:
    data = _read_bytes(args.text)
    if not data:
        print(f"error: {args.text} is empty", file=sys.stderr)
        return EXIT_DATA
    t0 = time.perf_counter()
    fact = lz77_parse(data)
    dt = time.perf_counter() - t0
    out = args.output or args.text + ".lz7f"
    write_lz7f(fact, out)
    print(f"n={fact.n} z={fact.f} n/z={fact.n / fact.f:.2f} time={dt:.3f}s -> {out}")
    return EXIT_OK


def _cmd_convert(args) -> int:
    try:
        fact = read_lz7f(args.parse_file)
    except LZFormatError as exc:
        print(f"error: {args.parse_file}: {exc}", file=sys.stderr)
        return EXIT_DATA
    t0 = time.perf_counter()
    if args.algo == "basic":
        g, start = convert_basic(fact)
        peak = len(g)
        if args.prune:
            g, remap = g.prune([start])
            start = remap[start]
        stats = RunStats(algo="basic", n=fact.n, f=fact.f, records=len(g),
                         size=g.size(), peak_records=peak)
    else:
        g, start, stats = convert_lazy(fact, args.sample_prob, args.kr_seed, args.paranoid)
    stats.wall_time_s = time.perf_counter() - t0
    stats.peak_mem_kb = _peak_rss_kb()
    if args.verify_with:
        text = _read_bytes(args.verify_with)
        if not verify_against_text(g, start, text):
            print("error: grammar does not generate the reference text", file=sys.stderr)
            return EXIT_DATA
    out = args.output or args.parse_file + ".avlg"
    write_grammar(out, g, start)
    print(stats_json(stats, file=args.parse_file))
    if args.csv:
        _append_csv(args.csv, stats_csv_row(stats, file=args.parse_file))
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        g, start = read_grammar(args.grammar)
    except FormatError as exc:
        print(f"error: {args.grammar}: {exc}", file=sys.stderr)
        return EXIT_DATA
    text = _read_bytes(args.text)
    if verify_against_text(g, start, text):
        print("ok")
        return EXIT_OK
    print("mismatch", file=sys.stderr)
    return EXIT_DATA


def _cmd_stats(args) -> int:
    try:
        g, start = read_grammar(args.grammar)
    except FormatError as exc:
        print(f"error: {args.grammar}: {exc}", file=sys.stderr)
        return EXIT_DATA
    stats = RunStats(algo="file", n=g.explen(start), records=len(g), size=g.size(),
                     peak_records=len(g))
    print(stats_json(stats, file=args.grammar))
    return EXIT_OK


def _cmd_repair(args) -> int:
    data = _read_bytes(args.text)
    if not data:
        print(f"error: {args.text} is empty", file=sys.stderr)
        return EXIT_DATA
    t0 = time.perf_counter()
    result = repair_compress(data)
    dt = time.perf_counter() - t0
    print(f"n={len(data)} rules={len(result.rules)} final={len(result.sequence)} "
          f"size={result.size} time={dt:.3f}s")
    if args.csv:
        stats = RunStats(algo="repair", n=len(data), size=result.size,
                         records=len(result.rules), wall_time_s=dt,
                         peak_mem_kb=_peak_rss_kb())
        _append_csv(args.csv, stats_csv_row(stats, file=args.text))
    return EXIT_OK


BENCH_COLUMNS = ("file", "n", "z", "n_per_z", "basic", "basic_pruned", "lazy", "repair",
                 "basic_per_z", "lazy_per_z", "repair_per_z", "lazy_vs_repair",
                 "avoided_pct", "parse_s", "basic_s", "lazy_s", "repair_s")


def _cmd_bench(args) -> int:
    try:
        names = sorted(os.listdir(args.corpus))
    except OSError as exc:
        print(f"error: cannot list {args.corpus}: {exc.strerror}", file=sys.stderr)
        return EXIT_DATA
    rows = []
    for name in names:
        path = os.path.join(args.corpus, name)
        if not os.path.isfile(path):
            continue
        try:
            rows.append(_bench_one(path, args))
        except Exception as exc:  # keep going; report per-file failures
            print(f"error: {name}: {exc}", file=sys.stderr)
    header = ",".join(BENCH_COLUMNS)
    lines = [header] + [",".join(str(c) for c in row) for row in rows]
    table = "\n".join(lines)
    print(table)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(table + "\n")
    return EXIT_OK


def _bench_one(path: str, args):
    data = _read_bytes(path)
    t0 = time.perf_counter()
    fact = lz77_parse(data)
    parse_s = time.perf_counter() - t0
    z = fact.f

    t0 = time.perf_counter()
    gb, sb = convert_basic(fact)
    basic_s = time.perf_counter() - t0
    basic_size = gb.size()
    pruned, _ = gb.prune([sb])
    pruned_size = pruned.size()
    del gb, pruned

    t0 = time.perf_counter()
    gl, sl, stats = convert_lazy(fact, args.sample_prob, args.kr_seed, args.paranoid)
    lazy_s = time.perf_counter() - t0
    if not verify_against_text(gl, sl, data):
        raise RuntimeError("lazy grammar failed verification")
    lazy_size = gl.size()
    del gl

    t0 = time.perf_counter()
    rp = repair_compress(data)
    repair_s = time.perf_counter() - t0

    return (os.path.basename(path), len(data), z, round(len(data) / z, 2),
            basic_size, pruned_size, lazy_size, rp.size,
            round(basic_size / z, 3), round(lazy_size / z, 3), round(rp.size / z, 3),
            round(lazy_size / rp.size, 3), round(stats.avoided_pct, 3),
            round(parse_s, 3), round(basic_s, 3), round(lazy_s, 3), round(repair_s, 3))


def _cmd_gen_corpus(args) -> int:
    size = write_corpus_file(args.out, args.seed_size, args.copies, args.mutation_rate,
                             seed=args.seed, alphabet=args.alphabet)
    print(f"wrote {size} bytes to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="avlgram",
                                 description="LZ77 to AVL grammar toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="compute the LZ77 parse of a text file")
    p.add_argument("text")
    p.add_argument("-o", "--output", help="output .lz7f path")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("convert", help="convert an .lz7f parse into a grammar")
    p.add_argument("parse_file")
    p.add_argument("--algo", choices=("basic", "lazy"), default="lazy")
    p.add_argument("--sample-prob", type=float, default=DEFAULT_SAMPLE_PROB,
                   help="fingerprint sampling probability (lazy only)")
    p.add_argument("--kr-seed", type=int, default=0, help="fingerprint RNG seed")
    p.add_argument("--paranoid", action="store_true",
                   help="verify fingerprint hits by full expansion equality")
    p.add_argument("--prune", action="store_true",
                   help="drop unreachable rules before writing (basic only)")
    p.add_argument("--verify-with", metavar="TEXT",
                   help="check the grammar against this text file")
    p.add_argument("--csv", help="append a stats row to this CSV file")
    p.add_argument("-o", "--output", help="output .avlg path")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("verify", help="check a grammar file against a text file")
    p.add_argument("grammar")
    p.add_argument("text")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stats", help="print statistics of a grammar file")
    p.add_argument("grammar")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("repair", help="run the pair-replacement baseline")
    p.add_argument("text")
    p.add_argument("--csv", help="append a stats row to this CSV file")
    p.set_defaults(func=_cmd_repair)

    p = sub.add_parser("bench", help="compare all converters over a corpus directory")
    p.add_argument("corpus")
    p.add_argument("--sample-prob", type=float, default=DEFAULT_SAMPLE_PROB)
    p.add_argument("--kr-seed", type=int, default=0)
    p.add_argument("--paranoid", action="store_true")
    p.add_argument("--csv", help="write the result table to this CSV file")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gen-corpus", help="generate a synthetic repetitive file")
    p.add_argument("--seed-size", type=int, required=True)
    p.add_argument("--copies", type=int, required=True)
    p.add_argument("--mutation-rate", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", type=int, default=4)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
