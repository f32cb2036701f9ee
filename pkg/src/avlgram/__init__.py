"""avlgram: LZ77 parsing and conversion into small balanced grammars."""

from .basic import convert_basic
from .containers import BlockedArray, RootsSequence, SideTables
from .fingerprints import MERSENNE61, DedupMap, FingerprintContext
from .grammar import Grammar, NonterminalRecord
from .lazy import DEFAULT_SAMPLE_PROB, LazyConverter, convert_lazy
from .lz77 import (
    Factorization,
    LZFormatError,
    Phrase,
    ValidationReport,
    lz77_parse,
    lz77_parse_slow,
    lz_decode,
    read_lz7f,
    validate_factorization,
    write_lz7f,
)
from .repair import RepairResult, repair_compress, repair_decode, repair_size
from .serialization import (
    FormatError,
    RunStats,
    deserialize,
    dump_text,
    read_grammar,
    serialize,
    stats_csv_header,
    stats_csv_row,
    stats_json,
    verify_against_text,
    write_grammar,
)

__version__ = "0.1.0"

__all__ = [
    "BlockedArray",
    "DedupMap",
    "DEFAULT_SAMPLE_PROB",
    "Factorization",
    "FingerprintContext",
    "FormatError",
    "Grammar",
    "LazyConverter",
    "LZFormatError",
    "MERSENNE61",
    "NonterminalRecord",
    "Phrase",
    "RepairResult",
    "RootsSequence",
    "RunStats",
    "SideTables",
    "ValidationReport",
    "convert_basic",
    "convert_lazy",
    "deserialize",
    "dump_text",
    "lz77_parse",
    "lz77_parse_slow",
    "lz_decode",
    "read_grammar",
    "read_lz7f",
    "repair_compress",
    "repair_decode",
    "repair_size",
    "serialize",
    "stats_csv_header",
    "stats_csv_row",
    "stats_json",
    "validate_factorization",
    "verify_against_text",
    "write_grammar",
    "write_lz7f",
]
