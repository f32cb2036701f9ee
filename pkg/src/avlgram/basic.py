"""Baseline converter: one rule per processed prefix.

After each phrase the grammar holds a rule expanding to everything parsed
so far; each copy phrase is cut out of that rule and concatenated back on.
Simple, but every concatenation rebuilds a logarithmic spine, so the
output grammar carries a large O(f log n) constant. It exists as the
reference point for the lazy converter's size comparisons.
"""

from __future__ import annotations

from .grammar import Grammar
from .lz77 import Factorization, validate_factorization


def convert_basic(fact: Factorization) -> tuple[Grammar, int]:
    """Build an AVL grammar generating the text of ``fact``.

    Returns (grammar, start id). No pruning is applied; call
    ``grammar.prune([start])`` separately for the reachable subset.
    Raises ValueError if the factorization is inconsistent.
    """
    report = validate_factorization(fact)
    if not report.ok:
        where = "" if report.bad_index is None else f" (phrase {report.bad_index})"
        raise ValueError(f"invalid factorization: {report.message}{where}")
    g = Grammar()
    prefix = None
    built = 0
    for ph in fact.phrases:
        if ph.is_literal:
            piece = g.add_symbol(ph.value)
            prefix = piece if prefix is None else g.add_merged(prefix, piece)
            built += 1
        else:
            # Overlapping sources are consumed in rounds: each pass copies
            # as much as already exists, at least doubling the overlap.
            pos = ph.value
            remaining = ph.length
            while remaining:
                end = min(pos + remaining - 1, built)
                piece = g.add_substring(prefix, pos, end)
                prefix = g.add_merged(prefix, piece)
                took = end - pos + 1
                built += took
                remaining -= took
                pos += took
    g.start = prefix
    return g, prefix
