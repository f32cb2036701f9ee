import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avlgram.lz77 import (
    Factorization,
    LZFormatError,
    Phrase,
    lz77_parse,
    lz77_parse_slow,
    lz_decode,
    read_lz7f,
    validate_factorization,
    write_lz7f,
)

from conftest import PAPER_PHRASES, random_text


def phrase_tuples(fact):
    return [(p.value, p.length) for p in fact.phrases]


def test_known_example_exact(paper_text):
    fact = lz77_parse(paper_text)
    assert phrase_tuples(fact) == PAPER_PHRASES
    assert fact.f == 7
    assert fact.n == len(paper_text)


def test_known_example_slow_parser_agrees(paper_text):
    assert phrase_tuples(lz77_parse_slow(paper_text)) == PAPER_PHRASES


def test_single_symbol():
    fact = lz77_parse(b"a")
    assert phrase_tuples(fact) == [(ord("a"), 0)]


def test_aaaa_overlapping_copy():
    # Brute force: the longest previous factor at position 2 is "aaa",
    # sourced at position 1 with overlap.
    fact = lz77_parse(b"aaaa")
    assert phrase_tuples(fact) == [(ord("a"), 0), (1, 3)]


def test_empty_input_rejected():
    with pytest.raises(ValueError, match="empty text"):
        lz77_parse(b"")
    with pytest.raises(ValueError, match="empty text"):
        lz77_parse_slow(b"")


def test_decode_known_example(paper_text):
    fact = Factorization([Phrase(v, le) for v, le in PAPER_PHRASES], 19)
    assert lz_decode(fact) == paper_text


def test_decode_single_and_overlap():
    assert lz_decode(Factorization([Phrase(ord("a"), 0)], 1)) == b"a"
    fact = Factorization([Phrase(ord("a"), 0), Phrase(1, 3)], 4)
    assert lz_decode(fact) == b"aaaa"


def test_decode_rejects_bad_source():
    fact = Factorization([Phrase(ord("a"), 0), Phrase(5, 2)], 3)
    with pytest.raises(ValueError, match="invalid factorization"):
        lz_decode(fact)


def test_parsers_agree_on_random_texts():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randrange(1, 500)
        sigma = rng.choice([1, 2, 4, 16, 256])
        data = random_text(rng, n, sigma)
        fa = lz77_parse(data)
        fb = lz77_parse_slow(data)
        assert fa.phrases == fb.phrases
        assert lz_decode(fa) == data


@settings(max_examples=150, deadline=None)
@given(st.binary(min_size=1, max_size=300))
def test_round_trip_property(data):
    assert lz_decode(lz77_parse(data)) == data


def test_greediness_brute_force():
    # No previous factor of length ell+1 may start where a phrase of
    # length ell was chosen.
    rng = random.Random(2)
    for _ in range(40):
        data = random_text(rng, rng.randrange(2, 400), rng.choice([2, 4]))
        fact = lz77_parse(data)
        pos = 0
        for ph in fact.phrases:
            ell = ph.decoded_length
            longer = data[pos : pos + ell + 1]
            if pos + ell < len(data):
                found = data.find(longer, 0, pos + len(longer) - 1)
                assert found == -1, (data, pos, ell)
            pos += ell


def test_phrase_count_matches_oracle_on_long_text():
    rng = random.Random(3)
    data = random_text(rng, 10_000, 2)
    assert lz77_parse(data).f == lz77_parse_slow(data).f


def test_rightmost_source_tie_break():
    # "abab|ab": sources 1 and 3 both provide "ab"; the most recent wins.
    fact = lz77_parse(b"ababab")
    assert phrase_tuples(fact)[-1] == (3, 2) or phrase_tuples(fact) == [
        (ord("a"), 0),
        (ord("b"), 0),
        (1, 4),
    ]


def test_self_referential_predicate():
    assert Phrase(1, 3).is_self_referential(2)
    assert not Phrase(1, 1).is_self_referential(2)
    assert not Phrase(ord("a"), 0).is_self_referential(5)


def test_validate_known_example(paper_text):
    fact = lz77_parse(paper_text)
    report = validate_factorization(fact, paper_text)
    assert report.ok


def test_validate_source_beyond_prefix():
    fact = Factorization([Phrase(ord("a"), 0), Phrase(5, 2)], 3)
    report = validate_factorization(fact)
    assert not report.ok
    assert report.bad_index == 1
    assert "source beyond written prefix" in report.message


def test_validate_detects_random_mutation():
    rng = random.Random(4)
    for _ in range(200):
        data = random_text(rng, rng.randrange(4, 200), rng.choice([2, 4]))
        fact = lz77_parse(data)
        phrases = list(fact.phrases)
        k = rng.randrange(len(phrases))
        ph = phrases[k]
        if ph.is_literal:
            mutated = Phrase((ph.value + 1) % 256, 0)
        elif rng.random() < 0.5 and ph.value > 1:
            mutated = Phrase(ph.value - 1, ph.length)
        else:
            mutated = Phrase(ph.value, ph.length + 1)
        phrases[k] = mutated
        report = validate_factorization(Factorization(phrases, fact.n), data)
        assert not report.ok
        if report.bad_index is not None:
            assert report.bad_index <= k


def test_lz7f_round_trip(tmp_path, paper_text):
    fact = lz77_parse(paper_text)
    path = str(tmp_path / "x.lz7f")
    write_lz7f(fact, path)
    back = read_lz7f(path)
    assert back.phrases == fact.phrases
    assert back.n == fact.n


def test_lz7f_errors(tmp_path, paper_text):
    fact = lz77_parse(paper_text)
    path = str(tmp_path / "x.lz7f")
    write_lz7f(fact, path)
    raw = open(path, "rb").read()

    trunc = str(tmp_path / "trunc.lz7f")
    open(trunc, "wb").write(raw[:-5])
    with pytest.raises(LZFormatError) as exc:
        read_lz7f(trunc)
    assert exc.value.code == "unexpected_end"

    bad = str(tmp_path / "bad.lz7f")
    open(bad, "wb").write(b"XXXX" + raw[4:])
    with pytest.raises(LZFormatError) as exc:
        read_lz7f(bad)
    assert exc.value.code == "bad_magic"
