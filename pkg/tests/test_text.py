from collections import Counter

import pytest
from hypothesis import given, strategies as st

from smtkit.errors import EmptyCorpus, InvalidEncoding, ValidationError
from smtkit.text import (
    CleanConfig,
    DropReason,
    FrequencyTable,
    RawLine,
    SentencePair,
    build_frequency_table,
    clean_corpus,
    clean_pair,
    decode_lines,
    format_drop_report,
    normalize_punctuation,
    split_compounds,
    stem_for_alignment,
    tokenize,
    train_truecaser,
    truecase,
)

text_st = st.text(
    alphabet=st.sampled_from(list('ab .,;:!?"()-\'') + ["“", "”", "\u2013", "…", " ", "„"]),
    max_size=30,
)


# -- ingestion -----------------------------------------------------------------

def test_decode_rejects_invalid_utf8():
    with pytest.raises(InvalidEncoding):
        decode_lines(b"ok\n\xff\xfe broken\n")


def test_decode_numbers_lines():
    lines = decode_lines("zdanie pierwsze\nKupiłem sobie nowy samochód\n".encode())
    assert [(l.line_number, l.text) for l in lines] == [
        (1, "zdanie pierwsze"), (2, "Kupiłem sobie nowy samochód")]


def test_rawline_rejects_newline():
    with pytest.raises(ValidationError):
        RawLine("a\nb", 1)


# -- punctuation ---------------------------------------------------------------

@pytest.mark.parametrize("raw, expected", [
    ("“Hello” \u2013 world…", '"Hello" - world...'),
    ("plain ascii.", "plain ascii."),
    ("a  b", "a b"),
    ("„Cytat” i «inny»", '"Cytat" i "inny"'),
    ("it’s ‘x’ ‚y", "it's 'x' 'y"),
    ("a  b \u2014 c", "a b - c"),
])
def test_normalize_punctuation(raw, expected):
    assert normalize_punctuation(raw) == expected


@given(text_st)
def test_normalize_is_idempotent(s):
    once = normalize_punctuation(s)
    assert normalize_punctuation(once) == once


# -- tokenizer -----------------------------------------------------------------

@pytest.mark.parametrize("raw, expected", [
    ("I have bought myself a new car.", ["I", "have", "bought", "myself", "a", "new", "car", "."]),
    ("abc", ["abc"]),
    ("sub-heading 1a:", ["sub-heading", "1a", ":"]),
    ('("quoted," she said)', ["(", '"', "quoted", ",", '"', "she", "said", ")"]),
    ("don't stop!", ["don't", "stop", "!"]),
    ("", []),
])
def test_tokenize(raw, expected):
    assert tokenize(raw) == expected


@given(text_st)
def test_tokenize_roundtrip_is_idempotent(s):
    toks = tokenize(normalize_punctuation(s))
    assert all(t and not any(ch.isspace() for ch in t) for t in toks)
    assert tokenize(" ".join(toks)) == toks


# -- truecaser -----------------------------------------------------------------

def test_truecaser_majority_form():
    corpus = [["We", "visited", "Paris"]] * 5 + [["in", "paris"]]
    model = train_truecaser(corpus)
    assert model.best_form["paris"] == "Paris"
    assert model.evidence["paris"] == 6


def test_truecaser_single_token_sentence_has_no_evidence():
    assert train_truecaser([["Hello"]]).evidence == {}


def test_truecaser_ignores_sentence_initial():
    corpus = [["The", "dog"]] * 10 + [["see", "the", "dog"]] * 3
    assert train_truecaser(corpus).best_form["the"] == "the"


def test_truecaser_tie_breaks_lexicographically():
    model = train_truecaser([["x", "Ala"], ["x", "ala"]])
    assert model.best_form["ala"] == "Ala"


def test_truecaser_empty_corpus():
    with pytest.raises(EmptyCorpus):
        train_truecaser([])


def test_truecase_examples():
    model = train_truecaser([["a", "the", "Paris"]])
    assert truecase(["The", "cat"], model) == ["the", "cat"]
    assert truecase(["Paris", "is"], model) == ["Paris", "is"]
    assert truecase([], model) == []
    assert truecase(["Unknown", "Word"], model) == ["unknown", "Word"]


@given(st.lists(st.lists(st.sampled_from(["A", "a", "B", "b", "The", "the"]), max_size=5), min_size=1),
       st.lists(st.sampled_from(["A", "a", "B", "The", "x"]), max_size=6))
def test_truecase_touches_only_first_token(corpus, sentence):
    out = truecase(sentence, train_truecaser(corpus))
    assert out[1:] == sentence[1:]
    assert len(out) == len(sentence)


# -- cleaning ------------------------------------------------------------------

def _pair(ns, nt, pid=0, word="w"):
    return SentencePair([word] * ns, [word] * nt, pid)


def test_clean_too_long():
    assert clean_pair(_pair(81, 10), CleanConfig(), set()) is DropReason.TooLong


def test_clean_80_is_kept():
    assert clean_pair(_pair(80, 80), CleanConfig(), set()) is None


def test_clean_duplicate():
    seen = set()
    cfg = CleanConfig()
    assert clean_pair(_pair(3, 3), cfg, seen) is None
    assert clean_pair(_pair(3, 3, pid=1), cfg, seen) is DropReason.Duplicate
    assert clean_pair(_pair(3, 3, pid=2), CleanConfig(drop_duplicates=False), seen) is None


def test_clean_ratio_empty_foreign_unfinished():
    cfg = CleanConfig(require_terminal_punct=True)
    assert clean_pair(_pair(1, 10), cfg, set()) is DropReason.BadRatio
    assert clean_pair(_pair(0, 3), cfg, set()) is DropReason.Empty
    cyr = SentencePair(["привет", "мир"], ["hello", "world"], 0)
    assert clean_pair(cyr, cfg, set()) is DropReason.ForeignScript
    assert clean_pair(SentencePair(["a", "b"], ["c", "d"], 0), cfg, set()) is DropReason.Unfinished
    assert clean_pair(SentencePair(["a", "."], ["c", "!"], 0), cfg, set()) is None


def test_clean_first_failing_rule_wins():
    # both too long and badly proportioned: TooLong comes first
    assert clean_pair(_pair(90, 5), CleanConfig(), set()) is DropReason.TooLong


def test_polish_letters_are_latin():
    pair = SentencePair(tokenize("Kupiłem sobie nowy samochód ."), ["I", "bought", "a", "car", "."], 0)
    assert clean_pair(pair, CleanConfig(), set()) is None


def test_config_validation():
    with pytest.raises(ValidationError):
        CleanConfig(max_tokens=0)
    with pytest.raises(ValidationError):
        CleanConfig(foreign_char_ratio=1.5)


@given(st.lists(st.tuples(st.integers(0, 100), st.integers(0, 100)), max_size=40))
def test_clean_corpus_length_bound(lengths):
    pairs = [_pair(a, b, pid=i, word=str(i % 3)) for i, (a, b) in enumerate(lengths)]
    kept, dropped = clean_corpus(pairs, CleanConfig())
    assert all(len(p.source) <= 80 and len(p.target) <= 80 for p in kept)
    ids = [pid for pid, _ in dropped]
    assert len(ids) == len(set(ids))
    assert len(kept) + len(dropped) == len(pairs)


def test_drop_report_format():
    assert format_drop_report([(3, DropReason.TooLong)]) == "pair_id\treason\n3\tTooLong\n"


# -- frequency table & compound splitting ------------------------------------

def test_frequency_table():
    t = build_frequency_table([tokenize("a a b")])
    assert t.counts == Counter({"a": 2, "b": 1}) and t.total == 3
    assert build_frequency_table([]).total == 0
    assert build_frequency_table([["a"], ["a"]]).counts == Counter({"a": 2})
    assert t["zzz"] == 0


def _table(**counts):
    c = Counter(counts)
    return FrequencyTable(c, sum(c.values()))


def test_split_flowerpot():
    # sqrt(50 * 40) = 44.7 > 2
    assert split_compounds("flowerpot", _table(flower=50, pot=40, flowerpot=2)) == ["flower", "pot"]


def test_no_split_when_whole_word_is_frequent():
    assert split_compounds("flowerpot", _table(flower=1, pot=1, flowerpot=10)) == ["flowerpot"]


def test_no_split_short_word():
    assert split_compounds("cat", _table(cat=1, ca=5, t=5)) == ["cat"]


def test_split_equal_geometric_mean_is_not_enough():
    # sqrt(4 * 9) == 6, must strictly exceed
    assert split_compounds("abcdef", _table(abc=4, **{"def": 9}, abcdef=6)) == ["abcdef"]


def test_split_prefers_fewer_parts_on_ties():
    t = _table(aaabbb=0, aaa=10, bbb=10, aaabbbccc=1, ccc=10, bbbccc=10)
    # (aaa, bbbccc) and (aaa, bbb, ccc) share the geometric mean 10
    assert split_compounds("aaabbbccc", t) == ["aaa", "bbbccc"]


def test_split_with_filler():
    t = _table(arbeit=30, amt=20, arbeitsamt=1)
    assert split_compounds("arbeitsamt", t, fillers={"s"}) == ["arbeit", "amt"]
    assert split_compounds("arbeitsamt", t) == ["arbeitsamt"]


@given(st.text(alphabet="ab", min_size=1, max_size=10),
       st.dictionaries(st.text(alphabet="ab", min_size=1, max_size=6), st.integers(0, 50)))
def test_split_concatenates_to_input(word, counts):
    parts = split_compounds(word, _table(**counts), min_part_len=2)
    assert "".join(parts) == word


# -- stemming ------------------------------------------------------------------

def test_stem_for_alignment():
    assert stem_for_alignment(["samochód"]) == ["samo"]
    assert stem_for_alignment(["a", "b"]) == ["a", "b"]
    assert stem_for_alignment(["kupiłem", "."]) == ["kupi", "."]
    assert stem_for_alignment(["żółtość", "..."], k=2) == ["żó", "..."]
    with pytest.raises(ValidationError):
        stem_for_alignment(["x"], k=0)
