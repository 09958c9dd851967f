import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from smtkit import lm
from smtkit.errors import DegenerateCounts, EmptyCorpus, WeightError
from smtkit.lm import BOS, EOS, UNK, Smoothing

CORPORA = {
    "toy": [["a", "b"], ["a", "c"], ["b", "c"]],
    "repeats": [["a", "a", "a", "b"], ["b", "a"], ["a"], ["c", "a", "b", "a", "c"]],
    "medical": [s.split() for s in [
        "the patient received the dose",
        "the dose was reduced",
        "patients with renal impairment received a lower dose",
        "the tablet should be swallowed whole",
        "do not crush the tablet",
        "the patient should not drive",
    ]],
}


def test_count_ngrams_bigram():
    t = lm.count_ngrams([["a", "b"]], order=2)
    assert t.level(1) == {("a",): 1, ("b",): 1, (EOS,): 1}
    assert t.level(2) == {(BOS, "a"): 1, ("a", "b"): 1, ("b", EOS): 1}


def test_count_ngrams_edge_cases():
    assert not lm.count_ngrams([], order=3)
    assert lm.count_ngrams([["a", "a"]], order=1).counts == {("a",): 2, (EOS,): 1}


@pytest.mark.parametrize("name", CORPORA)
@pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
def test_counts_are_suffix_closed(name, order):
    counts = lm.count_ngrams(CORPORA[name], order).counts
    for g, c in counts.items():
        assert c >= 1
        if len(g) > 1:
            assert g[1:] in counts


def test_witten_bell_unigram_fixture():
    # N = 3 tokens, T = 2 types, |V| = 3 with <unk>:
    # p(a) = (2 + 2/3) / (3 + 2) = 8/15
    model = lm.train([["a", "a", "b"]], order=1, smoothing="witten-bell", boundaries=False)
    assert len(model.vocab) == 3
    assert abs(model.prob([], "a") - 8 / 15) < 1e-12
    assert abs(model.prob([], "b") - 5 / 15) < 1e-12
    assert abs(model.prob([], "zzz") - 2 / 15) < 1e-12
    assert abs(lm.perplexity(model, [["a"]]) - 15 / 8) < 1e-12


def _kn_fixture():
    """Interpolated KN bigram on {a b, a c, b c}, worked out by hand.

    bigram counts: <s> a:2, a b:1, a c:1, b </s>:1, c </s>:2, <s> b:1, b c:1
      count-of-counts n1=5 n2=2 -> D2 = 5/9
    unigram continuation counts: a:1 b:2 c:2 </s>:2 (total 7)
      n1=1 n2=3 -> D1 = 1/7; 4 types; |V| = 5 with <unk>
    """
    D2, D1 = Fraction(5, 9), Fraction(1, 7)
    base = Fraction(1, 5)
    uni = {w: (max(c - D1, 0) + D1 * 4 * base) / 7
           for w, c in {"a": 1, "b": 2, "c": 2, EOS: 2, UNK: 0}.items()}
    big = {}
    follow = {"a": {"b": 1, "c": 1}, BOS: {"a": 2, "b": 1}, "b": {EOS: 1, "c": 1}, "c": {EOS: 2}}
    for h, nxt in follow.items():
        total, types = sum(nxt.values()), len(nxt)
        for w in uni:
            c = nxt.get(w, 0)
            big[h, w] = (max(c - D2, 0) + D2 * types * uni[w]) / total
    return D1, D2, uni, big


def test_kneser_ney_bigram_fixture():
    D1, D2, uni, big = _kn_fixture()
    assert uni["a"] == Fraction(34, 245) and uni["b"] == Fraction(69, 245)
    assert big["a", "b"] == Fraction(167, 441)
    model = lm.train(CORPORA["toy"], order=2, smoothing="kneser-ney")
    assert model.discounts == pytest.approx([float(D1), float(D2)], abs=1e-15)
    for w, p in uni.items():
        assert abs(model.prob([], w) - float(p)) < 1e-12
    for (h, w), p in big.items():
        assert abs(model.prob([h], w) - float(p)) < 1e-12


@pytest.mark.parametrize("smoothing", list(Smoothing))
@pytest.mark.parametrize("name", CORPORA)
@pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
def test_normalization(smoothing, name, order):
    model = lm.train(CORPORA[name], order=order, smoothing=smoothing)
    vocab = sorted(model.vocab)
    for h in lm.histories(model):
        total = sum(model.prob(h, w) for w in vocab)
        assert abs(total - 1.0) < 1e-6, (h, total)


def test_degenerate_discount_falls_back():
    # every bigram seen exactly three times: no singletons or doubletons
    model = lm.train([["a", "b"]] * 3, order=2, smoothing="kneser-ney")
    assert model.degenerate
    assert 0.5 in model.discounts
    with pytest.raises(DegenerateCounts):
        lm.estimate_strict(lm.count_ngrams([["a", "b"]] * 3, 2), "kneser-ney")


def test_no_singletons_keeps_unknown_mass():
    # unigram continuation counts are 3, 2, 3, 2: n1 = 0 would give D = 0
    model = lm.train([s.split() for s in ["a b a c", "b a c", "c c a"]], order=2)
    assert model.degenerate
    assert model.prob((), lm.UNK) > 0
    assert lm.perplexity(model, [["zzz", "a"]]) < float("inf")


def test_estimate_empty():
    with pytest.raises(EmptyCorpus):
        lm.estimate(lm.count_ngrams([], 2), "witten-bell")


def test_prob_properties():
    model = lm.train(CORPORA["medical"], order=3, smoothing="kneser-ney")
    assert 0 < model.prob(["the"], "zebra") < 1
    long_hist = ["do", "not", "crush", "the"]
    assert model.prob(long_hist, "tablet") == model.prob(long_hist[-2:], "tablet")


def test_uniform_perplexity_is_vocab_size():
    u = lm.UniformModel(["a", "b", "c", "d"])
    assert lm.perplexity(u, [["a", "x", "b"], ["c"]]) == pytest.approx(5.0, abs=1e-12)


class _Certain(lm.LanguageModel):
    order, boundaries, vocab = 1, True, frozenset()

    def prob(self, history, word):
        return 1.0


def test_certain_model_perplexity_is_one():
    assert lm.perplexity(_Certain(), [["a", "b"]]) == 1.0


@pytest.mark.parametrize("smoothing", list(Smoothing))
@pytest.mark.parametrize("name", CORPORA)
def test_training_perplexity_beats_uniform(smoothing, name):
    corpus = CORPORA[name]
    model = lm.train(corpus, order=3, smoothing=smoothing)
    assert lm.perplexity(model, corpus) <= lm.perplexity(lm.UniformModel(model.vocab), corpus)


words = st.sampled_from(["a", "b", "c", "d"])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(words, min_size=1, max_size=5), min_size=1, max_size=5),
       st.lists(words, min_size=0, max_size=2), words, st.integers(1, 3))
def test_witten_bell_monotone_in_counts(corpus, history, word, order):
    table = lm.count_ngrams(corpus, order)
    history = ([BOS] * order + history)[-(order - 1):] if order > 1 else []
    before = lm.estimate(table, "witten-bell").prob(history, word)
    gram = tuple(history) + (word,)
    for k in range(1, len(gram) + 1):
        table.counts[gram[-k:]] = table.counts.get(gram[-k:], 0) + 1
    after = lm.estimate(table, "witten-bell").prob(history, word)
    assert after >= before - 1e-15


# -- interpolation & tuning ------------------------------------------------------


def test_interpolation_weights():
    a = lm.train(CORPORA["toy"], 2, "kneser-ney")
    b = lm.train(CORPORA["repeats"], 2, "witten-bell")
    mix = lm.interpolate([a, b], [1.0, 0.0])
    for w in ["a", "b", "c", EOS, "q"]:
        assert mix.prob(["a"], w) == a.prob(["a"], w)
    half = lm.interpolate([a, b], [0.5, 0.5])
    for w in ["a", "b", "c"]:
        p1, p2 = a.prob(["a"], w), b.prob(["a"], w)
        assert half.prob(["a"], w) == pytest.approx(0.5 * p1 + 0.5 * p2)
        assert min(p1, p2) <= half.prob(["a"], w) <= max(p1, p2)


def test_interpolation_normalizes_with_shared_vocab():
    a = lm.train(CORPORA["toy"], 2, "kneser-ney")
    b = lm.train(CORPORA["toy"], 2, "witten-bell")
    mix = lm.interpolate([a, b], [0.3, 0.7])
    for h in lm.histories(a):
        assert sum(mix.prob(h, w) for w in a.vocab) == pytest.approx(1.0, abs=1e-9)


def test_interpolation_rejects_bad_weights():
    a = lm.train(CORPORA["toy"], 2)
    for models, weights in [([a, a], [0.5, 0.6]), ([a, a], [1.2, -0.2]), ([a], [1.0])]:
        with pytest.raises(WeightError):
            lm.interpolate(models, weights)


def test_weight_grid():
    assert lm.weight_grid(2, 0.5) == [(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)]
    assert len(lm.weight_grid(3, 0.5)) == 6
    with pytest.raises(WeightError):
        lm.weight_grid(2, 0.3)


def test_tune_prefers_in_domain_model():
    med = lm.train(CORPORA["medical"], 2, "kneser-ney")
    other = lm.train([["x", "y", "z"], ["y", "x"]] * 3, 2, "kneser-ney")
    weights, _ = lm.tune_weights([med, other], CORPORA["medical"][:3])
    assert weights[0] >= 0.5


def test_tune_ties_favor_first_model():
    m = lm.train(CORPORA["toy"], 2)
    weights, _ = lm.tune_weights([m, m], CORPORA["toy"], step=0.5)
    assert weights == [1.0, 0.0]


# -- serialization -----------------------------------------------------------


@pytest.mark.parametrize("smoothing", list(Smoothing))
@pytest.mark.parametrize("order", [1, 2, 3])
def test_table_roundtrip(smoothing, order):
    model = lm.train(CORPORA["medical"], order, smoothing)
    text = lm.dumps(model)
    assert text == lm.dumps(lm.train(CORPORA["medical"], order, smoothing))
    loaded = lm.loads(text)
    assert loaded.vocab == model.vocab
    for h in lm.histories(model) + [("never", "seen")[:order - 1]]:
        for w in list(model.vocab) + ["oov"]:
            assert loaded.prob(h, w) == pytest.approx(model.prob(h, w), rel=1e-12)
    corpus = [["the", "patient", "was", "seen"]]
    assert lm.perplexity(loaded, corpus) == pytest.approx(lm.perplexity(model, corpus), rel=1e-12)


def test_table_header():
    text = lm.dumps(lm.train(CORPORA["toy"], 2, "witten-bell"))
    head = text.splitlines()[:5]
    assert head[1:4] == ["# order=2", "# smoothing=witten-bell", "# vocab_size=5"]
    body = [l.split("\t") for l in text.splitlines() if not l.startswith("#")]
    assert all(len(f) in (3, 4) for f in body)
    assert [int(f[0]) for f in body] == sorted(int(f[0]) for f in body)
    assert math.isclose(10 ** float(dict((f[1], f[2]) for f in body)["a"]),
                        lm.train(CORPORA["toy"], 2, "witten-bell").prob([], "a"))
