"""Smoothed n-gram language models.

Counts are collected with ``order - 1`` sentence-begin pads and one
sentence-end token per sentence. Two estimators are provided: Witten-Bell
interpolation and interpolated Kneser-Ney with count-of-count discounts.
Both bottom out in a uniform distribution over the vocabulary, which
includes the unknown-word symbol.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DegenerateCounts, EmptyCorpus, ValidationError, WeightError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

NGram = tuple[str, ...]


class Smoothing(enum.Enum):
    WittenBell = "witten-bell"
    KneserNey = "kneser-ney"


@dataclass
class CountTable:
    order: int
    counts: dict[NGram, int] = field(default_factory=dict)
    boundaries: bool = True

    def level(self, k: int) -> dict[NGram, int]:
        return {g: c for g, c in self.counts.items() if len(g) == k}

    def __bool__(self) -> bool:
        return bool(self.counts)


def _events(sentence: Sequence[str], order: int, boundaries: bool):
    """Yield (padded history, word) for every predicted position."""
    pad = [BOS] * (order - 1) if boundaries else []
    seq = pad + list(sentence) + ([EOS] if boundaries else [])
    for i in range(len(pad), len(seq)):
        yield tuple(seq[max(0, i - order + 1):i]), seq[i]


def count_ngrams(corpus: Iterable[Sequence[str]], order: int = 5,
                 boundaries: bool = True) -> CountTable:
    if order < 1:
        raise ValidationError("order must be at least 1")
    counts: Counter = Counter()
    for sentence in corpus:
        for history, word in _events(sentence, order, boundaries):
            for k in range(len(history) + 1):
                counts[history[len(history) - k:] + (word,)] += 1
    return CountTable(order, dict(counts), boundaries)


def _map_token(tok: str, vocab: frozenset) -> str:
    return tok if tok in vocab or tok == BOS else UNK


class LanguageModel:
    """Shared query surface: ``prob``, ``order``, ``boundaries``, ``vocab``."""

    order: int
    boundaries: bool
    vocab: frozenset

    def prob(self, history: Sequence[str], word: str) -> float:
        raise NotImplementedError

    def logprob(self, history: Sequence[str], word: str) -> float:
        return math.log(self.prob(history, word))


class UniformModel(LanguageModel):
    def __init__(self, vocab: Iterable[str], order: int = 1, boundaries: bool = True):
        self.vocab = frozenset(vocab) | {UNK}
        self.order = order
        self.boundaries = boundaries

    def prob(self, history, word):
        return 1.0 / len(self.vocab)


@dataclass
class _Level:
    counts: dict[NGram, int]
    history_total: dict[NGram, int]
    history_types: dict[NGram, int]
    discount: float = 0.0


class NGramModel(LanguageModel):
    def __init__(self, order: int, smoothing: Smoothing, vocab: Iterable[str],
                 levels: list[_Level], boundaries: bool = True, degenerate: bool = False):
        self.order = order
        self.smoothing = smoothing
        self.vocab = frozenset(vocab) | {UNK}
        self.levels = levels
        self.boundaries = boundaries
        # set when some order had no count-of-count evidence for its discount
        self.degenerate = degenerate

    @property
    def discounts(self) -> list[float]:
        return [lvl.discount for lvl in self.levels]

    def _context(self, history: Sequence[str]) -> NGram:
        history = tuple(_map_token(t, self.vocab) for t in history)
        keep = self.order - 1
        return history[len(history) - keep:] if keep else ()

    def prob(self, history: Sequence[str], word: str) -> float:
        word = _map_token(word, self.vocab)
        if word == BOS:
            word = UNK
        return self._prob(self._context(history), word)

    def _prob(self, history: NGram, word: str) -> float:
        p = 1.0 / len(self.vocab)
        kn = self.smoothing is Smoothing.KneserNey
        for k in range(len(history) + 1):
            h = history[len(history) - k:]
            lvl = self.levels[k]
            total = lvl.history_total.get(h, 0)
            if total == 0:
                continue
            c = lvl.counts.get(h + (word,), 0)
            types = lvl.history_types[h]
            if kn:
                d = lvl.discount
                p = (max(c - d, 0.0) + d * types * p) / total
            else:
                p = (c + types * p) / (total + types)
        return p

    def backoff_weight(self, history: NGram) -> float | None:
        """Mass handed to the shorter history, or None for an unseen history."""
        lvl = self.levels[len(history)]
        total = lvl.history_total.get(history, 0)
        if total == 0:
            return None
        types = lvl.history_types[history]
        if self.smoothing is Smoothing.KneserNey:
            return lvl.discount * types / total
        return types / (total + types)


def _history_stats(counts: dict[NGram, int]) -> tuple[dict, dict]:
    total: dict[NGram, int] = defaultdict(int)
    types: dict[NGram, int] = defaultdict(int)
    for g, c in counts.items():
        total[g[:-1]] += c
        types[g[:-1]] += 1
    return dict(total), dict(types)


def _kn_discount(counts: dict[NGram, int]) -> tuple[float, bool]:
    coc = Counter(counts.values())
    n1, n2 = coc.get(1, 0), coc.get(2, 0)
    # without singletons the estimate is 0 and unseen words would get no mass
    if n1 == 0:
        return 0.5, True
    return n1 / (n1 + 2 * n2), False


def estimate(table: CountTable, smoothing: Smoothing | str = Smoothing.KneserNey) -> NGramModel:
    smoothing = Smoothing(smoothing)
    if not table:
        raise EmptyCorpus("cannot estimate a model from an empty count table")
    by_level = [table.level(k) for k in range(1, table.order + 1)]
    vocab = {g[0] for g in by_level[0]}
    levels: list[_Level] = []
    degenerate = False
    for k, raw in enumerate(by_level, 1):
        if smoothing is Smoothing.KneserNey and k < table.order:
            # continuation count: number of distinct left extensions
            cont: Counter = Counter(g[1:] for g in by_level[k])
            counts = {g: cont[g] for g in raw if cont[g] > 0}
        else:
            counts = raw
        total, types = _history_stats(counts)
        discount = 0.0
        if smoothing is Smoothing.KneserNey:
            discount, bad = _kn_discount(counts)
            degenerate = degenerate or bad
        levels.append(_Level(counts, total, types, discount))
    return NGramModel(table.order, smoothing, vocab, levels, table.boundaries, degenerate)


def estimate_strict(table: CountTable, smoothing: Smoothing | str = Smoothing.KneserNey) -> NGramModel:
    """Like :func:`estimate` but raise instead of falling back to D = 0.5."""
    model = estimate(table, smoothing)
    if model.degenerate:
        raise DegenerateCounts("an order has neither singleton nor doubleton counts")
    return model


def train(corpus: Iterable[Sequence[str]], order: int = 5,
          smoothing: Smoothing | str = Smoothing.KneserNey, boundaries: bool = True) -> NGramModel:
    return estimate(count_ngrams(corpus, order, boundaries), smoothing)


def histories(model: NGramModel) -> list[NGram]:
    """Every history with training evidence, shortest first."""
    out = []
    for lvl in model.levels:
        out.extend(sorted(lvl.history_total))
    return out


def perplexity(model: LanguageModel, corpus: Iterable[Sequence[str]]) -> float:
    """exp of the mean negative natural-log probability per predicted token.

    End-of-sentence tokens count when the model was trained with sentence
    boundaries; begin pads never do.
    """
    total, n = 0.0, 0
    for sentence in corpus:
        for history, word in _events(sentence, model.order, model.boundaries):
            total += math.log(model.prob(history, word))
            n += 1
    if n == 0:
        raise EmptyCorpus("no tokens to evaluate")
    return math.exp(-total / n)


# -- mixtures ------------------------------------------------------------------


class InterpolatedModel(LanguageModel):
    def __init__(self, components: Sequence[LanguageModel], weights: Sequence[float]):
        if len(components) < 2 or len(weights) != len(components):
            raise WeightError("need at least two models and one weight per model")
        if any(not (0.0 <= w <= 1.0) for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
            raise WeightError(f"weights must lie in [0, 1] and sum to 1, got {list(weights)}")
        if len({m.boundaries for m in components}) != 1:
            raise ValidationError("components disagree on sentence boundaries")
        self.components = list(components)
        self.weights = [float(w) for w in weights]
        self.order = max(m.order for m in components)
        self.boundaries = components[0].boundaries
        self.vocab = frozenset().union(*(m.vocab for m in components))

    def prob(self, history, word):
        return sum(w * m.prob(history, word) for w, m in zip(self.weights, self.components))


def interpolate(models: Sequence[LanguageModel], weights: Sequence[float]) -> InterpolatedModel:
    return InterpolatedModel(models, weights)


def weight_grid(n_models: int, step: float = 0.05) -> list[tuple[float, ...]]:
    """All weight vectors on the simplex with coordinates in multiples of step.

    Ordered so that vectors with more weight on earlier models come first.
    """
    steps = round(1.0 / step)
    if steps < 1 or abs(steps * step - 1.0) > 1e-9:
        raise WeightError(f"grid step {step} does not divide 1")
    grid = []
    for combo in itertools.product(range(steps, -1, -1), repeat=n_models - 1):
        rest = steps - sum(combo)
        if rest >= 0:
            grid.append(tuple(c / steps for c in combo) + (rest / steps,))
    return grid


def tune_weights(models: Sequence[LanguageModel], heldout: Sequence[Sequence[str]],
                 step: float = 0.05) -> tuple[list[float], float]:
    """Grid search for the mixture weights with the lowest held-out perplexity.

    Ties keep the earliest grid point, i.e. the most weight on the first model.
    """
    heldout = [list(s) for s in heldout]
    best, best_pp = None, math.inf
    # per-event component probabilities are fixed; cache them once
    table = []
    order = max(m.order for m in models)
    for sentence in heldout:
        for history, word in _events(sentence, order, models[0].boundaries):
            table.append([m.prob(history, word) for m in models])
    if not table:
        raise EmptyCorpus("no held-out tokens")
    for weights in weight_grid(len(models), step):
        ll = 0.0
        for probs in table:
            p = sum(w * q for w, q in zip(weights, probs))
            if p <= 0.0:
                ll = -math.inf
                break
            ll += math.log(p)
        pp = math.exp(-ll / len(table)) if ll > -math.inf else math.inf
        if pp < best_pp:
            best, best_pp = weights, pp
    return list(best), best_pp


# -- serialization ----------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(math.log10(x)) if x > 0 else "-inf"


def dumps(model: NGramModel) -> str:
    """Sorted plain-text table: ``order<TAB>ngram<TAB>log10prob[<TAB>log10backoff]``.

    Lines whose n-gram ends in the begin pad only carry a backoff weight and
    have ``-inf`` as probability.
    """
    lines = [
        "# smtkit-lm",
        f"# order={model.order}",
        f"# smoothing={model.smoothing.value}",
        f"# vocab_size={len(model.vocab)}",
        f"# boundaries={int(model.boundaries)}",
    ]
    rows = []
    for k in range(1, model.order + 1):
        lvl = model.levels[k - 1]
        if k == 1:
            grams = {(w,) for w in model.vocab}
        else:
            grams = set(lvl.counts)
        if k < model.order:
            grams |= set(model.levels[k].history_total)
        for g in grams:
            if g[-1] == BOS:
                p = "-inf"
            else:
                p = _fmt(model._prob(g[:-1], g[-1]))
            bo = model.backoff_weight(g) if k < model.order else None
            row = f"{k}\t{' '.join(g)}\t{p}"
            if bo is not None:
                row += f"\t{_fmt(bo)}"
            rows.append(row)
    rows.sort(key=lambda r: (int(r.split("\t", 1)[0]), r))
    return "\n".join(lines + rows) + "\n"


class TableModel(LanguageModel):
    """Back-off reader for the table written by :func:`dumps`."""

    def __init__(self, order: int, smoothing: str, boundaries: bool,
                 probs: dict[NGram, float], backoffs: dict[NGram, float]):
        self.order = order
        self.smoothing = Smoothing(smoothing)
        self.boundaries = boundaries
        self.probs = probs
        self.backoffs = backoffs
        self.vocab = frozenset(g[0] for g in probs if len(g) == 1 and g[0] != BOS)

    def prob(self, history, word):
        word = _map_token(word, self.vocab)
        if word == BOS:
            word = UNK
        history = tuple(_map_token(t, self.vocab) for t in history)
        keep = self.order - 1
        history = history[len(history) - keep:] if keep else ()
        return self._prob(history, word)

    def _prob(self, history: NGram, word: str) -> float:
        if history + (word,) in self.probs:
            return self.probs[history + (word,)]
        if not history:
            return self.probs[(UNK,)]
        return self.backoffs.get(history, 1.0) * self._prob(history[1:], word)


def loads(text: str) -> TableModel:
    header: dict[str, str] = {}
    probs: dict[NGram, float] = {}
    backoffs: dict[NGram, float] = {}
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                header[key] = value
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise ValidationError(f"malformed model line: {line!r}")
        gram = tuple(fields[1].split(" "))
        if fields[2] != "-inf":
            probs[gram] = 10.0 ** float(fields[2])
        if len(fields) == 4:
            backoffs[gram] = 10.0 ** float(fields[3])
    try:
        model = TableModel(int(header["order"]), header["smoothing"],
                           header["boundaries"] == "1", probs, backoffs)
    except KeyError as exc:
        raise ValidationError(f"model header lacks {exc}") from None
    if int(header.get("vocab_size", len(model.vocab))) != len(model.vocab):
        raise ValidationError("vocabulary size in header does not match the table")
    return model
