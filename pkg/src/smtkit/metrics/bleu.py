"""BLEU with clipped n-gram precision and brevity penalty."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import EmptyInput, ValidationError
from ._ngrams import max_reference_counts, ngram_counts
from .types import EvalPair

SMOOTH_EPSILON = 0.1


@dataclass
class BleuReport:
    score: float
    precisions: list[float]
    weights: list[float]
    brevity_penalty: float
    candidate_length: int
    reference_length: int
    max_order: int
    matches: list[int] = field(default_factory=list)
    totals: list[int] = field(default_factory=list)
    level: str = "corpus"


def closest_reference_length(cand_len: int, references: Sequence[Sequence[str]]) -> int:
    # nearest length, shorter one on ties
    return min((len(r) for r in references), key=lambda n: (abs(n - cand_len), n))


def brevity_penalty(c: int, r: int) -> float:
    if c > r:
        return 1.0
    if c == 0:
        return 0.0
    return math.exp(1.0 - r / c)


def clipped_matches(candidate: Sequence[str], references: Sequence[Sequence[str]], n: int
                    ) -> tuple[int, int]:
    cand = ngram_counts(candidate, n)
    cap = max_reference_counts(references, n)
    return sum(min(c, cap[g]) for g, c in cand.items()), sum(cand.values())


def _stats(pair: EvalPair, max_order: int):
    matches, totals = [], []
    for n in range(1, max_order + 1):
        m, t = clipped_matches(pair.candidate, pair.references, n)
        matches.append(m)
        totals.append(t)
    c = len(pair.candidate)
    return matches, totals, c, closest_reference_length(c, pair.references)


def _combine(precisions: Sequence[float], weights: Sequence[float], bp: float) -> float:
    if any(p <= 0.0 for p in precisions):
        return 0.0
    return bp * math.exp(sum(w * math.log(p) for w, p in zip(weights, precisions)))


def _check_weights(weights, max_order):
    if weights is None:
        return [1.0 / max_order] * max_order
    weights = [float(w) for w in weights]
    if len(weights) != max_order or any(w < 0 for w in weights) or abs(sum(weights) - 1) > 1e-9:
        raise ValidationError("BLEU weights must be N non-negative numbers summing to 1")
    return weights


def bleu(pairs: Sequence[EvalPair], max_order: int = 4, weights: Sequence[float] | None = None,
         level: str = "corpus") -> BleuReport:
    """Corpus BLEU, or the geometric mean of smoothed sentence scores.

    At corpus level the clipped matches, candidate n-grams and lengths are
    pooled before the precisions are formed; a zero precision gives 0. The
    ``sentence-geometric`` level scores every pair on its own, replacing a
    zero match count by 0.1, and averages the scores geometrically. Its
    report still carries the pooled precisions and brevity penalty.
    """
    if not pairs:
        raise EmptyInput("BLEU needs at least one pair")
    if max_order < 1:
        raise ValidationError("max_order must be at least 1")
    if level not in ("corpus", "sentence-geometric"):
        raise ValidationError(f"unknown BLEU level {level!r}")
    weights = _check_weights(weights, max_order)

    matches = [0] * max_order
    totals = [0] * max_order
    c_total = r_total = 0
    sentence_scores = []
    for pair in pairs:
        m, t, c, r = _stats(pair, max_order)
        matches = [a + b for a, b in zip(matches, m)]
        totals = [a + b for a, b in zip(totals, t)]
        c_total += c
        r_total += r
        if level == "sentence-geometric":
            precisions = [(mi if mi > 0 else SMOOTH_EPSILON) / max(ti, 1) for mi, ti in zip(m, t)]
            sentence_scores.append(_combine(precisions, weights, brevity_penalty(c, r)))

    precisions = [m / t if t else 0.0 for m, t in zip(matches, totals)]
    bp = brevity_penalty(c_total, r_total)
    if level == "corpus":
        score = _combine(precisions, weights, bp)
    elif any(s <= 0.0 for s in sentence_scores):
        score = 0.0
    else:
        score = math.exp(sum(math.log(s) for s in sentence_scores) / len(sentence_scores))
    return BleuReport(score, precisions, weights, bp, c_total, r_total, max_order,
                      matches, totals, level)
