"""NIST information-weighted n-gram co-occurrence score."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyInput
from ._ngrams import max_reference_counts, ngram_counts
from .types import EvalPair

# brevity factor is 0.5 when the candidate is 2/3 of the mean reference length
BETA = math.log(0.5) / math.log(2.0 / 3.0) ** 2


@dataclass
class NistReport:
    score: float
    order_scores: list[float]
    information: list[float]
    totals: list[int]
    brevity: float
    candidate_length: int
    reference_length: float
    max_order: int


def information_weights(pairs: Sequence[EvalPair], max_order: int) -> dict[tuple, float]:
    """log2(count(prefix) / count(ngram)) over all reference sentences."""
    counts: Counter = Counter()
    total_tokens = 0
    for pair in pairs:
        for ref in pair.references:
            total_tokens += len(ref)
            for n in range(1, max_order + 1):
                counts.update(ngram_counts(ref, n))
    info = {}
    for gram, c in counts.items():
        prefix = counts[gram[:-1]] if len(gram) > 1 else total_tokens
        info[gram] = math.log2(prefix / c)
    return info


def nist_brevity(c: float, r: float) -> float:
    if r <= 0:
        return 1.0
    ratio = min(1.0, c / r)
    if ratio <= 0.0:
        return 0.0
    return math.exp(BETA * math.log(ratio) ** 2)


def nist(pairs: Sequence[EvalPair], max_order: int = 5) -> NistReport:
    if not pairs:
        raise EmptyInput("NIST needs at least one pair")
    info = information_weights(pairs, max_order)
    gained = [0.0] * max_order
    totals = [0] * max_order
    c_total = 0
    r_total = 0.0
    for pair in pairs:
        c_total += len(pair.candidate)
        r_total += sum(len(r) for r in pair.references) / len(pair.references)
        for n in range(1, max_order + 1):
            cand = ngram_counts(pair.candidate, n)
            cap = max_reference_counts(pair.references, n)
            totals[n - 1] += sum(cand.values())
            gained[n - 1] += sum(min(c, cap[g]) * info[g] for g, c in cand.items() if cap[g])
    order_scores = [g / t if t else 0.0 for g, t in zip(gained, totals)]
    brevity = nist_brevity(c_total, r_total)
    return NistReport(sum(order_scores) * brevity, order_scores, gained, totals, brevity,
                      c_total, r_total, max_order)
