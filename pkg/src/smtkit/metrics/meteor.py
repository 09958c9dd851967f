"""METEOR restricted to the exact-match module.

The alignment maximizes the number of matched tokens and, among maximal
alignments, minimizes the number of chunks (runs that are contiguous and
identically ordered in both sentences).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .types import EvalPair

ALPHA_WEIGHT = 9.0  # fmean = 10PR / (R + 9P)
PENALTY_GAMMA = 0.5
PENALTY_BETA = 3.0
SEARCH_BUDGET = 200_000


class _BudgetExceeded(Exception):
    pass


@dataclass
class MeteorReport:
    matches: int
    chunks: int
    precision: float
    recall: float
    fmean: float
    penalty: float
    score: float
    candidate_length: int
    reference_length: int
    alignment: tuple[tuple[int, int], ...] = ()


def align(candidate: Sequence[str], reference: Sequence[str]) -> tuple[tuple[int, int], ...]:
    """Maximum exact-match alignment with the fewest chunks.

    Depth-first over candidate positions with memoization on
    (position, used reference slots, previous reference index). Only
    repeated words create branching, so the state space stays small for
    natural sentences; past ``SEARCH_BUDGET`` states a greedy alignment
    that extends the current chunk whenever it can is returned instead.
    """
    try:
        return _exact_align(candidate, reference)
    except (_BudgetExceeded, RecursionError):
        return _greedy_align(candidate, reference)


def _greedy_align(candidate, reference):
    need = Counter(candidate) & Counter(reference)
    used: set[int] = set()
    out = []
    prev = -2
    for i, tok in enumerate(candidate):
        if need[tok] == 0:
            prev = -2
            continue
        free = [j for j, r in enumerate(reference) if r == tok and j not in used]
        j = prev + 1 if prev + 1 in free else free[0]
        used.add(j)
        need[tok] -= 1
        out.append((i, j))
        prev = j
    return tuple(out)


def _exact_align(candidate, reference):
    slots: dict[str, list[int]] = defaultdict(list)
    for j, tok in enumerate(reference):
        slots[tok].append(j)
    # remaining candidate occurrences of each word from position i onwards
    remaining = [None] * (len(candidate) + 1)
    tally: Counter = Counter()
    remaining[len(candidate)] = tally.copy()
    for i in range(len(candidate) - 1, -1, -1):
        tally[candidate[i]] += 1
        remaining[i] = tally.copy()
    n = len(candidate)
    visited = [0]

    @lru_cache(maxsize=None)
    def best(i: int, used: int, prev: int) -> tuple[int, tuple]:
        visited[0] += 1
        if visited[0] > SEARCH_BUDGET:
            raise _BudgetExceeded
        if i == n:
            return 0, ()
        tok = candidate[i]
        free = [j for j in slots.get(tok, ()) if not used >> j & 1]
        options = []
        # leaving this token unmatched is only allowed if later copies can fill every slot
        if remaining[i + 1][tok] >= len(free):
            cost, path = best(i + 1, used, -1)
            options.append((cost, path))
        for j in free:
            cost, path = best(i + 1, used | (1 << j), j)
            new_chunk = 0 if (prev >= 0 and j == prev + 1) else 1
            options.append((cost + new_chunk, ((i, j),) + path))
        return min(options)

    return best(0, 0, -1)[1]


def count_chunks(alignment: Sequence[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for i, j in sorted(alignment):
        if prev is None or i != prev[0] + 1 or j != prev[1] + 1:
            chunks += 1
        prev = (i, j)
    return chunks


def meteor_stats(m: int, chunks: int, cand_len: int, ref_len: int) -> tuple[float, ...]:
    if m == 0:
        return 0.0, 0.0, 0.0, 0.0, 0.0
    p, r = m / cand_len, m / ref_len
    fmean = (1.0 + ALPHA_WEIGHT) * p * r / (r + ALPHA_WEIGHT * p)
    penalty = PENALTY_GAMMA * (chunks / m) ** PENALTY_BETA
    return p, r, fmean, penalty, fmean * (1.0 - penalty)


def meteor_single(candidate: Sequence[str], reference: Sequence[str]) -> MeteorReport:
    alignment = align(candidate, reference)
    m, ch = len(alignment), count_chunks(alignment)
    p, r, fmean, penalty, score = meteor_stats(m, ch, len(candidate), len(reference))
    return MeteorReport(m, ch, p, r, fmean, penalty, score, len(candidate), len(reference),
                        alignment)


def meteor(pair: EvalPair) -> MeteorReport:
    """Best score over the references; the first reference wins ties."""
    best = None
    for ref in pair.references:
        report = meteor_single(pair.candidate, ref)
        if best is None or report.score > best.score:
            best = report
    return best


def meteor_corpus(pairs: Sequence[EvalPair]) -> MeteorReport:
    """Pool matches, chunks and lengths of each pair's best reference."""
    reports = [meteor(p) for p in pairs]
    m = sum(r.matches for r in reports)
    ch = sum(r.chunks for r in reports)
    c = sum(r.candidate_length for r in reports)
    rl = sum(r.reference_length for r in reports)
    p, r, fmean, penalty, score = meteor_stats(m, ch, c, rl)
    return MeteorReport(m, ch, p, r, fmean, penalty, score, c, rl)
