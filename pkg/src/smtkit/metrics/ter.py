"""Translation edit rate with block shifts.

A shift moves a contiguous candidate block (at most ``MAX_SHIFT_SIZE``
words, and equal to some contiguous reference block) to a new position at
the cost of one edit. The edit count of a candidate is the smallest
``shifts + levenshtein(shifted candidate, reference)``.

For short sentences that minimum is found exactly with a breadth-first
search over shift sequences, bounded by the greedy result and by the
bag-of-words lower bound on the edit distance. Longer sentences, or
searches exceeding ``SEARCH_BUDGET`` distance evaluations, use the usual
greedy procedure: keep applying the shift that lowers the edit distance
most until none does.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from ..errors import EmptyInput, EmptyReference
from .types import EvalPair

MAX_SHIFT_SIZE = 10
EXACT_MAX_LEN = 10
SEARCH_BUDGET = 50_000


@dataclass
class TerReport:
    insertions: int
    deletions: int
    substitutions: int
    shifts: int
    reference_length: int
    score: float
    exact: bool = True
    reference_index: int = 0

    @property
    def edits(self) -> int:
        return self.insertions + self.deletions + self.substitutions + self.shifts


def edit_operations(hyp: Sequence[str], ref: Sequence[str]) -> tuple[int, int, int]:
    """(insertions, deletions, substitutions) of a minimal word-level edit script.

    Insertions add reference words missing from ``hyp``; deletions remove
    surplus ``hyp`` words.
    """
    n, m = len(hyp), len(ref)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dist[i][0] = i
    for j in range(m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row, above = dist[i], dist[i - 1]
        h = hyp[i - 1]
        for j in range(1, m + 1):
            row[j] = min(above[j - 1] + (h != ref[j - 1]), above[j] + 1, row[j - 1] + 1)
    ins = dels = subs = 0
    i, j = n, m
    while i or j:
        if i and j and dist[i][j] == dist[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]):
            subs += hyp[i - 1] != ref[j - 1]
            i, j = i - 1, j - 1
        elif i and dist[i][j] == dist[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return ins, dels, subs


def edit_distance(hyp: Sequence[str], ref: Sequence[str]) -> int:
    prev = list(range(len(ref) + 1))
    for i, h in enumerate(hyp, 1):
        cur = [i]
        for j, r in enumerate(ref, 1):
            cur.append(min(prev[j - 1] + (h != r), prev[j] + 1, cur[j - 1] + 1))
        prev = cur
    return prev[-1]


def reference_blocks(ref: Sequence[str], max_size: int = MAX_SHIFT_SIZE) -> set[tuple[str, ...]]:
    return {tuple(ref[i:i + k]) for i in range(len(ref))
            for k in range(1, min(max_size, len(ref) - i) + 1)}


def shifted_variants(hyp: tuple[str, ...], blocks: set, max_size: int = MAX_SHIFT_SIZE
                     ) -> Iterator[tuple[str, ...]]:
    """Every sequence reachable from ``hyp`` with one legal shift."""
    n = len(hyp)
    for start in range(n):
        for size in range(1, min(max_size, n - start) + 1):
            block = hyp[start:start + size]
            if block not in blocks:
                break  # longer blocks extend this one and cannot match either
            rest = hyp[:start] + hyp[start + size:]
            for dest in range(len(rest) + 1):
                if dest != start:
                    yield rest[:dest] + block + rest[dest:]


def greedy_shifts(hyp: Sequence[str], ref: Sequence[str]) -> tuple[tuple[str, ...], int]:
    blocks = reference_blocks(ref)
    cur = tuple(hyp)
    shifts = 0
    while True:
        base = edit_distance(cur, ref)
        best, best_d = None, base
        for cand in shifted_variants(cur, blocks):
            d = edit_distance(cand, ref)
            if d < best_d:
                best, best_d = cand, d
        if best is None:
            return cur, shifts
        cur, shifts = best, shifts + 1


class _Budget(Exception):
    pass


def exact_shifts(hyp: Sequence[str], ref: Sequence[str],
                 budget: int = SEARCH_BUDGET) -> tuple[tuple[str, ...], int]:
    """Shifted candidate and shift count minimizing shifts + edit distance.

    The greedy result bounds the search; among equally cheap outcomes the
    one with fewer shifts, then the lexicographically smallest, is kept.
    """
    blocks = reference_blocks(ref)
    start = tuple(hyp)
    g_state, g_shifts = greedy_shifts(hyp, ref)
    upper = g_shifts + edit_distance(g_state, ref)
    # shifts keep the bag of words, so the distance never drops below this
    floor = max(len(hyp), len(ref)) - sum((Counter(hyp) & Counter(ref)).values())
    best = (edit_distance(start, ref), 0, start)
    frontier, seen, depth, evals = [start], {start}, 0, 0
    while frontier and depth + 1 + floor < min(best[0], upper):
        depth += 1
        nxt = []
        for state in frontier:
            for cand in shifted_variants(state, blocks):
                if cand in seen:
                    continue
                seen.add(cand)
                evals += 1
                if evals > budget:
                    raise _Budget
                nxt.append(cand)
                best = min(best, (depth + edit_distance(cand, ref), depth, cand))
        frontier = nxt
    if best[0] > upper:
        return g_state, g_shifts
    return best[2], best[1]


def ter_single(candidate: Sequence[str], reference: Sequence[str],
               exact: bool | None = None) -> TerReport:
    if not reference:
        raise EmptyReference("TER is undefined for an empty reference")
    use_exact = exact if exact is not None else max(len(candidate), len(reference)) <= EXACT_MAX_LEN
    was_exact = False
    state = None
    if use_exact:
        try:
            state, shifts = exact_shifts(candidate, reference)
            was_exact = True
        except _Budget:
            pass
    if state is None:
        state, shifts = greedy_shifts(candidate, reference)
    ins, dels, subs = edit_operations(state, reference)
    edits = ins + dels + subs + shifts
    return TerReport(ins, dels, subs, shifts, len(reference), 100.0 * edits / len(reference),
                     was_exact)


def ter(pair: EvalPair, exact: bool | None = None) -> TerReport:
    """Fewest edits over the references, scored against that reference's length.

    The first reference wins ties.
    """
    if any(len(r) == 0 for r in pair.references):
        raise EmptyReference("TER is undefined for an empty reference")
    best = None
    for k, ref in enumerate(pair.references):
        report = ter_single(pair.candidate, ref, exact)
        report.reference_index = k
        if best is None or report.edits < best.edits:
            best = report
    return best


def ter_corpus(pairs: Sequence[EvalPair], exact: bool | None = None) -> TerReport:
    """Total edits over total lengths of the chosen references, times 100."""
    if not pairs:
        raise EmptyInput("TER needs at least one pair")
    reports = [ter(p, exact) for p in pairs]
    total_ref = sum(r.reference_length for r in reports)
    edits = sum(r.edits for r in reports)
    return TerReport(sum(r.insertions for r in reports), sum(r.deletions for r in reports),
                     sum(r.substitutions for r in reports), sum(r.shifts for r in reports),
                     total_ref, 100.0 * edits / total_ref, all(r.exact for r in reports))
