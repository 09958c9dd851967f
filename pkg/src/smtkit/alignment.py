"""Directed word alignments, symmetrization heuristics and lexical
reordering orientation."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .errors import DimensionMismatch, MalformedPair, OverlappingSpans, ValidationError

Point = tuple[int, int]

NEIGHBORS_4 = ((-1, 0), (0, -1), (1, 0), (0, 1))
NEIGHBORS_DIAG = ((-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True)
class DirectedAlignment:
    points: frozenset[Point]
    source_len: int
    target_len: int

    def __post_init__(self):
        if self.source_len < 1 or self.target_len < 1:
            raise ValidationError("sentence lengths must be positive")
        object.__setattr__(self, "points", frozenset(self.points))
        for s, t in self.points:
            if not (0 <= s < self.source_len and 0 <= t < self.target_len):
                raise MalformedPair(f"point {s}-{t} outside {self.source_len}x{self.target_len}")

    def transpose(self) -> "DirectedAlignment":
        return DirectedAlignment(frozenset((t, s) for s, t in self.points),
                                 self.target_len, self.source_len)

    def __str__(self) -> str:
        return format_alignment(self.points)


class Heuristic(enum.Enum):
    Intersection = "intersection"
    Union = "union"
    Grow = "grow"
    GrowDiag = "grow-diag"
    GrowDiagFinal = "grow-diag-final"
    GrowDiagFinalAnd = "grow-diag-final-and"


class Orientation(enum.Enum):
    Monotone = "M"
    Swap = "S"
    Discontinuous = "D"
    DiscontinuousLeft = "DL"
    DiscontinuousRight = "DR"


def parse_points(text: str) -> list[Point]:
    points = []
    for item in text.split():
        left, sep, right = item.partition("-")
        if not sep:
            raise MalformedPair(f"expected s-t, got {item!r}")
        try:
            points.append((int(left), int(right)))
        except ValueError:
            raise MalformedPair(f"non-integer alignment point {item!r}") from None
    return points


def parse_alignment(text: str, source_len: int, target_len: int,
                    transpose: bool = False) -> DirectedAlignment:
    """Parse whitespace-separated ``s-t`` pairs.

    With ``transpose`` the pairs are read as ``t-s`` (a target-to-source
    file) and flipped into source/target coordinates.
    """
    points = parse_points(text)
    if transpose:
        points = [(s, t) for t, s in points]
    for s, t in points:
        if s < 0 or t < 0 or s >= source_len or t >= target_len:
            raise MalformedPair(f"point {s}-{t} outside {source_len}x{target_len}")
    return DirectedAlignment(frozenset(points), source_len, target_len)


def format_alignment(points: Iterable[Point]) -> str:
    return " ".join(f"{s}-{t}" for s, t in sorted(points))


def _grow(alignment: set[Point], union: frozenset[Point], neighborhood) -> None:
    aligned_s = {s for s, _ in alignment}
    aligned_t = {t for _, t in alignment}
    changed = True
    while changed:
        changed = False
        for s, t in sorted(union - alignment):
            if s in aligned_s and t in aligned_t:
                continue
            if any((s + ds, t + dt) in alignment for ds, dt in neighborhood):
                alignment.add((s, t))
                aligned_s.add(s)
                aligned_t.add(t)
                changed = True


def _final(alignment: set[Point], candidates: list[Point], both: bool) -> None:
    aligned_s = {s for s, _ in alignment}
    aligned_t = {t for _, t in alignment}
    for s, t in candidates:
        if (s, t) in alignment:
            continue
        free_s, free_t = s not in aligned_s, t not in aligned_t
        if (free_s and free_t) if both else (free_s or free_t):
            alignment.add((s, t))
            aligned_s.add(s)
            aligned_t.add(t)


def symmetrize(fwd: DirectedAlignment, rev: DirectedAlignment,
               heuristic: Heuristic | str = Heuristic.GrowDiagFinal) -> DirectedAlignment:
    """Merge two directed alignments given in the same (s, t) coordinates.

    Growing starts from the intersection and adds union points next to an
    existing point whenever one of the two words is still unaligned. The
    four-neighbour pass always runs to a fixpoint before diagonal neighbours
    are admitted, and the final step offers both-unaligned points before
    either-unaligned ones, so each heuristic's output contains the previous
    one in the chain intersection, grow, grow-diag, grow-diag-final-and,
    grow-diag-final, union.
    """
    heuristic = Heuristic(heuristic)
    if (fwd.source_len, fwd.target_len) != (rev.source_len, rev.target_len):
        raise DimensionMismatch(
            f"{fwd.source_len}x{fwd.target_len} vs {rev.source_len}x{rev.target_len}")
    union = fwd.points | rev.points
    dims = (fwd.source_len, fwd.target_len)
    if heuristic is Heuristic.Union:
        return DirectedAlignment(union, *dims)
    result = set(fwd.points & rev.points)
    if heuristic is not Heuristic.Intersection:
        _grow(result, union, NEIGHBORS_4)
        if heuristic is not Heuristic.Grow:
            _grow(result, union, NEIGHBORS_4 + NEIGHBORS_DIAG)
    if heuristic in (Heuristic.GrowDiagFinal, Heuristic.GrowDiagFinalAnd):
        candidates = sorted(fwd.points) + sorted(rev.points - fwd.points)
        _final(result, candidates, both=True)
        if heuristic is Heuristic.GrowDiagFinal:
            _final(result, candidates, both=False)
    return DirectedAlignment(frozenset(result), *dims)


def classify_orientation(prev_span: tuple[int, int], cur_span: tuple[int, int],
                         scheme: int = 4) -> Orientation:
    """Orientation of the current phrase relative to the previous one.

    Spans are inclusive source index ranges of two target-adjacent phrases.
    ``scheme=3`` merges the two discontinuous classes.
    """
    if scheme not in (3, 4):
        raise ValidationError("scheme must be 3 or 4")
    s1, e1 = prev_span
    s2, e2 = cur_span
    if s1 > e1 or s2 > e2:
        raise ValidationError("span start after end")
    if s2 <= e1 and s1 <= e2:
        raise OverlappingSpans(f"{prev_span} and {cur_span} overlap")
    if s2 == e1 + 1:
        return Orientation.Monotone
    if e2 == s1 - 1:
        return Orientation.Swap
    if scheme == 3:
        return Orientation.Discontinuous
    return Orientation.DiscontinuousRight if s2 > e1 else Orientation.DiscontinuousLeft
