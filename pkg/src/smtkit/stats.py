"""Statistics for comparing metric score tables.

Descriptive summaries, the Wilcoxon matched-pairs signed-rank test, Student
t-tests and the two-way absolute-agreement intraclass correlation.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from scipy import stats as _sp

from .errors import (
    DegenerateMatrix,
    EmptyInput,
    IncompleteMatrix,
    LengthMismatch,
    RangeError,
    TooFewPairs,
    TooFewValues,
    ValidationError,
)

METRICS = ("bleu", "nist", "meteor", "ter")
EXACT_MAX_N = 25
MIN_PAIRS = 5


class Direction(enum.Enum):
    PlEn = "PL-EN"
    EnPl = "EN-PL"


_FIXTURES = {Direction.PlEn: "table1_pl_en.csv", Direction.EnPl: "table2_en_pl.csv"}


@dataclass
class ScoreTable:
    direction: Direction | None
    rows: dict[str, dict[str, float]]

    def __post_init__(self):
        for system, scores in self.rows.items():
            if set(scores) != set(METRICS):
                raise ValidationError(f"system {system}: expected columns {', '.join(METRICS)}")
            for metric, value in scores.items():
                if not 0.0 <= value <= 100.0:
                    raise RangeError(f"system {system}: {metric} = {value} outside [0, 100]")

    @property
    def systems(self) -> list[str]:
        return list(self.rows)

    def column(self, metric: str) -> list[float]:
        metric = metric.lower()
        if metric not in METRICS:
            raise ValidationError(f"unknown metric {metric!r}")
        return [self.rows[s][metric] for s in self.rows]


def parse_score_table(text: str, direction: Direction | None = None) -> ScoreTable:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["system", *METRICS]:
        raise ValidationError("score table header must be: system," + ",".join(METRICS))
    rows: dict[str, dict[str, float]] = {}
    for lineno, rec in enumerate(reader, 2):
        if not rec or not any(f.strip() for f in rec):
            continue
        if len(rec) != 1 + len(METRICS):
            raise ValidationError(f"line {lineno}: expected {1 + len(METRICS)} fields")
        system = rec[0].strip()
        if system in rows:
            raise ValidationError(f"line {lineno}: duplicate system id {system!r}")
        try:
            rows[system] = {m: float(v) for m, v in zip(METRICS, rec[1:])}
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    if not rows:
        raise EmptyInput("score table has no rows")
    return ScoreTable(direction, rows)


def load_score_table(path: str | Path, direction: Direction | None = None) -> ScoreTable:
    return parse_score_table(Path(path).read_text(encoding="utf-8"), direction)


def packaged_table(direction: Direction) -> ScoreTable:
    """The published score table for one translation direction."""
    text = resources.files("smtkit").joinpath("data", _FIXTURES[direction]).read_text("utf-8")
    return parse_score_table(text, direction)


@dataclass(frozen=True)
class Descriptive:
    mean: float
    sd: float | None
    min: float
    max: float
    n: int


def descriptive(values: Sequence[float]) -> Descriptive:
    if not values:
        raise EmptyInput("no values")
    sd = statistics.stdev(values) if len(values) > 1 else None
    return Descriptive(statistics.fmean(values), sd, min(values), max(values), len(values))


@dataclass
class SignificanceReport:
    test: str
    statistic: float
    p_value: float
    effect: float
    standard_error: float
    n: int
    df: float | None = None
    alpha: float = 0.05
    significant: bool = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise RangeError(f"alpha {self.alpha} outside (0, 1)")
        self.p_value = min(1.0, max(0.0, self.p_value))
        self.significant = self.p_value < self.alpha


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _exact_signed_rank_p(ranks: Sequence[float], w: float) -> float:
    """Two-sided p of W+ under random signs, from its exact distribution.

    Average ranks are multiples of 1/2, so doubled ranks are integers and
    the distribution of the doubled sum is built by a counting DP.
    """
    doubled = [round(2 * r) for r in ranks]
    total = sum(doubled)
    ways = [0] * (total + 1)
    ways[0] = 1
    for r in doubled:
        for s in range(total, r - 1, -1):
            ways[s] += ways[s - r]
    limit = round(2 * w)
    tail = sum(ways[:limit + 1])
    return min(1.0, 2 * tail / 2 ** len(doubled))


def _normal_signed_rank_p(ranks: Sequence[float], w_plus: float, abs_diffs) -> float:
    n = len(ranks)
    mean = n * (n + 1) / 4
    ties = {}
    for d in abs_diffs:
        ties[d] = ties.get(d, 0) + 1
    var = n * (n + 1) * (2 * n + 1) / 24 - sum(t ** 3 - t for t in ties.values()) / 48
    if var <= 0:
        return 1.0
    z = max(0.0, abs(w_plus - mean) - 0.5) / math.sqrt(var)
    return math.erfc(z / math.sqrt(2))


def wilcoxon_matched_pairs(x: Sequence[float], y: Sequence[float],
                           alpha: float = 0.05) -> SignificanceReport:
    """Signed-rank test of x against y.

    Zero differences are dropped and ties get average ranks. The statistic
    is min(W+, W-). The p-value is exact for up to ``EXACT_MAX_N`` nonzero
    differences and uses the tie-corrected normal approximation with
    continuity correction beyond that. ``effect`` is the mean of x - y.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)} values")
    diffs = [a - b for a, b in zip(x, y)]
    nonzero = [d for d in diffs if d != 0]
    if len(nonzero) < MIN_PAIRS:
        raise TooFewPairs(f"{len(nonzero)} nonzero differences, need {MIN_PAIRS}")
    abs_diffs = [abs(d) for d in nonzero]
    ranks = average_ranks(abs_diffs)
    w_plus = sum(r for r, d in zip(ranks, nonzero) if d > 0)
    w_minus = sum(ranks) - w_plus
    w = min(w_plus, w_minus)
    if len(nonzero) <= EXACT_MAX_N:
        p = _exact_signed_rank_p(ranks, w)
    else:
        p = _normal_signed_rank_p(ranks, w_plus, abs_diffs)
    se = statistics.stdev(diffs) / math.sqrt(len(diffs))
    return SignificanceReport("wilcoxon", w, p, statistics.fmean(diffs), se, len(nonzero),
                              alpha=alpha)


def t_test(x: Sequence[float], y: Sequence[float], mode: str = "paired",
           alpha: float = 0.05) -> SignificanceReport:
    """Student t-test of mean(x) - mean(y), two-sided.

    ``paired`` tests the mean of the differences; ``unpaired-pooled`` is
    the two-sample test with a pooled variance estimate.
    """
    if mode == "paired":
        if len(x) != len(y):
            raise LengthMismatch(f"{len(x)} vs {len(y)} values")
        if len(x) < 2:
            raise TooFewValues("paired t-test needs at least 2 pairs")
        diffs = [a - b for a, b in zip(x, y)]
        effect = statistics.fmean(diffs)
        se = statistics.stdev(diffs) / math.sqrt(len(diffs))
        df = len(diffs) - 1
        n = len(diffs)
    elif mode == "unpaired-pooled":
        n1, n2 = len(x), len(y)
        if n1 < 2 or n2 < 2:
            raise TooFewValues("each sample needs at least 2 values")
        df = n1 + n2 - 2
        pooled = ((n1 - 1) * statistics.variance(x) + (n2 - 1) * statistics.variance(y)) / df
        effect = statistics.fmean(x) - statistics.fmean(y)
        se = math.sqrt(pooled * (1 / n1 + 1 / n2))
        n = n1 + n2
    else:
        raise ValidationError(f"unknown t-test mode {mode!r}")
    if se == 0:
        t, p = (0.0, 1.0) if effect == 0 else (math.copysign(math.inf, effect), 0.0)
    else:
        t = effect / se
        p = 2 * _sp.t.sf(abs(t), df)
    return SignificanceReport(f"t-test ({mode})", t, float(p), effect, se, n, df, alpha)


@dataclass(frozen=True)
class IccReport:
    icc_single: float
    icc_average: float
    ms_rows: float
    ms_columns: float
    ms_error: float
    subjects: int
    raters: int
    model: str = "two-way random, absolute agreement"


def icc_two_way_absolute(matrix: Sequence[Sequence[float]]) -> IccReport:
    """ICC(A,1) and ICC(A,k) for a subjects x raters matrix.

    The ANOVA is carried out in exact rational arithmetic on the float
    inputs, so perfect agreement gives exactly 1.
    """
    n = len(matrix)
    k = len(matrix[0]) if n else 0
    if n < 2 or k < 2:
        raise IncompleteMatrix("need at least 2 subjects and 2 raters")
    if any(len(row) != k for row in matrix):
        raise IncompleteMatrix("rows have different lengths")
    cells = []
    for row in matrix:
        if any(v is None or (isinstance(v, float) and math.isnan(v)) for v in row):
            raise IncompleteMatrix("matrix has missing cells")
        cells.append([Fraction(v) for v in row])
    grand = sum(map(sum, cells)) / (n * k)
    row_means = [sum(r) / k for r in cells]
    col_means = [sum(r[j] for r in cells) / n for j in range(k)]
    ss_rows = k * sum((m - grand) ** 2 for m in row_means)
    ss_cols = n * sum((m - grand) ** 2 for m in col_means)
    ss_total = sum((v - grand) ** 2 for r in cells for v in r)
    ms_r = ss_rows / (n - 1)
    ms_c = ss_cols / (k - 1)
    ms_e = (ss_total - ss_rows - ss_cols) / ((n - 1) * (k - 1))
    single_den = ms_r + (k - 1) * ms_e + Fraction(k, n) * (ms_c - ms_e)
    average_den = ms_r + (ms_c - ms_e) / n
    if single_den == 0 or average_den == 0:
        raise DegenerateMatrix("no variance between subjects; ICC undefined")
    return IccReport(float((ms_r - ms_e) / single_den), float((ms_r - ms_e) / average_den),
                     float(ms_r), float(ms_c), float(ms_e), n, k)
