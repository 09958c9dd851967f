"""JSON report schemas for the command-line tool."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", ser_json_inf_nums="constants")


class InputDigest(_Strict):
    path: str
    sha256: str


class Provenance(_Strict):
    tool: str
    version: str
    command: str
    config_sha256: str
    config: dict
    inputs: list[InputDigest]


class Report(_Strict):
    provenance: Provenance


class Drop(_Strict):
    pair_id: int
    reason: str


class CleanReport(Report):
    total: int
    kept: int
    dropped: list[Drop]


class CorpusReport(Report):
    """Output of the line-by-line transforms (tokenize, truecase, split-compounds)."""
    lines: list[str]


class SymmetrizeReport(Report):
    heuristic: str
    alignments: list[str]


class LmTrainReport(Report):
    order: int
    smoothing: str
    boundaries: bool
    vocab_size: int
    discounts: list[float]
    degenerate: bool
    model: str


class LmPplReport(Report):
    models: list[str]
    weights: list[float]
    tokens: int
    perplexity: float


class MetricRow(_Strict):
    metric: str
    raw: float
    normalized: Optional[float] = None
    band: Optional[str] = None
    detail: dict


class ScoreReport(Report):
    segments: int
    references: int
    level: str
    scores: list[MetricRow]


class SignificanceRow(_Strict):
    test: str
    x: str
    y: str
    n: int
    statistic: float
    p_value: float
    effect: float
    standard_error: float
    df: Optional[float] = None
    alpha: float
    significant: bool


class IccRow(_Strict):
    comparison: str
    subjects: int
    raters: int
    icc_single: float
    icc_average: float
    ms_rows: float
    ms_columns: float
    ms_error: float


class CompareReport(Report):
    test: str
    tests: list[SignificanceRow] = []
    icc: list[IccRow] = []


class CheckRow(_Strict):
    name: str
    expected: str
    observed: str
    status: str


class ReproduceReport(Report):
    passed: bool
    checks: list[CheckRow]


REPORTS: dict[str, type[Report]] = {
    "clean": CleanReport,
    "tokenize": CorpusReport,
    "truecase": CorpusReport,
    "split-compounds": CorpusReport,
    "symmetrize": SymmetrizeReport,
    "lm-train": LmTrainReport,
    "lm-ppl": LmPplReport,
    "score": ScoreReport,
    "compare": CompareReport,
    "reproduce-paper": ReproduceReport,
}
