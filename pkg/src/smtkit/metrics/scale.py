"""Common 0-100 scale (higher is better) and BLEU interpretability bands."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..errors import RangeError

NIST_MAX = 15.0


class Band(enum.Enum):
    Unsatisfactory = "Unsatisfactory"
    Rough = "Rough"
    Understandable = "Understandable"
    GoodFluent = "GoodFluent"


@dataclass(frozen=True)
class NormalizedScore:
    metric: str
    raw: float
    normalized: float


def normalize_score(metric: str, raw: float) -> NormalizedScore:
    """Map a raw metric value onto 0-100.

    BLEU and METEOR (0-1) are scaled by 100, NIST (0-15) by 100/15, and
    TER (an error rate, 0 upward) becomes 100 - TER clamped at 0.
    """
    metric = metric.lower()
    if math.isnan(raw):
        raise RangeError(f"{metric} score is NaN")
    if metric in ("bleu", "meteor"):
        if not 0.0 <= raw <= 1.0:
            raise RangeError(f"{metric} raw score {raw} outside [0, 1]")
        value = raw * 100.0
    elif metric == "nist":
        if not 0.0 <= raw <= NIST_MAX:
            raise RangeError(f"NIST raw score {raw} outside [0, {NIST_MAX:g}]")
        value = raw * 100.0 / NIST_MAX
    elif metric == "ter":
        if raw < 0.0:
            raise RangeError(f"TER raw score {raw} is negative")
        value = min(100.0, max(0.0, 100.0 - raw))
    else:
        raise RangeError(f"unknown metric {metric!r}")
    return NormalizedScore(metric, raw, value)


def interpretability_band(score: float) -> Band:
    if not 0.0 <= score <= 100.0:
        raise RangeError(f"normalized score {score} outside [0, 100]")
    if score < 15.0:
        return Band.Unsatisfactory
    if score <= 30.0:
        return Band.Rough
    if score <= 50.0:
        return Band.Understandable
    return Band.GoodFluent
