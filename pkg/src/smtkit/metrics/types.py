from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import ValidationError


@dataclass(frozen=True)
class EvalPair:
    candidate: tuple[str, ...]
    references: tuple[tuple[str, ...], ...]

    def __init__(self, candidate: Sequence[str], references: Sequence[Sequence[str]]):
        refs = tuple(tuple(r) for r in references)
        if not refs:
            raise ValidationError("an evaluation pair needs at least one reference")
        object.__setattr__(self, "candidate", tuple(candidate))
        object.__setattr__(self, "references", refs)
