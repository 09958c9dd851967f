"""Corpus preparation: ingestion, punctuation normalization, tokenization,
truecasing, pair cleaning, compound splitting and alignment stemming."""

from __future__ import annotations

import enum
import math
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import EmptyCorpus, InvalidEncoding, ValidationError

Tokens = list[str]

# Applied in order; every target is pure ASCII so the mapping is idempotent.
PUNCT_MAP: tuple[tuple[str, str], ...] = (
    ("\u201c", '"'), ("\u201d", '"'), ("\u201e", '"'), ("\u00ab", '"'), ("\u00bb", '"'),
    ("\u2018", "'"), ("\u2019", "'"), ("\u201a", "'"),
    ("\u2013", "-"), ("\u2014", "-"),
    ("\u2026", "..."),
    ("\u00a0", " "),
)

SPLIT_PUNCT = frozenset('.,;:!?"()')
TERMINAL_TOKENS = frozenset({".", "!", "?", '"', ")"})

_MULTISPACE = re.compile(r" {2,}")


@dataclass(frozen=True)
class RawLine:
    text: str
    line_number: int

    def __post_init__(self):
        if "\n" in self.text or "\r" in self.text:
            raise ValidationError(f"line {self.line_number} contains a newline")
        if self.line_number < 1:
            raise ValidationError("line numbers start at 1")


def decode_lines(data: bytes) -> list[RawLine]:
    """Decode a UTF-8 byte buffer into numbered lines.

    Invalid byte sequences raise :class:`InvalidEncoding`; nothing is
    replaced or dropped.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(f"invalid UTF-8 at byte {exc.start}") from exc
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [RawLine(line.rstrip("\r"), i) for i, line in enumerate(lines, 1)]


def read_lines(path: str | Path) -> list[RawLine]:
    return decode_lines(Path(path).read_bytes())


def normalize_punctuation(text: str) -> str:
    for src, dst in PUNCT_MAP:
        text = text.replace(src, dst)
    return _MULTISPACE.sub(" ", text)


def _split_chunk(chunk: str) -> Iterator[str]:
    start, end = 0, len(chunk)
    while start < end and chunk[start] in SPLIT_PUNCT:
        yield chunk[start]
        start += 1
    trailing = []
    while end > start and chunk[end - 1] in SPLIT_PUNCT:
        end -= 1
        trailing.append(chunk[end])
    if start < end:
        yield chunk[start:end]
    yield from reversed(trailing)


def tokenize(text: str) -> Tokens:
    """Whitespace split, then peel clause punctuation off both word edges.

    Hyphens and apostrophes inside a word stay attached, so ``sub-heading``
    is one token while ``1a:`` becomes ``1a`` and ``:``.
    """
    tokens: Tokens = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return tokens


def detokenize(tokens: Sequence[str]) -> str:
    return " ".join(tokens)


# -- truecasing ---------------------------------------------------------------


@dataclass
class TruecaseModel:
    best_form: dict[str, str] = field(default_factory=dict)
    evidence: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"best_form": dict(sorted(self.best_form.items())),
                "evidence": dict(sorted(self.evidence.items()))}

    @classmethod
    def from_dict(cls, data: dict) -> "TruecaseModel":
        return cls(dict(data["best_form"]), {k: int(v) for k, v in data["evidence"].items()})


def train_truecaser(corpus: Iterable[Sequence[str]]) -> TruecaseModel:
    """Learn the preferred casing of every word from non-initial positions."""
    forms: dict[str, Counter] = {}
    n_sentences = 0
    for sentence in corpus:
        n_sentences += 1
        for token in sentence[1:]:
            forms.setdefault(token.lower(), Counter())[token] += 1
    if n_sentences == 0:
        raise EmptyCorpus("cannot train a truecaser on an empty corpus")
    model = TruecaseModel()
    for key in sorted(forms):
        counts = forms[key]
        # highest count first, lexicographically smallest surface form on ties
        best = min(counts, key=lambda form: (-counts[form], form))
        model.best_form[key] = best
        model.evidence[key] = sum(counts.values())
    return model


def truecase(sentence: Sequence[str], model: TruecaseModel) -> Tokens:
    if not sentence:
        return []
    first = sentence[0]
    key = first.lower()
    return [model.best_form.get(key, key), *sentence[1:]]


# -- cleaning -----------------------------------------------------------------


class DropReason(enum.Enum):
    # declaration order is the evaluation order
    TooLong = "TooLong"
    BadRatio = "BadRatio"
    Empty = "Empty"
    ForeignScript = "ForeignScript"
    Duplicate = "Duplicate"
    Unfinished = "Unfinished"


@dataclass(frozen=True)
class CleanConfig:
    max_tokens: int = 80
    max_length_ratio: float = 9.0
    foreign_char_ratio: float = 0.5
    drop_duplicates: bool = True
    require_terminal_punct: bool = False
    source_script: str = "LATIN"
    target_script: str = "LATIN"

    def __post_init__(self):
        if self.max_tokens < 1:
            raise ValidationError("max_tokens must be positive")
        if not self.max_length_ratio > 0:
            raise ValidationError("max_length_ratio must be positive")
        if not 0.0 <= self.foreign_char_ratio <= 1.0:
            raise ValidationError("foreign_char_ratio must lie in [0, 1]")


@dataclass(frozen=True)
class SentencePair:
    source: tuple[str, ...]
    target: tuple[str, ...]
    pair_id: int

    def __init__(self, source: Sequence[str], target: Sequence[str], pair_id: int):
        object.__setattr__(self, "source", tuple(source))
        object.__setattr__(self, "target", tuple(target))
        object.__setattr__(self, "pair_id", pair_id)


def char_script(ch: str) -> str:
    """First word of the Unicode character name, e.g. ``LATIN`` or ``CYRILLIC``."""
    name = unicodedata.name(ch, "")
    return name.split(" ", 1)[0] if name else "UNKNOWN"


def foreign_fraction(tokens: Sequence[str], script: str) -> float:
    letters = [ch for tok in tokens for ch in tok if ch.isalpha()]
    if not letters:
        return 0.0
    script = script.upper()
    foreign = sum(1 for ch in letters if char_script(ch) != script)
    return foreign / len(letters)


def clean_pair(pair: SentencePair, config: CleanConfig, seen: set) -> DropReason | None:
    """Return the first failing rule for ``pair`` or ``None`` to keep it.

    ``seen`` carries the duplicate-tracking state between calls and is
    updated in place.
    """
    ns, nt = len(pair.source), len(pair.target)
    if ns > config.max_tokens or nt > config.max_tokens:
        return DropReason.TooLong
    # ratio is undefined with an empty side; Empty reports those
    if ns and nt and max(ns, nt) / min(ns, nt) > config.max_length_ratio:
        return DropReason.BadRatio
    if ns == 0 or nt == 0:
        return DropReason.Empty
    if (foreign_fraction(pair.source, config.source_script) > config.foreign_char_ratio
            or foreign_fraction(pair.target, config.target_script) > config.foreign_char_ratio):
        return DropReason.ForeignScript
    if config.drop_duplicates:
        key = (pair.source, pair.target)
        if key in seen:
            return DropReason.Duplicate
        seen.add(key)
    if config.require_terminal_punct and (
            pair.source[-1] not in TERMINAL_TOKENS or pair.target[-1] not in TERMINAL_TOKENS):
        return DropReason.Unfinished
    return None


def clean_corpus(pairs: Iterable[SentencePair], config: CleanConfig | None = None
                 ) -> tuple[list[SentencePair], list[tuple[int, DropReason]]]:
    """Sequential left-to-right cleaning pass; returns kept pairs and drops."""
    config = config or CleanConfig()
    seen: set = set()
    kept, dropped = [], []
    for pair in pairs:
        reason = clean_pair(pair, config, seen)
        if reason is None:
            kept.append(pair)
        else:
            dropped.append((pair.pair_id, reason))
    return kept, dropped


def format_drop_report(dropped: Iterable[tuple[int, DropReason]]) -> str:
    rows = ["pair_id\treason"]
    rows.extend(f"{pid}\t{reason.value}" for pid, reason in dropped)
    return "\n".join(rows) + "\n"


# -- frequency-based compound splitting ---------------------------------------


@dataclass
class FrequencyTable:
    counts: Counter = field(default_factory=Counter)
    total: int = 0

    def __getitem__(self, token: str) -> int:
        return self.counts.get(token, 0)


def build_frequency_table(corpus: Iterable[Sequence[str]]) -> FrequencyTable:
    counts: Counter = Counter()
    for sentence in corpus:
        counts.update(sentence)
    return FrequencyTable(counts, sum(counts.values()))


def _segmentations(word: str, table: FrequencyTable, min_len: int,
                   fillers: Sequence[str]) -> Iterator[list[str]]:
    # all splits of word into known parts; a filler may sit between two parts
    if len(word) >= min_len and table[word] >= 1:
        yield [word]
    for cut in range(min_len, len(word) - min_len + 1):
        head = word[:cut]
        if table[head] < 1:
            continue
        rests = [word[cut:]]
        rests.extend(word[cut + len(f):] for f in fillers if f and word.startswith(f, cut))
        for rest in rests:
            for tail in _segmentations(rest, table, min_len, fillers):
                yield [head, *tail]


def split_compounds(token: str, table: FrequencyTable, min_part_len: int = 3,
                    fillers: Iterable[str] = ()) -> list[str]:
    """Split ``token`` when the geometric mean of its parts' counts beats it.

    Every segmentation into two or more known parts is scored; ties go to
    fewer parts and then to the longest leading parts.
    """
    fillers = sorted(set(fillers))
    best, best_key = None, None
    for parts in _segmentations(token, table, min_part_len, fillers):
        if len(parts) < 2:
            continue
        log_gm = sum(math.log(table[p]) for p in parts) / len(parts)
        key = (round(log_gm, 12), -len(parts), tuple(len(p) for p in parts))
        if best_key is None or key > best_key:
            best, best_key = parts, key
    if best is None:
        return [token]
    gm = math.exp(best_key[0])
    if gm > table[token] * (1 + 1e-12):
        return best
    return [token]


# -- stemming for alignment ----------------------------------------------------


def is_punct_token(token: str) -> bool:
    return bool(token) and all(unicodedata.category(ch).startswith("P") for ch in token)


def stem_for_alignment(sentence: Sequence[str], k: int = 4) -> Tokens:
    if k < 1:
        raise ValidationError("stem length must be at least 1")
    return [tok if is_punct_token(tok) else tok[:k] for tok in sentence]
