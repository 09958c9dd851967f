from collections import Counter
from typing import Sequence


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def max_reference_counts(references: Sequence[Sequence[str]], n: int) -> Counter:
    """Per n-gram maximum count over any single reference (the clipping cap)."""
    best: Counter = Counter()
    for ref in references:
        best |= ngram_counts(ref, n)
    return best
