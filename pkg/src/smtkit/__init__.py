"""Toolkit for statistical machine translation experiments.

Corpus preparation, word-alignment symmetrization, n-gram language models,
BLEU/NIST/METEOR/TER scoring and the statistics used to compare systems.
"""

__version__ = "0.1.0"
