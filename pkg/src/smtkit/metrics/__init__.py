from .bleu import BleuReport, bleu, brevity_penalty, clipped_matches, closest_reference_length
from .meteor import MeteorReport, meteor, meteor_corpus, meteor_single
from .nist import NistReport, information_weights, nist, nist_brevity
from .scale import Band, NormalizedScore, interpretability_band, normalize_score
from .ter import TerReport, edit_distance, ter, ter_corpus, ter_single
from .types import EvalPair

__all__ = [
    "Band", "BleuReport", "EvalPair", "MeteorReport", "NistReport", "NormalizedScore",
    "TerReport", "bleu", "brevity_penalty", "clipped_matches", "closest_reference_length",
    "edit_distance", "information_weights", "interpretability_band", "meteor", "meteor_corpus",
    "meteor_single", "nist", "nist_brevity", "normalize_score", "ter", "ter_corpus", "ter_single",
]
