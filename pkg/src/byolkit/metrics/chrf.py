"""chrF++: character n-gram F-score augmented with word n-grams.

Character n-grams (orders 1..char_ngram_order) are taken over the NFC text
with all whitespace removed; word n-grams (orders 1..word_ngram_order) over
punctuation-split whitespace tokens. Precision and recall are averaged over
all orders where at least one side has n-grams; an order where only one
side is empty contributes zero. Multiple references: best score wins.
"""

import unicodedata
from dataclasses import dataclass

from .. import _kernels
from ..errors import ContractViolation
from . import MetricScore, Scale
from .tokenizers import tokenize_international


@dataclass(frozen=True)
class ChrfConfig:
    char_ngram_order: int = 6
    word_ngram_order: int = 2
    beta: float = 2.0

    def __post_init__(self):
        if self.char_ngram_order < 1 or self.word_ngram_order < 1:
            raise ContractViolation("chrF++ n-gram orders must be >= 1")
        if self.beta <= 0:
            raise ContractViolation(f"beta must be positive, got {self.beta}")


def _strip_whitespace(text):
    return "".join(unicodedata.normalize("NFC", text).split())


def _single_reference_score(candidate, reference, config):
    stats = _kernels.prf_ngram_stats(
        _strip_whitespace(candidate),
        _strip_whitespace(reference),
        config.char_ngram_order,
    )
    stats += _kernels.prf_ngram_stats(
        tokenize_international(candidate),
        tokenize_international(reference),
        config.word_ngram_order,
    )
    precision_sum = 0.0
    recall_sum = 0.0
    contributing = 0
    for match, cand_total, ref_total in stats:
        if cand_total == 0 and ref_total == 0:
            continue
        contributing += 1
        if cand_total > 0:
            precision_sum += match / cand_total
        if ref_total > 0:
            recall_sum += match / ref_total
    if contributing == 0:
        # both texts empty at every order: identical iff equal strings
        return 100.0 if candidate == reference else 0.0
    precision = precision_sum / contributing
    recall = recall_sum / contributing
    beta_sq = config.beta**2
    denominator = beta_sq * precision + recall
    if denominator == 0.0:
        return 0.0
    return 100.0 * (1 + beta_sq) * precision * recall / denominator


def chrf_pp(candidate, references, config=None):
    """chrF++ of a candidate against one or more references (max over refs)."""
    if not references:
        raise ContractViolation("chrf_pp requires at least one reference")
    config = config or ChrfConfig()
    value = max(_single_reference_score(candidate, ref, config) for ref in references)
    return MetricScore(value, Scale.PERCENT_0_100)
