"""Sentence- and corpus-level BLEU.

Score = 100 * BP * exp(mean of log clipped n-gram precisions), with
BP = min(1, exp(1 - r/c)) where c is the candidate length and r the
closest reference length (ties broken toward the shorter reference, so
the result is independent of reference order).

Orders whose candidate n-gram total is zero (candidate shorter than the
order) are dropped from the geometric mean. Smoothing only ever touches
orders >= 2; a candidate with no unigram match scores 0 under every mode.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .. import _kernels
from ..errors import ContractViolation
from . import MetricScore, Scale
from .tokenizers import tokenize_international, tokenize_whitespace


class Smoothing(str, Enum):
    NONE = "none"
    ADD_ONE_FROM_ORDER2 = "add_one_from_order2"
    EXPONENTIAL = "exponential"


class BleuTokenizer(str, Enum):
    INTERNATIONAL = "international"
    WHITESPACE = "whitespace"


_TOKENIZERS = {
    BleuTokenizer.INTERNATIONAL: tokenize_international,
    BleuTokenizer.WHITESPACE: tokenize_whitespace,
}


@dataclass(frozen=True)
class BleuConfig:
    max_ngram_order: int = 4
    smoothing: Smoothing = Smoothing.EXPONENTIAL
    tokenizer: BleuTokenizer = BleuTokenizer.INTERNATIONAL

    def __post_init__(self):
        if not 1 <= self.max_ngram_order <= 9:
            raise ContractViolation(
                f"max_ngram_order must be in [1, 9], got {self.max_ngram_order}"
            )


# corpus_bleu default: corpus-summed counts rarely hit zero precisions,
# so no smoothing there (sentence_bleu defaults to exponential).
_CORPUS_DEFAULT = BleuConfig(smoothing=Smoothing.NONE)


def closest_ref_length(cand_len, ref_lens):
    """Reference length closest to the candidate's; ties pick the shorter."""
    return min(ref_lens, key=lambda r: (abs(r - cand_len), r))


def _pair_stats(candidate, references, config):
    tokenize = _TOKENIZERS[config.tokenizer]
    cand_tokens = tokenize(candidate)
    refs_tokens = [tokenize(ref) for ref in references]
    matches, totals = _kernels.clipped_ngram_stats(
        cand_tokens, refs_tokens, config.max_ngram_order
    )
    ref_len = closest_ref_length(len(cand_tokens), [len(r) for r in refs_tokens])
    return matches, totals, len(cand_tokens), ref_len


def score_from_stats(matches, totals, cand_len, ref_len, config):
    """BLEU from summed sufficient statistics (shared by both levels)."""
    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    effective_order = 0
    zero_run = 0
    for n in range(1, config.max_ngram_order + 1):
        m, t = matches[n - 1], totals[n - 1]
        if t == 0:
            continue
        if config.smoothing is Smoothing.ADD_ONE_FROM_ORDER2 and n >= 2:
            m, t = m + 1, t + 1
        if m == 0:
            if config.smoothing is Smoothing.EXPONENTIAL and n >= 2:
                zero_run += 1
                precision = 1.0 / (2**zero_run * t)
            else:
                return 0.0
        else:
            precision = m / t
        log_sum += math.log(precision)
        effective_order += 1
    if effective_order == 0:
        return 0.0
    brevity = min(1.0, math.exp(1.0 - ref_len / cand_len))
    return 100.0 * brevity * math.exp(log_sum / effective_order)


def sentence_bleu(candidate, references, config=None):
    """BLEU for one candidate against one or more references."""
    if not references:
        raise ContractViolation("sentence_bleu requires at least one reference")
    config = config or BleuConfig()
    stats = _pair_stats(candidate, references, config)
    return MetricScore(score_from_stats(*stats, config), Scale.PERCENT_0_100)


def corpus_bleu(pairs, config=None):
    """Corpus BLEU: counts and lengths are summed over all pairs before the
    precisions and brevity penalty are computed (never averaged per sentence)."""
    pairs = list(pairs)
    if not pairs:
        raise ContractViolation("corpus_bleu requires a non-empty corpus")
    config = config or _CORPUS_DEFAULT
    order = config.max_ngram_order
    sum_matches = [0] * order
    sum_totals = [0] * order
    sum_cand_len = 0
    sum_ref_len = 0
    for candidate, references in pairs:
        if not references:
            raise ContractViolation("corpus_bleu pair without references")
        matches, totals, cand_len, ref_len = _pair_stats(candidate, references, config)
        for i in range(order):
            sum_matches[i] += matches[i]
            sum_totals[i] += totals[i]
        sum_cand_len += cand_len
        sum_ref_len += ref_len
    value = score_from_stats(sum_matches, sum_totals, sum_cand_len, sum_ref_len, config)
    return MetricScore(value, Scale.PERCENT_0_100)
