"""From-scratch translation fidelity metrics: BLEU, chrF++, cosine."""

from dataclasses import dataclass
from enum import Enum

from ..errors import ContractViolation


class Scale(str, Enum):
    PERCENT_0_100 = "percent_0_100"
    UNIT_INTERVAL = "unit_interval"
    SIGNED_UNIT = "signed_unit"


_RANGES = {
    Scale.PERCENT_0_100: (0.0, 100.0),
    Scale.UNIT_INTERVAL: (0.0, 1.0),
    Scale.SIGNED_UNIT: (-1.0, 1.0),
}

_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class MetricScore:
    value: float
    scale: Scale

    def __post_init__(self):
        lo, hi = _RANGES[self.scale]
        if not (lo - _RANGE_SLACK <= self.value <= hi + _RANGE_SLACK):
            raise ContractViolation(
                f"score {self.value!r} outside {self.scale.value} range [{lo}, {hi}]"
            )


from .bleu import BleuConfig, BleuTokenizer, Smoothing, corpus_bleu, sentence_bleu  # noqa: E402
from .chrf import ChrfConfig, chrf_pp  # noqa: E402
from .vector import cosine_similarity  # noqa: E402

__all__ = [
    "BleuConfig",
    "BleuTokenizer",
    "ChrfConfig",
    "MetricScore",
    "Scale",
    "Smoothing",
    "chrf_pp",
    "corpus_bleu",
    "cosine_similarity",
    "sentence_bleu",
]
