"""Language resource classification and pathway routing.

A language's effective digital footprint (total word count in a curated
corpus) places it in one of four tiers; the tier determines how it enters
the pipeline: translate-test access, continual pretraining plus merging,
direct finetuning, or nothing (already supported).
"""

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Optional, Sequence

from . import _kernels
from .errors import ContractViolation, InputFormatError

_ISO_639_3 = re.compile(r"^[a-z]{3}$")


class ResourceTier(IntEnum):
    """Corpus-size tiers, ordered from least to most digital presence."""

    EXTREME_LOW = 0
    LOW = 1
    MID = 2
    HIGH = 3

    @property
    def label(self):
        return _TIER_LABELS[self]


_TIER_LABELS = {
    ResourceTier.EXTREME_LOW: "extreme-low",
    ResourceTier.LOW: "low",
    ResourceTier.MID: "mid",
    ResourceTier.HIGH: "high",
}


class AdaptationPathway(str, Enum):
    TRANSLATE_TEST = "translate_test"
    CONTINUAL_PRETRAIN_AND_MERGE = "continual_pretrain_and_merge"
    DIRECT_FINETUNE = "direct_finetune"
    NATIVELY_SUPPORTED = "natively_supported"


@dataclass(frozen=True)
class TierThresholds:
    """Upper word-count bounds (inclusive) of the first three tiers.

    Defaults are the standard boundaries: 5e6 / 2e9 / 1e11 words. Interior
    boundaries belong to the lower tier; anything above mid_max is High.
    """

    extreme_low_max: int = 5_000_000
    low_max: int = 2_000_000_000
    mid_max: int = 100_000_000_000

    def __post_init__(self):
        if not 0 <= self.extreme_low_max < self.low_max < self.mid_max:
            raise ContractViolation(
                "tier thresholds must be strictly increasing and nonnegative"
            )


DEFAULT_THRESHOLDS = TierThresholds()

_PATHWAY_BY_TIER = {
    ResourceTier.EXTREME_LOW: AdaptationPathway.TRANSLATE_TEST,
    ResourceTier.LOW: AdaptationPathway.CONTINUAL_PRETRAIN_AND_MERGE,
    ResourceTier.MID: AdaptationPathway.DIRECT_FINETUNE,
    ResourceTier.HIGH: AdaptationPathway.NATIVELY_SUPPORTED,
}


@dataclass(frozen=True)
class LanguageProfile:
    code: str
    name: str
    word_count: int
    speaker_population: Optional[int] = None
    script: Optional[str] = None

    def __post_init__(self):
        if not _ISO_639_3.match(self.code):
            raise ContractViolation(
                f"language code must be three lowercase ASCII letters, got {self.code!r}"
            )
        if self.word_count < 0:
            raise ContractViolation(f"word_count must be >= 0, got {self.word_count}")
        if self.speaker_population is not None and self.speaker_population < 0:
            raise ContractViolation("speaker_population must be >= 0 when present")


def classify_tier(word_count, thresholds=DEFAULT_THRESHOLDS):
    """Map a nonnegative word count to its resource tier."""
    if word_count < 0:
        raise ContractViolation(f"word_count must be >= 0, got {word_count}")
    if word_count <= thresholds.extreme_low_max:
        return ResourceTier.EXTREME_LOW
    if word_count <= thresholds.low_max:
        return ResourceTier.LOW
    if word_count <= thresholds.mid_max:
        return ResourceTier.MID
    return ResourceTier.HIGH


def route_pathway(tier):
    """Adaptation pathway for a tier; total and deterministic."""
    return _PATHWAY_BY_TIER[ResourceTier(tier)]


def count_words(text):
    """Words = maximal non-whitespace runs after NFC normalization."""
    return _kernels.count_words(unicodedata.normalize("NFC", text))


def build_profile(code, corpus_stream, name="", speaker_population=None, script=None):
    """Profile a language from a stream of documents (str or UTF-8 bytes).

    Word counts are additive across documents, so chunking and processing
    order do not matter.
    """
    total = 0
    for index, document in enumerate(corpus_stream):
        if isinstance(document, bytes):
            try:
                document = document.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise InputFormatError(
                    f"document {index}: invalid UTF-8: {exc.reason}",
                    byte_offset=exc.start,
                ) from exc
        total += count_words(document)
    return LanguageProfile(
        code=code,
        name=name or code,
        word_count=total,
        speaker_population=speaker_population,
        script=script,
    )


@dataclass(frozen=True)
class AtlasReport:
    """One row per language plus the thresholds that produced the tiers."""

    rows: tuple
    thresholds: TierThresholds

    def to_table(self):
        header = f"{'code':<6}{'name':<24}{'words':>16}{'speakers':>14}  {'tier':<13}pathway"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            speakers = "-" if row["speaker_population"] is None else str(row["speaker_population"])
            lines.append(
                f"{row['code']:<6}{row['name']:<24}{row['word_count']:>16}{speakers:>14}"
                f"  {row['tier']:<13}{row['pathway']}"
            )
        lines.append(
            "thresholds: extreme-low <= {0}, low <= {1}, mid <= {2}".format(
                self.thresholds.extreme_low_max,
                self.thresholds.low_max,
                self.thresholds.mid_max,
            )
        )
        return "\n".join(lines)


def atlas_report(profiles: Sequence[LanguageProfile], thresholds=DEFAULT_THRESHOLDS):
    """Tier/pathway table over profiles, sorted by descending word count.

    Rows double as plot data (corpus size vs speaker population, tier label
    as the color key).
    """
    if not profiles:
        raise ContractViolation("atlas_report requires at least one profile")
    rows = []
    ordered = sorted(profiles, key=lambda p: (-p.word_count, p.code))
    for profile in ordered:
        tier = classify_tier(profile.word_count, thresholds)
        rows.append(
            {
                "code": profile.code,
                "name": profile.name,
                "word_count": profile.word_count,
                "speaker_population": profile.speaker_population,
                "tier": tier.label,
                "pathway": route_pathway(tier).value,
            }
        )
    return AtlasReport(rows=tuple(rows), thresholds=thresholds)
