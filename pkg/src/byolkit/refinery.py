"""Deterministic bitext and monolingual corpus processing.

Filtering applies dedup, token-length bounds, and the symmetric character
length-ratio rule, with one primary rejection reason per record (precedence
duplicate > length > ratio). Augmentation draws per-record random streams
so results are reproducible and order-independent. Mixing draws from
components in proportion to their weights, measured in pairs or tokens.
"""

import hashlib
import json
import random
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

from . import _kernels
from .errors import ContractViolation, InputFormatError


class PairOrigin(str, Enum):
    HUMAN = "human"
    SYNTHETIC_BACKTRANSLATED = "synthetic_backtranslated"
    SYNTHETIC_MT = "synthetic_mt"


@dataclass(frozen=True)
class SentencePair:
    source: str
    target: str
    origin: PairOrigin = PairOrigin.HUMAN
    provenance: str = ""
    lineage: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.source or not self.target:
            raise ContractViolation("sentence pair sides must be non-empty")


@dataclass(frozen=True)
class FilterConfig:
    min_tokens: int = 3
    max_tokens: int = 256
    max_char_ratio: float = 1.3
    dedup: bool = True

    def __post_init__(self):
        if not 0 < self.min_tokens <= self.max_tokens:
            raise ContractViolation(
                f"need 0 < min_tokens <= max_tokens, got {self.min_tokens}/{self.max_tokens}"
            )
        if self.max_char_ratio <= 0:
            raise ContractViolation("max_char_ratio must be positive")


class RejectionReason(str, Enum):
    DUPLICATE = "duplicate"
    LENGTH = "length"
    RATIO = "ratio"


@dataclass(frozen=True)
class Rejection:
    index: int
    reason: RejectionReason
    detail: dict


@dataclass
class FilterResult:
    kept: list
    rejections: list

    @property
    def kept_count(self):
        return len(self.kept)


def _dedup_key(text):
    return " ".join(unicodedata.normalize("NFC", text).split())


def _token_count(text):
    return _kernels.count_words(text)


def filter_pairs(pairs, config: FilterConfig = FilterConfig(), token_counter=None):
    """Partition pairs into (kept, rejections).

    Dedup compares against earlier *kept* pairs, keyed jointly on the
    whitespace-normalized (source, target). Rejections are data, not errors.
    """
    count_tokens = token_counter or _token_count
    kept = []
    rejections = []
    seen = set()
    for index, pair in enumerate(pairs):
        key = (_dedup_key(pair.source), _dedup_key(pair.target))
        if config.dedup and key in seen:
            rejections.append(
                Rejection(index, RejectionReason.DUPLICATE, {"source": pair.source})
            )
            continue
        source_tokens = count_tokens(pair.source)
        target_tokens = count_tokens(pair.target)
        if not (
            config.min_tokens <= source_tokens <= config.max_tokens
            and config.min_tokens <= target_tokens <= config.max_tokens
        ):
            rejections.append(
                Rejection(
                    index,
                    RejectionReason.LENGTH,
                    {"source_tokens": source_tokens, "target_tokens": target_tokens},
                )
            )
            continue
        longer = max(len(pair.source), len(pair.target))
        shorter = min(len(pair.source), len(pair.target))
        ratio = longer / shorter
        if ratio > config.max_char_ratio:
            rejections.append(
                Rejection(index, RejectionReason.RATIO, {"char_ratio": round(ratio, 4)})
            )
            continue
        seen.add(key)
        kept.append(pair)
    return FilterResult(kept=kept, rejections=rejections)


def clean_monolingual(texts, config: FilterConfig = FilterConfig(), token_counter=None):
    """Dedup + token-length bounds for single texts; kept lines pass through
    byte-identical."""
    count_tokens = token_counter or _token_count
    kept = []
    rejections = []
    seen = set()
    for index, text in enumerate(texts):
        key = _dedup_key(text)
        if config.dedup and key in seen:
            rejections.append(Rejection(index, RejectionReason.DUPLICATE, {"text": text}))
            continue
        tokens = count_tokens(text)
        if not config.min_tokens <= tokens <= config.max_tokens:
            rejections.append(Rejection(index, RejectionReason.LENGTH, {"tokens": tokens}))
            continue
        seen.add(key)
        kept.append(text)
    return FilterResult(kept=kept, rejections=rejections)


@dataclass(frozen=True)
class AugmentationConfig:
    p_punct_removal: float = 0.1
    p_diacritic_strip: float = 0.1
    p_case_variation: float = 0.1
    p_copy: float = 0.05
    seed: int = 0

    def __post_init__(self):
        for name in ("p_punct_removal", "p_diacritic_strip", "p_case_variation", "p_copy"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ContractViolation(f"{name} must be a probability, got {p}")


def _record_rng(seed, record_index):
    digest = hashlib.blake2b(
        f"{seed}:{record_index}".encode(), digest_size=16
    ).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _remove_punctuation(text):
    stripped = "".join(
        ch for ch in text if not unicodedata.category(ch).startswith("P")
    )
    return " ".join(stripped.split())


def _strip_diacritics(text):
    decomposed = unicodedata.normalize("NFD", text)
    kept = "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")
    return unicodedata.normalize("NFC", kept)


def augment_pair(pair: SentencePair, config: AugmentationConfig, record_index: int):
    """Apply the stochastic augmentations to one pair.

    The random stream depends only on (config.seed, record_index), so the
    same record always augments identically regardless of processing order.
    Transform draw order is fixed: punctuation, diacritics, casing, copy.
    A transform that would empty a side is skipped.
    """
    rng = _record_rng(config.seed, record_index)
    source, target = pair.source, pair.target
    lineage = list(pair.lineage)

    if rng.random() < config.p_punct_removal:
        new_source, new_target = _remove_punctuation(source), _remove_punctuation(target)
        if new_source and new_target:
            source, target = new_source, new_target
            lineage.append("punct_removal")

    if rng.random() < config.p_diacritic_strip:
        new_source, new_target = _strip_diacritics(source), _strip_diacritics(target)
        if new_source and new_target:
            source, target = new_source, new_target
            lineage.append("diacritic_strip")

    if rng.random() < config.p_case_variation:
        case = rng.choice(("lower", "upper"))
        source = source.lower() if case == "lower" else source.upper()
        target = target.lower() if case == "lower" else target.upper()
        lineage.append("case_variation")

    if rng.random() < config.p_copy:
        source = target
        lineage.append("copy")

    return replace(pair, source=source, target=target, lineage=tuple(lineage))


class TransliterationTable:
    """Ordered grapheme mapping applied left to right, longest match first."""

    def __init__(self, entries):
        self.entries = dict(entries)
        if not all(self.entries):
            raise ContractViolation("transliteration keys must be non-empty")
        self._by_length = sorted({len(key) for key in self.entries}, reverse=True)

    @classmethod
    def from_tsv(cls, path):
        entries = {}
        with open(path, encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, 1):
                if not line.strip() or line.startswith("#"):
                    continue
                columns = line.rstrip("\n").split("\t")
                if len(columns) != 2:
                    raise InputFormatError(
                        f"expected two tab-separated columns, got {len(columns)}",
                        line_number=line_number,
                    )
                entries[columns[0]] = columns[1]
        return cls(entries)

    def apply(self, text):
        out = []
        position = 0
        length = len(text)
        while position < length:
            for key_length in self._by_length:
                candidate = text[position : position + key_length]
                if len(candidate) == key_length and candidate in self.entries:
                    out.append(self.entries[candidate])
                    position += key_length
                    break
            else:
                out.append(text[position])
                position += 1
        return "".join(out)


def transliterate(text, table: TransliterationTable):
    return table.apply(text)


class MixUnit(str, Enum):
    PAIRS = "pairs"
    TOKENS = "tokens"


@dataclass(frozen=True)
class MixtureComponent:
    name: str
    records: Sequence
    weight: float = 1.0

    def __post_init__(self):
        if self.weight <= 0:
            raise ContractViolation(f"component {self.name!r}: weight must be positive")


@dataclass(frozen=True)
class MixtureSpec:
    components: Sequence[MixtureComponent]
    unit: MixUnit = MixUnit.TOKENS

    def __post_init__(self):
        if not self.components:
            raise ContractViolation("mixture needs at least one component")


class MixtureShortfallError(ContractViolation):
    """A component cannot supply its share; oversampling is never silent."""


def _record_units(record, unit, token_counter):
    if unit is MixUnit.PAIRS:
        return 1
    return token_counter(record)


def mix_corpora(
    spec: MixtureSpec,
    seed: int = 0,
    total_units: Optional[int] = None,
    token_counter: Optional[Callable] = None,
):
    """Weighted interleave of corpora.

    Records are drawn from each component (in component order) until its
    unit share of the total is met, then the selected records are shuffled
    with `seed`. Without `total_units` the largest feasible total is used,
    so weights are honored exactly at the record granularity. Returns
    (records, manifest) where each output record is (component_name, record).
    """
    count_tokens = token_counter or _token_count
    weight_sum = sum(c.weight for c in spec.components)
    sizes = []
    for component in spec.components:
        sizes.append(
            sum(_record_units(r, spec.unit, count_tokens) for r in component.records)
        )

    if total_units is None:
        total = min(
            size * weight_sum / component.weight
            for size, component in zip(sizes, spec.components)
        )
    else:
        total = float(total_units)

    selected = []
    manifest_components = []
    for component, size in zip(spec.components, sizes):
        target = total * component.weight / weight_sum
        if target > size + 1e-9:
            raise MixtureShortfallError(
                f"component {component.name!r} holds {size} {spec.unit.value} "
                f"but its share requires {target:.1f} "
                f"(shortfall {target - size:.1f})"
            )
        taken_units = 0
        taken_records = 0
        for record in component.records:
            if taken_units >= target:
                break
            taken_units += _record_units(record, spec.unit, count_tokens)
            taken_records += 1
            selected.append((component.name, record))
        manifest_components.append(
            {
                "name": component.name,
                "weight": component.weight,
                "target_share": component.weight / weight_sum,
                "selected_records": taken_records,
                "selected_units": taken_units,
            }
        )

    realized_total = sum(c["selected_units"] for c in manifest_components)
    for entry in manifest_components:
        entry["realized_share"] = (
            entry["selected_units"] / realized_total if realized_total else 0.0
        )

    random.Random(seed).shuffle(selected)
    manifest = {
        "unit": spec.unit.value,
        "seed": seed,
        "total_units": realized_total,
        "components": manifest_components,
    }
    return selected, manifest


def load_pairs_jsonl(path):
    """Line-delimited records with source/target plus optional origin,
    provenance, and lineage fields."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                pairs.append(
                    SentencePair(
                        source=row["source"],
                        target=row["target"],
                        origin=PairOrigin(row.get("origin", "human")),
                        provenance=row.get("provenance", ""),
                        lineage=tuple(row.get("lineage", ())),
                    )
                )
            except (ValueError, KeyError) as exc:
                raise InputFormatError(f"bad pair record: {exc}", line_number=line_number) from exc
    return pairs


def write_pairs_jsonl(pairs, path):
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(
                json.dumps(
                    {
                        "source": pair.source,
                        "target": pair.target,
                        "origin": pair.origin.value,
                        "provenance": pair.provenance,
                        "lineage": list(pair.lineage),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_pairs_tsv(path, origin=PairOrigin.HUMAN, provenance=""):
    """Two-column UTF-8 TSV: source TAB target, one pair per line."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            columns = line.split("\t")
            if len(columns) != 2:
                raise InputFormatError(
                    f"expected two tab-separated columns, got {len(columns)}",
                    line_number=line_number,
                )
            if not columns[0] or not columns[1]:
                raise InputFormatError("empty source or target side", line_number=line_number)
            pairs.append(
                SentencePair(columns[0], columns[1], origin=origin, provenance=provenance)
            )
    return pairs
