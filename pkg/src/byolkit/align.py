"""Validation of LLM-produced sentence-alignment records.

Input is JSON Lines, one object per line with exactly the keys "source"
and "target", each a non-empty array of text segments. Validation checks
the structural rules (non-empty segments, same-language leakage via
character-trigram overlap) and, when the original documents are supplied,
that the located segment spans are monotonic, contiguous within a record,
and non-overlapping across records.
"""

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .errors import InputFormatError

REQUIRED_KEYS = {"source", "target"}
DEFAULT_OVERLAP_THRESHOLD = 0.70


@dataclass(frozen=True)
class AlignmentRecord:
    source: Tuple[str, ...]
    target: Tuple[str, ...]
    ordinal: int

    @property
    def alignment_type(self):
        left = "1" if len(self.source) == 1 else "M"
        right = "1" if len(self.target) == 1 else "N"
        return f"{left}-{right}"


@dataclass(frozen=True)
class ParseRejection:
    line_number: int
    byte_offset: int
    message: str


def parse_alignment_records(path, strict=False):
    """Parse a JSONL alignment file.

    Returns (records, rejections); with strict=True the first malformed
    line raises instead. Rejections carry line number and byte offset.
    """
    records = []
    rejections = []

    def reject(line_number, byte_offset, message):
        if strict:
            raise InputFormatError(message, line_number=line_number, byte_offset=byte_offset)
        rejections.append(ParseRejection(line_number, byte_offset, message))

    with open(path, "rb") as handle:
        blob = handle.read()
    offset = 0
    for line_number, raw_line in enumerate(blob.split(b"\n"), 1):
        line_offset = offset
        offset += len(raw_line) + 1
        if not raw_line.strip():
            continue
        try:
            text = raw_line.decode("utf-8")
        except UnicodeDecodeError as exc:
            reject(line_number, line_offset + exc.start, f"invalid UTF-8: {exc.reason}")
            continue
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            error_offset = line_offset + len(text[: exc.pos].encode("utf-8"))
            reject(line_number, error_offset, f"invalid JSON: {exc.msg}")
            continue
        if not isinstance(payload, dict):
            reject(line_number, line_offset, "record is not a JSON object")
            continue
        keys = set(payload)
        if keys != REQUIRED_KEYS:
            extra = sorted(keys - REQUIRED_KEYS)
            missing = sorted(REQUIRED_KEYS - keys)
            parts = []
            if missing:
                parts.append(f"missing keys {missing}")
            if extra:
                parts.append(f"unexpected keys {extra}")
            reject(line_number, line_offset, "; ".join(parts))
            continue
        sides = {}
        bad = False
        for key in ("source", "target"):
            value = payload[key]
            if (
                not isinstance(value, list)
                or not value
                or not all(isinstance(item, str) for item in value)
            ):
                reject(line_number, line_offset, f'"{key}" must be a non-empty array of strings')
                bad = True
                break
            sides[key] = tuple(value)
        if bad:
            continue
        records.append(
            AlignmentRecord(source=sides["source"], target=sides["target"], ordinal=line_number)
        )
    return records, rejections


def _normalize(text):
    return " ".join(unicodedata.normalize("NFC", text).lower().split())


def _trigrams(text):
    return Counter(text[i : i + 3] for i in range(len(text) - 2))


def overlap_ratio(a, b):
    """Jaccard similarity over character-trigram multisets.

    Inputs are NFC-normalized, lowercased and whitespace-collapsed first.
    When neither side yields a trigram, equality of the normalized inputs
    decides (two empty strings give 1.0).
    """
    norm_a, norm_b = _normalize(a), _normalize(b)
    grams_a, grams_b = _trigrams(norm_a), _trigrams(norm_b)
    union = sum((grams_a | grams_b).values())
    if union == 0:
        return 1.0 if norm_a == norm_b else 0.0
    shared = sum((grams_a & grams_b).values())
    return shared / union


@dataclass(frozen=True)
class Violation:
    ordinal: int
    rule: str
    detail: str


@dataclass
class ValidationReport:
    accepted: int
    rejections: list
    histogram: dict
    span_checks_evaluated: bool
    source_spans: list = field(default_factory=list)
    target_spans: list = field(default_factory=list)

    @property
    def total(self):
        return self.accepted + len(self.rejections)


def _locate_segments(segments, doc_index, ordinal, side):
    """Map segments to document sentence indices; None plus violation on miss."""
    indices = []
    for segment in segments:
        key = _normalize(segment)
        if key not in doc_index:
            return None, Violation(
                ordinal, "not_found", f"{side} segment not found in document: {segment[:60]!r}"
            )
        indices.append(doc_index[key])
    for previous, current in zip(indices, indices[1:]):
        if current != previous + 1:
            return None, Violation(
                ordinal,
                "contiguity",
                f"{side} segments map to non-consecutive sentences {indices}",
            )
    return (indices[0], indices[-1]), None


def _build_doc_index(doc):
    index = {}
    for position, sentence in enumerate(doc):
        key = _normalize(sentence)
        if key not in index:  # duplicates resolve to first occurrence
            index[key] = position
    return index


def _check_span_order(span, prior_spans, ordinal, side):
    start, end = span
    for prior_start, prior_end in prior_spans:
        if start <= prior_end and prior_start <= end:
            return Violation(
                ordinal,
                "overlap",
                f"{side} span [{start}, {end}] intersects accepted span [{prior_start}, {prior_end}]",
            )
    if prior_spans and start <= prior_spans[-1][1]:
        return Violation(
            ordinal,
            "monotonicity",
            f"{side} span [{start}, {end}] starts before the previous record's span",
        )
    return None


def validate_alignment(
    records: Sequence[AlignmentRecord],
    source_doc: Optional[Sequence[str]] = None,
    target_doc: Optional[Sequence[str]] = None,
    overlap_threshold: float = DEFAULT_OVERLAP_THRESHOLD,
) -> ValidationReport:
    """Check alignment records; violations are report content, not errors.

    Without documents the monotonicity/contiguity rules cannot run and are
    marked not evaluated rather than silently passing.
    """
    histogram = {"1-1": 0, "1-N": 0, "M-1": 0, "M-N": 0}
    rejections = []
    accepted = 0
    span_checks = source_doc is not None or target_doc is not None
    source_index = _build_doc_index(source_doc) if source_doc is not None else None
    target_index = _build_doc_index(target_doc) if target_doc is not None else None
    accepted_source_spans = []
    accepted_target_spans = []

    for record in records:
        histogram[record.alignment_type] += 1
        violation = None

        if any(not segment.strip() for segment in record.source + record.target):
            violation = Violation(record.ordinal, "empty_segment", "blank segment after trimming")

        if violation is None:
            ratio = overlap_ratio(" ".join(record.source), " ".join(record.target))
            if ratio > overlap_threshold:
                violation = Violation(
                    record.ordinal,
                    "same_language",
                    f"source/target trigram overlap {ratio:.4f} exceeds {overlap_threshold}",
                )

        source_span = target_span = None
        if violation is None and source_index is not None:
            source_span, violation = _locate_segments(
                record.source, source_index, record.ordinal, "source"
            )
            if violation is None:
                violation = _check_span_order(
                    source_span, accepted_source_spans, record.ordinal, "source"
                )
        if violation is None and target_index is not None:
            target_span, violation = _locate_segments(
                record.target, target_index, record.ordinal, "target"
            )
            if violation is None:
                violation = _check_span_order(
                    target_span, accepted_target_spans, record.ordinal, "target"
                )

        if violation is not None:
            rejections.append(violation)
            continue
        accepted += 1
        if source_span is not None:
            accepted_source_spans.append(source_span)
        if target_span is not None:
            accepted_target_spans.append(target_span)

    return ValidationReport(
        accepted=accepted,
        rejections=rejections,
        histogram=histogram,
        span_checks_evaluated=span_checks,
        source_spans=accepted_source_spans,
        target_spans=accepted_target_spans,
    )
