"""Deterministic tokenization rules used by the fidelity metrics."""

import unicodedata


def tokenize_whitespace(text):
    """NFC-normalize, then split on whitespace."""
    return unicodedata.normalize("NFC", text).split()


def tokenize_international(text):
    """NFC-normalize, isolate every punctuation character (Unicode general
    category P*) as its own token, then split on whitespace. Case is kept."""
    text = unicodedata.normalize("NFC", text)
    parts = []
    for ch in text:
        if unicodedata.category(ch).startswith("P"):
            parts.append(" ")
            parts.append(ch)
            parts.append(" ")
        else:
            parts.append(ch)
    return "".join(parts).split()
