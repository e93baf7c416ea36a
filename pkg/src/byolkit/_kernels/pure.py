"""Pure-Python implementations of the hot counting kernels.

Same contract as the compiled module `byolkit._kernels._fast`; used as the
fallback when the extension is unavailable (or when BYOLKIT_PURE_PYTHON=1).
Sequences may be strings (character n-grams, keyed by substring) or lists
of tokens (keyed by tuple).
"""

from collections import Counter

BACKEND = "pure"


def count_words(text):
    """Number of maximal non-whitespace runs in `text`."""
    return len(text.split())


def _ngram_counts(seq, n):
    if isinstance(seq, str):
        return Counter(seq[i : i + n] for i in range(len(seq) - n + 1))
    return Counter(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))


def clipped_ngram_stats(cand_tokens, refs_tokens, max_order):
    """Clipped n-gram match and total counts for orders 1..max_order.

    Candidate n-gram counts are capped at the maximum count of that n-gram
    across the references. Returns (matches, totals), each a list of length
    max_order.
    """
    matches = [0] * max_order
    totals = [0] * max_order
    for n in range(1, max_order + 1):
        cand_counts = _ngram_counts(cand_tokens, n)
        if not cand_counts:
            continue
        ref_max = Counter()
        for ref in refs_tokens:
            for gram, count in _ngram_counts(ref, n).items():
                if count > ref_max[gram]:
                    ref_max[gram] = count
        totals[n - 1] = sum(cand_counts.values())
        matches[n - 1] = sum(
            min(count, ref_max[gram]) for gram, count in cand_counts.items()
        )
    return matches, totals


def prf_ngram_stats(cand_seq, ref_seq, max_order):
    """Per-order (match, cand_total, ref_total) triples for orders 1..max_order.

    match is the multiset intersection size of the two n-gram bags.
    """
    stats = []
    for n in range(1, max_order + 1):
        cand_counts = _ngram_counts(cand_seq, n)
        ref_counts = _ngram_counts(ref_seq, n)
        match = sum((cand_counts & ref_counts).values())
        stats.append((match, sum(cand_counts.values()), sum(ref_counts.values())))
    return stats
