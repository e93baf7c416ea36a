# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the counting kernels in byolkit._kernels.pure.

Both modules must stay observationally identical; the parity test suite
compares them on randomized inputs.
"""

from cpython.unicode cimport Py_UNICODE_ISSPACE

BACKEND = "cython"


def count_words(unicode text):
    """Number of maximal non-whitespace runs in `text`."""
    cdef Py_ssize_t words = 0
    cdef bint in_word = False
    cdef Py_UCS4 ch
    for ch in text:
        if Py_UNICODE_ISSPACE(ch):
            in_word = False
        elif not in_word:
            in_word = True
            words += 1
    return words


cdef dict _char_ngram_counts(unicode seq, Py_ssize_t n):
    cdef dict counts = {}
    cdef Py_ssize_t i, limit = len(seq) - n + 1
    cdef object gram
    for i in range(limit):
        gram = seq[i : i + n]
        counts[gram] = counts.get(gram, 0) + 1
    return counts


cdef dict _token_ngram_counts(list seq, Py_ssize_t n):
    cdef dict counts = {}
    cdef Py_ssize_t i, limit = len(seq) - n + 1
    cdef object gram
    for i in range(limit):
        gram = tuple(seq[i : i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


cdef dict _ngram_counts(object seq, Py_ssize_t n):
    if isinstance(seq, unicode):
        return _char_ngram_counts(<unicode> seq, n)
    return _token_ngram_counts(<list> list(seq), n)


def clipped_ngram_stats(cand_tokens, refs_tokens, max_order):
    """Clipped n-gram match and total counts for orders 1..max_order."""
    cdef Py_ssize_t order = max_order
    cdef list matches = [0] * order
    cdef list totals = [0] * order
    cdef Py_ssize_t n
    cdef dict cand_counts, ref_max
    cdef object gram, ref
    cdef long count, best, clipped, total
    for n in range(1, order + 1):
        cand_counts = _ngram_counts(cand_tokens, n)
        if not cand_counts:
            continue
        ref_max = {}
        for ref in refs_tokens:
            for gram, count in _ngram_counts(ref, n).items():
                best = ref_max.get(gram, 0)
                if count > best:
                    ref_max[gram] = count
        total = 0
        clipped = 0
        for gram, count in cand_counts.items():
            total += count
            best = ref_max.get(gram, 0)
            clipped += count if count < best else best
        totals[n - 1] = total
        matches[n - 1] = clipped
    return matches, totals


def prf_ngram_stats(cand_seq, ref_seq, max_order):
    """Per-order (match, cand_total, ref_total) triples for orders 1..max_order."""
    cdef Py_ssize_t order = max_order
    cdef list stats = []
    cdef Py_ssize_t n
    cdef dict cand_counts, ref_counts
    cdef object gram
    cdef long count, other, match, cand_total, ref_total
    for n in range(1, order + 1):
        cand_counts = _ngram_counts(cand_seq, n)
        ref_counts = _ngram_counts(ref_seq, n)
        match = 0
        cand_total = 0
        ref_total = 0
        for gram, count in cand_counts.items():
            cand_total += count
            other = ref_counts.get(gram, 0)
            match += count if count < other else other
        for count in ref_counts.values():
            ref_total += count
        stats.append((match, cand_total, ref_total))
    return stats
