#!/usr/bin/env python3
"""Benchmark the compiled counting kernels against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--sentences N] [--repeats K]

Times the three kernel entry points on a synthetic corpus and prints the
per-backend wall time plus speedup. Both backends are imported directly,
so this also double-checks they agree on the benchmark corpus.
"""

import argparse
import random
import time

from byolkit._kernels import pure

try:
    from byolkit._kernels import _fast as fast
except ImportError:
    fast = None

WORDS = (
    "the a of to and in for on with at by from up about into over after "
    "report market model language data value system number question time"
).split()


def build_corpus(sentences, seed=13):
    rng = random.Random(seed)
    corpus = []
    for _ in range(sentences):
        length = rng.randint(8, 24)
        text = " ".join(rng.choice(WORDS) for _ in range(length))
        mangled = " ".join(rng.choice(WORDS) for _ in range(max(4, length - 2)))
        corpus.append((text, mangled))
    return corpus


def time_backend(backend, corpus, repeats):
    token_pairs = [(cand.split(), ref.split()) for cand, ref in corpus]
    timings = {}

    start = time.perf_counter()
    for _ in range(repeats):
        for cand, ref in corpus:
            backend.count_words(cand)
            backend.count_words(ref)
    timings["count_words"] = time.perf_counter() - start

    start = time.perf_counter()
    for _ in range(repeats):
        for cand_tokens, ref_tokens in token_pairs:
            backend.clipped_ngram_stats(cand_tokens, [ref_tokens], 4)
    timings["clipped_ngram_stats"] = time.perf_counter() - start

    start = time.perf_counter()
    for _ in range(repeats):
        for cand, ref in corpus:
            backend.prf_ngram_stats(cand.replace(" ", ""), ref.replace(" ", ""), 6)
    timings["prf_ngram_stats"] = time.perf_counter() - start

    return timings


def check_agreement(corpus):
    for cand, ref in corpus[:200]:
        assert fast.count_words(cand) == pure.count_words(cand)
        assert fast.clipped_ngram_stats(cand.split(), [ref.split()], 4) == (
            pure.clipped_ngram_stats(cand.split(), [ref.split()], 4)
        )
        assert fast.prf_ngram_stats(cand, ref, 6) == pure.prf_ngram_stats(cand, ref, 6)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sentences", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    corpus = build_corpus(args.sentences)
    print(f"corpus: {args.sentences} sentence pairs, {args.repeats} repeats\n")

    pure_times = time_backend(pure, corpus, args.repeats)
    if fast is None:
        print("compiled kernels unavailable; pure-Python timings only\n")
        for kernel, seconds in pure_times.items():
            print(f"{kernel:<24}{seconds:>10.3f}s")
        return

    check_agreement(corpus)
    fast_times = time_backend(fast, corpus, args.repeats)

    header = f"{'kernel':<24}{'pure (s)':>10}{'cython (s)':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for kernel in pure_times:
        ratio = pure_times[kernel] / fast_times[kernel]
        print(
            f"{kernel:<24}{pure_times[kernel]:>10.3f}{fast_times[kernel]:>12.3f}"
            f"{ratio:>8.1f}x"
        )


if __name__ == "__main__":
    main()
