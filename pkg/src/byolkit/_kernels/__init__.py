"""Counting kernels with a compiled core and a pure-Python fallback.

The compiled extension is preferred when importable; set
BYOLKIT_PURE_PYTHON=1 to force the fallback. `backend_name()` reports
which implementation is active.
"""

import os

from . import pure

if os.environ.get("BYOLKIT_PURE_PYTHON") == "1":
    impl = pure
else:
    try:
        from . import _fast as impl  # type: ignore[no-redef]
    except ImportError:
        impl = pure

count_words = impl.count_words
clipped_ngram_stats = impl.clipped_ngram_stats
prf_ngram_stats = impl.prf_ngram_stats


def backend_name():
    return impl.BACKEND
