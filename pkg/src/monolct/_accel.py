"""Backend selection for the direct-summation kernels.

The numba path is used when numba imports and ``MONOLCT_NUMBA`` is not set
to ``0``.  ``MONOLCT_THREADS`` caps the thread count for both numba and the
FFT workers.
"""

import os

_FALSE = {"0", "false", "no", "off"}

try:
    import numba

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skip the TBB probe; the bundled TBB is often too old and warns
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def numba_enabled():
    """Return True when the compiled kernels should be used."""
    flag = os.environ.get("MONOLCT_NUMBA", "1").strip().lower()
    return HAVE_NUMBA and flag not in _FALSE


def thread_cap():
    """Thread limit from ``MONOLCT_THREADS`` (None when unset or invalid)."""
    raw = os.environ.get("MONOLCT_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        return None
    return n if n > 0 else None


def fft_workers():
    n = thread_cap()
    return 1 if n is None else n


def apply_thread_cap():
    if HAVE_NUMBA:
        n = thread_cap()
        if n is not None:
            numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def jit(func):
    """``njit(cache=True, parallel=True)`` when numba is available, else identity."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, parallel=True, fastmath=False)(func)


if HAVE_NUMBA:
    prange = numba.prange
else:  # pragma: no cover
    prange = range
