"""Backend switch for the hot loops.

Every kernel in :mod:`favard.kernels` exists twice: a numba-compiled loop and a
vectorized numpy fallback.  The numba path is used when numba imports and the
environment variable ``FAVARD_NO_NUMBA`` is not set to a truthy value.
"""
import os
import warnings

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None
    HAVE_NUMBA = False


def _truthy(value):
    return value.strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = HAVE_NUMBA and not _truthy(os.environ.get("FAVARD_NO_NUMBA", ""))


def njit(func):
    """Compile ``func`` with numba when available, otherwise return it unchanged."""
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def set_threads(threads):
    """Apply a ``--threads`` setting to numba; 0 or 1 leaves the default."""
    if HAVE_NUMBA and threads and threads > 1:
        with warnings.catch_warnings():
            # numba complains about an old TBB even when it falls back to another layer
            warnings.simplefilter("ignore")
            numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
