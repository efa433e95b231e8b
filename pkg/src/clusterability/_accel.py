"""Optional numba acceleration.

The dip inner loop is pure index arithmetic and benefits hugely from jit
compilation, but the package must stay importable where numba wheels are
unavailable, so the decorator degrades to a no-op.
"""

try:
    import numba

    def maybe_jit(func):
        # nogil so threaded replicate loops can overlap compiled calls
        return numba.njit(cache=True, nogil=True)(func)

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba

    def maybe_jit(func):
        return func

    HAVE_NUMBA = False
