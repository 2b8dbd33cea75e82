"""JIT switch for the numeric kernels.

Kernels are decorated with :func:`jit`. When numba is importable and the
environment variable ``HPMP_DISABLE_JIT`` is unset (or ``0``), they are
compiled with ``numba.njit``; otherwise the undecorated Python functions run
as-is. The flag is read once, at import time.
"""

import os

_flag = os.environ.get("HPMP_DISABLE_JIT", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba

    NUMBA_ENABLED = True
except ImportError:
    numba = None
    NUMBA_ENABLED = False


def jit(fn=None, *, fallback=None):
    """Compile ``fn`` with numba, or return ``fallback`` (default ``fn``).

    Usable bare (``@jit``) or with a vectorised numpy replacement for the
    no-JIT path (``@jit(fallback=numpy_version)``).
    """
    if fn is None:
        return lambda f: jit(f, fallback=fallback)
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(fn)
    return fallback if fallback is not None else fn


def backend_name():
    return "numba" if NUMBA_ENABLED else "python"
