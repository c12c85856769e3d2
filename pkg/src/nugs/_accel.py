"""Optional numba acceleration.

The hot loops in :mod:`nugs.kernels` have a numba and a pure-numpy
implementation.  Numba is used when it imports cleanly and the environment
variable ``NUGS_DISABLE_NUMBA`` is not set to a truthy value.
"""

import os

try:  # pragma: no cover - depends on the environment
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = HAVE_NUMBA and not _flag("NUGS_DISABLE_NUMBA")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is present, otherwise an identity decorator."""
    kwargs.setdefault("cache", True)
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]):
        return args[0]
    return lambda f: f
