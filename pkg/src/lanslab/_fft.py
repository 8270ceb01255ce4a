"""Thin wrappers around scipy.fft with a process-wide worker count.

All transforms act on the trailing spatial axes so leading axes batch
components and dyadic blocks in a single call.  The worker count is a
performance knob only; results are bitwise independent of it.
"""

import os

import scipy.fft as _sfft

_workers = 1


def set_workers(k):
    """Set the FFT worker count (1 = serial)."""
    global _workers
    _workers = max(1, int(k))


def get_workers():
    return _workers


def workers_from_env(default=1):
    """Read LANS_LAB_THREADS, falling back to `default`."""
    raw = os.environ.get("LANS_LAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def fftn(a, nax):
    return _sfft.fftn(a, axes=tuple(range(-nax, 0)), workers=_workers)


def ifftn(a, nax):
    return _sfft.ifftn(a, axes=tuple(range(-nax, 0)), workers=_workers)


def rfftn(a, nax):
    return _sfft.rfftn(a, axes=tuple(range(-nax, 0)), workers=_workers)


def irfftn(a, shape):
    return _sfft.irfftn(a, s=shape, axes=tuple(range(-len(shape), 0)), workers=_workers)
