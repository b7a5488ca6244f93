"""Hot loops: path bitmask enumeration and batched tridiagonal powers.

Every kernel has a numba implementation and a pure-numpy fallback with
identical results.  The backend is chosen once at import time:

    DYCKMOMENTS_NUMBA=0   force the numpy fallback
    DYCKMOMENTS_NUMBA=1   require numba (ImportError if missing)
    unset                 numba when importable, numpy otherwise

:func:`use_backend` switches at runtime, mostly for tests and benchmarks.

Paths of length 2n are encoded as integers: step j (0-based) is bit
``2n-1-j`` and a set bit is a down step.  Ascending integer order is then
lexicographic order on step sequences with up < down.
"""

from __future__ import annotations

import os
from math import comb

import numpy as np

try:  # pragma: no cover - depends on environment
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

MODE_GENERALIZED = 0
MODE_DYCK = 1
MODE_DYCK_RETURNS = 2

_CHUNK = 1 << 21


def _initial_backend() -> str:
    flag = os.environ.get("DYCKMOMENTS_NUMBA", "").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return "numpy"
    if flag in ("1", "true", "yes", "on"):
        if not HAVE_NUMBA:
            raise ImportError("DYCKMOMENTS_NUMBA=1 but numba is not importable")
        return "numba"
    return "numba" if HAVE_NUMBA else "numpy"


_backend = _initial_backend()


def backend() -> str:
    return _backend


def use_backend(name: str) -> str:
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba is not installed")
    prev, _backend = _backend, name
    return prev


# ---------------------------------------------------------------------------
# path enumeration
# ---------------------------------------------------------------------------


def _scan_masks_py(n, mode, k, out):
    # reference loop; compiled by numba below, never called uncompiled
    length = 2 * n
    count = 0
    if n == 0:
        if mode != MODE_DYCK_RETURNS or k == 0:
            if out.shape[0] > 0:
                out[0] = 0
            count = 1
        return count
    x = (np.int64(1) << n) - 1
    last = x << n
    while True:
        ok = True
        if mode != MODE_GENERALIZED:
            h = 0
            returns = 0
            for j in range(length):
                if (x >> (length - 1 - j)) & 1:
                    h -= 1
                    if h < 0:
                        ok = False
                        break
                    if h == 0:
                        returns += 1
                else:
                    h += 1
            if ok and mode == MODE_DYCK_RETURNS and returns != k:
                ok = False
        if ok:
            if out.shape[0] > 0:
                out[count] = x
            count += 1
        if x == last:
            break
        # Gosper's hack: next integer with the same popcount
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r
    return count


if HAVE_NUMBA:
    _scan_masks_nb = numba.njit(cache=True, nogil=True)(_scan_masks_py)
else:  # pragma: no cover
    _scan_masks_nb = None


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


def _masks_numpy(n: int, mode: int, k: int) -> np.ndarray:
    if n == 0:
        ok = mode != MODE_DYCK_RETURNS or k == 0
        return np.zeros(1 if ok else 0, dtype=np.int64)
    length = 2 * n
    lo, hi = (1 << n) - 1, ((1 << n) - 1) << n
    pieces = []
    for start in range(lo, hi + 1, _CHUNK):
        x = np.arange(start, min(start + _CHUNK, hi + 1), dtype=np.int64)
        x = x[_popcount(x.astype(np.uint64)).astype(np.int64) == n]
        if mode != MODE_GENERALIZED and x.size:
            h = np.zeros(x.size, dtype=np.int64)
            low = np.zeros(x.size, dtype=np.int64)
            returns = np.zeros(x.size, dtype=np.int64)
            for j in range(length):
                down = (x >> (length - 1 - j)) & 1
                h += 1 - 2 * down
                np.minimum(low, h, out=low)
                returns += (down == 1) & (h == 0)
            keep = low >= 0
            if mode == MODE_DYCK_RETURNS:
                keep &= returns == k
            x = x[keep]
        pieces.append(x)
    return np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64)


def path_masks(n: int, mode: int = MODE_GENERALIZED, k: int = 0) -> np.ndarray:
    """All admissible step masks of length 2n, ascending."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > 31:
        raise ValueError("paths longer than 62 steps do not fit a 64-bit mask")
    if _backend == "numba":
        total = _scan_masks_nb(n, mode, k, np.zeros(0, dtype=np.int64))
        out = np.empty(total, dtype=np.int64)
        _scan_masks_nb(n, mode, k, out)
        return out
    return _masks_numpy(n, mode, k)


def count_masks(n: int, mode: int = MODE_GENERALIZED, k: int = 0) -> int:
    if _backend == "numba":
        return int(_scan_masks_nb(n, mode, k, np.zeros(0, dtype=np.int64)))
    if mode == MODE_GENERALIZED:
        return comb(2 * n, n) if n >= 0 else 0
    return int(_masks_numpy(n, mode, k).size)


# ---------------------------------------------------------------------------
# batched powers of H_n (zero diagonal, ones above, a_i below)
# ---------------------------------------------------------------------------


def _entry11_py(offdiag, k, out):
    nsamp, nm1 = offdiag.shape
    n = nm1 + 1
    for s in range(nsamp):
        v = np.zeros(n)
        w = np.zeros(n)
        v[0] = 1.0
        for _ in range(k):
            for i in range(n):
                acc = 0.0
                if i + 1 < n:
                    acc += v[i + 1]
                if i >= 1:
                    acc += offdiag[s, i - 1] * v[i - 1]
                w[i] = acc
            v, w = w, v
        out[s] = v[0]


def _trace_py(offdiag, k, out):
    nsamp, nm1 = offdiag.shape
    n = nm1 + 1
    for s in range(nsamp):
        x = np.eye(n)
        y = np.zeros((n, n))
        for _ in range(k):
            for i in range(n):
                for j in range(n):
                    acc = 0.0
                    if i + 1 < n:
                        acc += x[i + 1, j]
                    if i >= 1:
                        acc += offdiag[s, i - 1] * x[i - 1, j]
                    y[i, j] = acc
            x, y = y, x
        t = 0.0
        for i in range(n):
            t += x[i, i]
        out[s] = t


if HAVE_NUMBA:
    _entry11_nb = numba.njit(cache=True, nogil=True)(_entry11_py)
    _trace_nb = numba.njit(cache=True, nogil=True)(_trace_py)
else:  # pragma: no cover
    _entry11_nb = _trace_nb = None


def _apply_h_batched(x: np.ndarray, offdiag: np.ndarray) -> np.ndarray:
    # x: (S, n) or (S, n, n); row i of H x is x[i+1] + a[i-1] * x[i-1]
    y = np.zeros_like(x)
    y[:, :-1] += x[:, 1:]
    if x.ndim == 2:
        y[:, 1:] += offdiag * x[:, :-1]
    else:
        y[:, 1:] += offdiag[:, :, None] * x[:, :-1]
    return y


def entry11_powers(offdiag: np.ndarray, k: int) -> np.ndarray:
    """``H^k(1,1)`` for each row of ``offdiag`` (shape (samples, n-1))."""
    offdiag = np.ascontiguousarray(offdiag, dtype=np.float64)
    nsamp, nm1 = offdiag.shape
    if _backend == "numba":
        out = np.empty(nsamp)
        _entry11_nb(offdiag, k, out)
        return out
    v = np.zeros((nsamp, nm1 + 1))
    v[:, 0] = 1.0
    for _ in range(k):
        v = _apply_h_batched(v, offdiag)
    return v[:, 0].copy()


def trace_powers(offdiag: np.ndarray, k: int) -> np.ndarray:
    """``Tr(H^k)`` for each row of ``offdiag``."""
    offdiag = np.ascontiguousarray(offdiag, dtype=np.float64)
    nsamp, nm1 = offdiag.shape
    if _backend == "numba":
        out = np.empty(nsamp)
        _trace_nb(offdiag, k, out)
        return out
    x = np.broadcast_to(np.eye(nm1 + 1), (nsamp, nm1 + 1, nm1 + 1)).copy()
    for _ in range(k):
        x = _apply_h_batched(x, offdiag)
    return np.trace(x, axis1=1, axis2=2).copy()
