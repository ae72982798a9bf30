"""Compiled inner-loop kernels for the structured test problems.

The simultaneous gradient descent-ascent recursion is trivially cheap per
iteration, but the theorem horizons in the merely-concave regime reach ~1e9
iterations, so the inner loop must be allocation-free and compiled.  Each
kernel is written once as a plain Python function and wrapped with
``numba.njit`` on first use; the identical source also runs un-jitted as the
pure-numpy fallback backend, which keeps the two paths bit-identical (no
fastmath, same operation order).

Backend selection: the environment variable ``MINIMAX_LAB_BACKEND`` may be
set to ``numba`` or ``numpy``; the default is ``numba`` when available.
"""

from __future__ import annotations

import os
import math

import numpy as np

__all__ = ["backend", "available_backends", "get_kernel", "KERNEL_FAMILIES"]

_ENV_VAR = "MINIMAX_LAB_BACKEND"


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401

        return True
    except ImportError:
        return False


def backend() -> str:
    """Resolve the active backend: 'numba' or 'numpy'."""
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice in ("numba", "numpy"):
        if choice == "numba" and not _numba_available():
            raise RuntimeError("MINIMAX_LAB_BACKEND=numba but numba is not installed")
        return choice
    if choice:
        raise RuntimeError(f"unknown {_ENV_VAR}={choice!r}; use 'numba' or 'numpy'")
    return "numba" if _numba_available() else "numpy"


def available_backends() -> list[str]:
    out = ["numpy"]
    if _numba_available():
        out.insert(0, "numba")
    return out


# ---------------------------------------------------------------------------
# Kernel bodies (njit-compatible plain Python)
# ---------------------------------------------------------------------------
#
# Common return convention:
#   ts        (n_rec,) int64 iteration indices of the records
#   xs, ys    (n_rec, dim) recorded iterates
#   fs        (n_rec,) objective values at the records
#   gxn, gyn  (n_rec,) gradient block norms at the records
#   n_rec     number of valid records
#   abort_t   -1 if the run completed, else the iteration index at which a
#             non-finite iterate was first recorded


def _gda_quadratic_ball(A, B, mu, radius, x0, y0, ex, ey, T, stride):
    m = x0.shape[0]
    n = y0.shape[0]
    cap = T // stride + 2
    ts = np.empty(cap, np.int64)
    xs = np.empty((cap, m))
    ys = np.empty((cap, n))
    fs = np.empty(cap)
    gxn = np.empty(cap)
    gyn = np.empty(cap)

    x = x0.copy()
    y = y0.copy()
    gx = np.empty(m)
    gy = np.empty(n)
    k = 0
    abort_t = np.int64(-1)
    t = 0
    while True:
        # gradients: gx = A x + B y ; gy = B^T x - mu y
        for i in range(m):
            s = 0.0
            for j in range(m):
                s += A[i, j] * x[j]
            for j in range(n):
                s += B[i, j] * y[j]
            gx[i] = s
        for i in range(n):
            s = -mu * y[i]
            for j in range(m):
                s += B[j, i] * x[j]
            gy[i] = s
        if t % stride == 0 or t == T:
            # f = 0.5 x^T A x + x^T B y - 0.5 mu ||y||^2
            fval = 0.0
            for i in range(m):
                s = 0.0
                for j in range(m):
                    s += A[i, j] * x[j]
                fval += 0.5 * x[i] * s
                s = 0.0
                for j in range(n):
                    s += B[i, j] * y[j]
                fval += x[i] * s
            for i in range(n):
                fval -= 0.5 * mu * y[i] * y[i]
            sx = 0.0
            sy = 0.0
            ok = True
            for i in range(m):
                sx += gx[i] * gx[i]
                if not math.isfinite(x[i]):
                    ok = False
            for i in range(n):
                sy += gy[i] * gy[i]
            ts[k] = t
            for i in range(m):
                xs[k, i] = x[i]
            for i in range(n):
                ys[k, i] = y[i]
            fs[k] = fval
            gxn[k] = math.sqrt(sx)
            gyn[k] = math.sqrt(sy)
            k += 1
            if not ok or not math.isfinite(fval):
                abort_t = np.int64(t)
                break
        if t == T:
            break
        # simultaneous update, then project y onto the centered ball
        ynrm2 = 0.0
        for i in range(m):
            x[i] = x[i] - ex * gx[i]
        for i in range(n):
            y[i] = y[i] + ey * gy[i]
            ynrm2 += y[i] * y[i]
        if ynrm2 > radius * radius:
            sc = radius / math.sqrt(ynrm2)
            for i in range(n):
                y[i] = y[i] * sc
        t += 1
    return ts[:k], xs[:k], ys[:k], fs[:k], gxn[:k], gyn[:k], abort_t


def _gda_bilinear_box(scale, lo, hi, x0, y0, ex, ey, T, stride):
    d = x0.shape[0]
    cap = T // stride + 2
    ts = np.empty(cap, np.int64)
    xs = np.empty((cap, d))
    ys = np.empty((cap, d))
    fs = np.empty(cap)
    gxn = np.empty(cap)
    gyn = np.empty(cap)

    x = x0.copy()
    y = y0.copy()
    k = 0
    abort_t = np.int64(-1)
    t = 0
    while True:
        if t % stride == 0 or t == T:
            fval = 0.0
            sx = 0.0
            sy = 0.0
            ok = True
            for i in range(d):
                fval += scale * x[i] * y[i]
                sx += (scale * y[i]) * (scale * y[i])
                sy += (scale * x[i]) * (scale * x[i])
                if not math.isfinite(x[i]):
                    ok = False
            ts[k] = t
            for i in range(d):
                xs[k, i] = x[i]
                ys[k, i] = y[i]
            fs[k] = fval
            gxn[k] = math.sqrt(sx)
            gyn[k] = math.sqrt(sy)
            k += 1
            if not ok or not math.isfinite(fval):
                abort_t = np.int64(t)
                break
        if t == T:
            break
        for i in range(d):
            gxi = scale * y[i]
            gyi = scale * x[i]
            x[i] = x[i] - ex * gxi
            yi = y[i] + ey * gyi
            if yi > hi[i]:
                yi = hi[i]
            elif yi < lo[i]:
                yi = lo[i]
            y[i] = yi
        t += 1
    return ts[:k], xs[:k], ys[:k], fs[:k], gxn[:k], gyn[:k], abort_t


KERNEL_FAMILIES = {
    "quadratic_ball": _gda_quadratic_ball,
    "bilinear_box": _gda_bilinear_box,
}

_JIT_CACHE: dict[str, object] = {}


def get_kernel(family: str, which: str | None = None):
    """Return the GDA kernel for a problem family under the chosen backend."""
    impl = KERNEL_FAMILIES.get(family)
    if impl is None:
        raise KeyError(f"no kernel for family {family!r}")
    mode = which or backend()
    if mode == "numpy":
        return impl
    if family not in _JIT_CACHE:
        from numba import njit

        _JIT_CACHE[family] = njit(cache=True, fastmath=False)(impl)
    return _JIT_CACHE[family]
