"""Hot numeric loops, compiled with numba when available.

Every kernel has two implementations with identical signatures:

* ``_nb_*``  plain loops compiled with ``numba.njit`` (compensated summation
  done term by term);
* ``_np_*``  vectorised numpy with ``math.fsum`` doing the exact reduction.

The public names (``compensated_sum``, ``phase_sums``, ...) are bound to the
numba versions unless numba is missing or ``SPN_DISABLE_NUMBA`` is set to a
truthy value in the environment before import.  Both paths are always
importable so tests and ``benchmarks/bench_kernels.py`` can compare them.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrapper(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrapper


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _flag("SPN_DISABLE_NUMBA")
BACKEND = "numba" if USE_NUMBA else "numpy"

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- numba path


@njit(cache=True)
def _nb_compensated_sum(w):
    s = 0.0
    c = 0.0
    for i in range(w.shape[0]):
        x = w[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


@njit(cache=True)
def _nb_alternating_sum(w):
    # sum_m (-1)^m w[m]
    s = 0.0
    c = 0.0
    for i in range(w.shape[0]):
        x = w[i] if i % 2 == 0 else -w[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


@njit(cache=True)
def _nb_phase_sums(w, alphas):
    n_alpha = alphas.shape[0]
    re_out = np.empty(n_alpha)
    im_out = np.empty(n_alpha)
    for k in range(n_alpha):
        a = alphas[k]
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        for m in range(1, w.shape[0]):
            wm = w[m]
            if wm == 0.0:
                continue
            ma = m * a
            ph = TWO_PI * (ma - math.floor(ma))
            xr = wm * math.cos(ph)
            xi = wm * math.sin(ph)
            t = sr + xr
            if abs(sr) >= abs(xr):
                cr += (sr - t) + xr
            else:
                cr += (xr - t) + sr
            sr = t
            t = si + xi
            if abs(si) >= abs(xi):
                ci += (si - t) + xi
            else:
                ci += (xi - t) + si
            si = t
        re_out[k] = sr + cr
        im_out[k] = si + ci
    return re_out, im_out


@njit(cache=True)
def _nb_series_at_many(c, us, sign):
    # sum_{m>=1} c[m] * sign^m * exp(-m u) for each u
    n_u = us.shape[0]
    out = np.empty(n_u)
    for k in range(n_u):
        u = us[k]
        s = 0.0
        comp = 0.0
        for m in range(1, c.shape[0]):
            cm = c[m]
            if cm == 0.0:
                continue
            x = cm * math.exp(-m * u)
            if sign < 0 and m % 2 == 1:
                x = -x
            t = s + x
            if abs(s) >= abs(x):
                comp += (s - t) + x
            else:
                comp += (x - t) + s
            s = t
        out[k] = s + comp
    return out


@njit(cache=True)
def _nb_weight_coeffs(fvals, n_max):
    b0 = np.zeros(n_max + 1, dtype=np.int64)
    b1 = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        fd = fvals[d]
        if fd == 0:
            continue
        odd_w = d * fd
        even_w = d * fd * fd
        k = 1
        m = d
        while m <= n_max:
            if k % 2 == 1:
                b1[m] += odd_w
            else:
                b0[m] += even_w
            k += 1
            m += d
    return b0, b1


# ---------------------------------------------------------------- numpy path


def _np_compensated_sum(w):
    return math.fsum(np.asarray(w, dtype=np.float64).tolist())


def _np_alternating_sum(w):
    w = np.asarray(w, dtype=np.float64).copy()
    w[1::2] *= -1.0
    return math.fsum(w.tolist())


def _np_phase_sums(w, alphas):
    w = np.asarray(w, dtype=np.float64)
    alphas = np.asarray(alphas, dtype=np.float64)
    m = np.nonzero(w)[0]
    m = m[m >= 1]
    wm = w[m]
    mf = m.astype(np.float64)
    re_out = np.empty(alphas.shape[0])
    im_out = np.empty(alphas.shape[0])
    for k, a in enumerate(alphas):
        ma = mf * a
        ph = TWO_PI * (ma - np.floor(ma))
        re_out[k] = math.fsum((wm * np.cos(ph)).tolist())
        im_out[k] = math.fsum((wm * np.sin(ph)).tolist())
    return re_out, im_out


def _np_series_at_many(c, us, sign):
    c = np.asarray(c, dtype=np.float64)
    m = np.nonzero(c)[0]
    m = m[m >= 1]
    cm = c[m]
    if sign < 0:
        cm = np.where(m % 2 == 1, -cm, cm)
    mf = m.astype(np.float64)
    out = np.empty(len(us))
    for k, u in enumerate(us):
        out[k] = math.fsum((cm * np.exp(-mf * u)).tolist())
    return out


def _np_weight_coeffs(fvals, n_max):
    fvals = np.asarray(fvals, dtype=np.int64)
    b0 = np.zeros(n_max + 1, dtype=np.int64)
    b1 = np.zeros(n_max + 1, dtype=np.int64)
    for d in np.nonzero(fvals[: n_max + 1])[0]:
        d = int(d)
        if d == 0:
            continue
        fd = int(fvals[d])
        b1[d::2 * d] += d * fd
        b0[2 * d::2 * d] += d * fd * fd
    return b0, b1


# ---------------------------------------------------------------- dispatch

if USE_NUMBA:
    compensated_sum = _nb_compensated_sum
    alternating_sum = _nb_alternating_sum
    phase_sums = _nb_phase_sums
    series_at_many = _nb_series_at_many
    weight_coeffs_kernel = _nb_weight_coeffs
else:
    compensated_sum = _np_compensated_sum
    alternating_sum = _np_alternating_sum
    phase_sums = _np_phase_sums
    series_at_many = _np_series_at_many
    weight_coeffs_kernel = _np_weight_coeffs

IMPLEMENTATIONS = {
    "numpy": {
        "compensated_sum": _np_compensated_sum,
        "alternating_sum": _np_alternating_sum,
        "phase_sums": _np_phase_sums,
        "series_at_many": _np_series_at_many,
        "weight_coeffs": _np_weight_coeffs,
    },
}
if HAVE_NUMBA:
    IMPLEMENTATIONS["numba"] = {
        "compensated_sum": _nb_compensated_sum,
        "alternating_sum": _nb_alternating_sum,
        "phase_sums": _nb_phase_sums,
        "series_at_many": _nb_series_at_many,
        "weight_coeffs": _nb_weight_coeffs,
    }
