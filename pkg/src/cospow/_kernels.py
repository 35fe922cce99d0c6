"""Double-precision screening kernels for bulk range scans.

The residual n - pi*Q(n) is formed with a three-limb pi and error-free
products, so it keeps ~1e-8 relative accuracy even when it is ~1/n for
n up to ``MAX_SCREEN_INDEX``. These values only decide which indices are
worth an exact MPFR evaluation; they are never reported.

Set ``COSPOW_NUMBA=0`` to force the pure-numpy path.
"""

from __future__ import annotations

import math
import os

import numpy as np

PI_HI = 3.141592653589793
PI_MID = 1.2246467991473532e-16
PI_LO = -2.9947698097183397e-33
_SPLIT = 134217729.0  # 2**27 + 1

MAX_SCREEN_INDEX = 2**40
# relative error bound of screened values, with a wide safety factor
SCREEN_RTOL = 1e-6


def _numba_requested() -> bool:
    return os.environ.get("COSPOW_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    if not _numba_requested():
        raise ImportError("disabled by COSPOW_NUMBA")
    from numba import njit
except ImportError:
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


# ---- pure numpy path -------------------------------------------------------

def _two_prod_np(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def residuals_numpy(ns):
    n = np.asarray(ns, dtype=np.float64)
    q = np.rint(n / PI_HI)
    p1, e1 = _two_prod_np(q, PI_HI)
    p2, e2 = _two_prod_np(q, PI_MID)
    r = (((n - p1) - e1) - p2) - e2 - q * PI_LO
    return q.astype(np.int64), r


def screen_values_numpy(ns, gamma):
    n = np.asarray(ns, dtype=np.float64)
    _, r = residuals_numpy(n)
    s = np.sin(0.5 * r)
    log_c = np.log1p(-2.0 * s * s)
    with np.errstate(divide="ignore", under="ignore"):
        return np.exp(n**gamma * log_c)


# ---- numba path ------------------------------------------------------------

def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _residual(n):
    q = float(round(n / PI_HI))
    p1, e1 = _two_prod(q, PI_HI)
    p2, e2 = _two_prod(q, PI_MID)
    return q, (((n - p1) - e1) - p2) - e2 - q * PI_LO


def _residuals_loop(ns, qs, rs):
    for i in range(ns.shape[0]):
        q, r = _residual(float(ns[i]))
        qs[i] = np.int64(q)
        rs[i] = r


def _screen_loop(ns, gamma, out):
    for i in range(ns.shape[0]):
        n = float(ns[i])
        _, r = _residual(n)
        s = math.sin(0.5 * r)
        out[i] = math.exp(n**gamma * math.log1p(-2.0 * s * s))


if njit is not None:
    _two_prod = njit(_two_prod)
    _residual = njit(_residual)
    _residuals_loop = njit(_residuals_loop)
    _screen_loop = njit(_screen_loop)


def residuals_numba(ns):
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    qs = np.empty(ns.shape[0], dtype=np.int64)
    rs = np.empty(ns.shape[0], dtype=np.float64)
    _residuals_loop(ns, qs, rs)
    return qs, rs


def screen_values_numba(ns, gamma):
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    out = np.empty(ns.shape[0], dtype=np.float64)
    _screen_loop(ns, float(gamma), out)
    return out


if BACKEND == "numba":
    residuals = residuals_numba
    screen_values = screen_values_numba
else:
    residuals = residuals_numpy
    screen_values = screen_values_numpy
