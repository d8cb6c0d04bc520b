"""Gamma-family special functions.

The regularised lower incomplete gamma is evaluated in log form so that
densities built on it never underflow for tiny arguments: series expansion
below ``x = a + 1``, Lentz continued fraction for the complement above.
"""

import math

import numpy as np

from .._accel import USE_NUMBA, njit
from ..errors import ParameterError

_EPS = 1e-17
_CF_EPS = 4e-16
_FPMIN = 1e-300
_MAX_ITER = 100_000


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise ParameterError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def log_gamma_sign(x):
    """``(log|Gamma(x)|, sign(Gamma(x)))`` for any real ``x``.

    At the poles (non-positive integers) the sign is 0 and the log is +inf,
    which makes ``1/Gamma`` evaluate to exactly zero.
    """
    if x <= 0.0 and x == math.floor(x):
        return math.inf, 0
    if x > 0.0:
        return math.lgamma(x), 1
    sign = -1 if int(math.floor(x)) % 2 else 1
    return math.lgamma(x), sign


# --- scalar kernel, shared by the numba loop -------------------------------


def _log_p_scalar(a, x, lga):
    if x <= 0.0:
        return -math.inf
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if term < total * _EPS:
                break
        return math.log(total) - x + a * math.log(x) - lga
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    q = math.exp(-x + a * math.log(x) - lga) * h
    return math.log1p(-q)


_log_p_scalar_jit = njit(cache=True)(_log_p_scalar)


@njit(cache=True)
def _log_p_numba(a, x):
    lga = math.lgamma(a)
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _log_p_scalar_jit(a, x[i], lga)
    return out


def _log_p_numpy(a, x):
    x = np.asarray(x, dtype=float)
    lga = math.lgamma(a)
    out = np.full(x.shape, -np.inf)

    ser = (x > 0) & (x < a + 1.0)
    if ser.any():
        xs = x[ser]
        term = np.full(xs.shape, 1.0 / a)
        total = term.copy()
        ap = a
        for _ in range(_MAX_ITER):
            ap += 1.0
            term = term * xs / ap
            total += term
            if np.all(term < total * _EPS):
                break
        out[ser] = np.log(total) - xs + a * np.log(xs) - lga

    cf = x >= a + 1.0
    if cf.any():
        xc = x[cf]
        b = xc + 1.0 - a
        c = np.full(xc.shape, 1.0 / _FPMIN)
        d = 1.0 / b
        h = d.copy()
        # freeze each element at its own stopping step, as the scalar loop does
        live = np.ones(xc.shape, dtype=bool)
        for i in range(1, _MAX_ITER):
            an = -i * (i - a)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
            c = b + an / c
            c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
            d = 1.0 / d
            delta = d * c
            h = np.where(live, h * delta, h)
            live &= ~(np.abs(delta - 1.0) < _CF_EPS)
            if not live.any():
                break
        q = np.exp(-xc + a * np.log(xc) - lga) * h
        out[cf] = np.log1p(-q)
    return out


def log_reg_lower_inc_gamma(a, x):
    """``log P(a, x)`` elementwise over ``x`` (scalar ``a``)."""
    a = float(a)
    if not a > 0.0:
        raise ParameterError(f"incomplete gamma requires a > 0, got {a!r}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ParameterError("incomplete gamma requires x >= 0")
    flat = np.ascontiguousarray(xa.ravel())
    res = (_log_p_numba if USE_NUMBA else _log_p_numpy)(a, flat).reshape(xa.shape)
    return res if xa.ndim else float(res)


def reg_lower_inc_gamma(a, x):
    """Regularised lower incomplete gamma ``P(a, x)``."""
    res = np.exp(log_reg_lower_inc_gamma(a, x))
    return res if res.ndim else float(res)


def lower_inc_gamma(a, x):
    """Unregularised lower incomplete gamma ``gamma(a, x)``."""
    res = np.exp(log_reg_lower_inc_gamma(a, x) + math.lgamma(float(a)))
    return res if res.ndim else float(res)
