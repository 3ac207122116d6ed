"""Faddeeva function ``w(z) = exp(-z**2) * erfc(-1j*z)`` for complex ``z``.

The upper half plane is split into three regions:

* ``|z| < R_SERIES``: Maclaurin series ``sum (iz)**n / Gamma(n/2 + 1)``;
* ``|z| >= R_CF``: Laplace continued fraction, evaluated bottom-up;
* otherwise: Weideman's rational expansion in ``(L + iz)/(L - iz)``.

The lower half plane follows from ``w(z) = 2*exp(-z**2) - w(-z)``.
"""
from __future__ import annotations

import math

import numpy as np

R_SERIES = 0.5
R_CF = 7.0
_N_SERIES = 40
_N_CF = 90
_N_WEIDEMAN = 64
_EXP_LIMIT = 700.0
_SQRT_PI = math.sqrt(math.pi)


class FaddeevaOverflowError(OverflowError):
    pass


def _weideman_coefficients(n):
    m = 2 * n
    m2 = 2 * m
    k = np.arange(-m + 1, m)
    L = math.sqrt(n / math.sqrt(2.0))
    theta = k * math.pi / m
    t = L * np.tan(theta / 2)
    f = np.exp(-t**2) * (L**2 + t**2)
    f = np.concatenate(([0.0], f))
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / m2
    return L, a[1:n + 1][::-1]


_W_L, _W_A = _weideman_coefficients(_N_WEIDEMAN)
_SERIES_C = np.array([1.0 / math.gamma(n / 2.0 + 1.0) for n in range(_N_SERIES)])


def _w_series(z):
    iz = 1j * z
    acc = np.zeros_like(z)
    for c in _SERIES_C[::-1]:
        acc = acc * iz + c
    return acc


def _w_cf(z):
    acc = np.zeros_like(z)
    for n in range(_N_CF, 0, -1):
        acc = (n / 2.0) / (z - acc)
    return (1j / _SQRT_PI) / (z - acc)


def _w_weideman(z):
    d = _W_L - 1j * z
    Z = (_W_L + 1j * z) / d
    p = np.polyval(_W_A, Z)
    return 2.0 * p / d**2 + (1.0 / _SQRT_PI) / d


def _w_upper(z, regime=None):
    r = np.abs(z)
    out = np.empty_like(z)
    sel_s = r < R_SERIES
    sel_c = r >= R_CF
    sel_w = ~(sel_s | sel_c)
    if np.any(sel_s):
        out[sel_s] = _w_series(z[sel_s])
    if np.any(sel_c):
        out[sel_c] = _w_cf(z[sel_c])
    if np.any(sel_w):
        out[sel_w] = _w_weideman(z[sel_w])
    if regime is not None:
        regime[sel_s] = 0
        regime[sel_w] = 1
        regime[sel_c] = 2
    return out


def w(z, return_regime=False):
    """Faddeeva function, vectorised over ``z``.

    Raises ``FaddeevaOverflowError`` when ``2*exp(-z**2)`` (needed in the
    lower half plane) exceeds the double range.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    regime = np.zeros(z.shape, dtype=int)
    up = z.imag >= 0
    if np.any(up):
        reg = np.zeros(int(up.sum()), dtype=int)
        out[up] = _w_upper(z[up], reg)
        regime[up] = reg
    lo = ~up
    if np.any(lo):
        zl = z[lo]
        expo = -(zl * zl)
        if np.any(expo.real > _EXP_LIMIT):
            raise FaddeevaOverflowError("2*exp(-z**2) overflows for Im z < 0")
        reg = np.zeros(zl.shape, dtype=int)
        out[lo] = 2.0 * np.exp(expo) - _w_upper(-zl, reg)
        regime[lo] = reg
    if scalar:
        out = out[0]
        regime = regime[0]
    if return_regime:
        # regime codes: 0 series, 1 rational, 2 continued fraction
        labels = np.array(["series", "rational", "continued-fraction"])[regime]
        return out, labels
    return out


def w_asymptotic(z):
    """Leading large-``|z|`` form: ``i/(sqrt(pi) z)``, plus ``2 exp(-z**2)`` below the real axis."""
    z = np.asarray(z, dtype=complex)
    lead = 1j / (_SQRT_PI * z)
    out = np.where(z.imag < 0, lead + 2.0 * np.exp(-(z * z)), lead)
    return out[()] if out.ndim == 0 else out
