"""Density, probability flux and local average frequency.

A *sampler* is any callable ``psi(x, t) -> complex``; the exact solver, the
approximation, the oracle and interpolated grid data all fit.  Derivatives
use centered differences with one Richardson level, so they work the same
way on every sampler.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import HBAR, Scenario, derive_momenta, p_of_q, q_of_p

H_X = 1e-3  # nm
H_T = 1e-3  # fs
PSI_FLOOR = 1e-12

Sampler = Callable[[float, float], complex]


@dataclass(frozen=True)
class ObservableSample:
    x: float
    t: float
    density: float
    flux: float
    hbar_omega: float  # eV; nan where |psi| is below PSI_FLOOR
    defined: bool


def _richardson(d_h, d_h2):
    return (4.0 * d_h2 - d_h) / 3.0


def d_dx(sampler: Sampler, x, t, h=H_X):
    def c(hh):
        return (sampler(x + hh, t) - sampler(x - hh, t)) / (2 * hh)
    return _richardson(c(h), c(h / 2))


def d_dt(sampler: Sampler, x, t, h=H_T):
    if t >= 2 * h:
        def c(hh):
            return (sampler(x, t + hh) - sampler(x, t - hh)) / (2 * hh)
        return _richardson(c(h), c(h / 2))
    # one-sided second order close to the switch (psi is undefined for t < 0)
    f0, f1, f2 = sampler(x, t), sampler(x, t + h), sampler(x, t + 2 * h)
    return (-3 * f0 + 4 * f1 - f2) / (2 * h)


def density(sampler: Sampler, x, t) -> float:
    return float(abs(sampler(x, t)) ** 2)


def flux(sampler: Sampler, x, t, m, h=H_X) -> float:
    """``(hbar/m) Im(psi* dpsi/dx)`` in the momentum convention of this package.

    With ``psi ~ exp(i k x / hbar)`` this gives ``(k/m)|psi|^2`` (nm/fs).
    """
    psi = sampler(x, t)
    return float((np.conj(psi) * d_dx(sampler, x, t, h)).imag * HBAR / m)


def omega_av(sampler: Sampler, x, t, h=H_T):
    """Local average frequency as ``hbar*omega`` in eV.

    Returns ``nan`` where ``|psi| <= PSI_FLOOR``.
    """
    psi = sampler(x, t)
    if abs(psi) <= PSI_FLOOR:
        return float("nan")
    return float(-HBAR * (d_dt(sampler, x, t, h) / psi).imag)


def observe(sampler: Sampler, x, t, m) -> ObservableSample:
    psi = sampler(x, t)
    hw = omega_av(sampler, x, t)
    return ObservableSample(x, t, float(abs(psi) ** 2), flux(sampler, x, t, m), hw,
                            bool(np.isfinite(hw)))


def stationary_flux(s: Scenario, which="old") -> float:
    """Analytic flux of the stationary state used by ``model.stationary_state``."""
    ms = derive_momenta(s)
    V = s.V0_old if which == "old" else s.V0_new
    m = s.m
    if s.incidence == "left":
        q = ms.q0
        p = complex(p_of_q(q, V, m, side=1))
        T = 2 * q / (q + p)
        return float(p.real * abs(T) ** 2 / m) if abs(p.imag) < 1e-14 * abs(p) else 0.0
    p = ms.p0
    q = complex(q_of_p(p, V, m, side=1))
    T = 2 * p / (q + p)
    if abs(q.imag) > 1e-14 * max(abs(q), 1e-300):
        return 0.0
    return float(-q.real * abs(T) ** 2 / m)


def continuity_residual(sampler: Sampler, x, t, m, h=H_X, ht=H_T) -> float:
    """``d|psi|^2/dt + dJ/dx`` by nested centered differences."""
    def rho(tt):
        return abs(sampler(x, tt)) ** 2

    drho = (rho(t + ht) - rho(t - ht)) / (2 * ht)
    dJ = (flux(sampler, x + h, t, m, h) - flux(sampler, x - h, t, m, h)) / (2 * h)
    return float(drho + dJ)
