"""Transient wave functions after a sudden switch of a quantum potential step.

Submodules
----------
model        units, scenarios, momentum maps and amplitudes
faddeeva     the Faddeeva function ``w(z)``
quadrature   adaptive Gauss-Kronrod along complex polylines
transient    the twelve half-line terms and their approximation
composer     full wave functions, initial and long-time states
observables  density, flux and local average frequency
oracle       brute-force contour quadrature reference
gridsim      Crank-Nicolson grid with open edges
cli          dataset generation from INI configs and presets
"""
from .composer import WaveSample, psi_approx, psi_exact, psi_initial, psi_longtime
from .model import HBAR, M_E, MomentumSet, Scenario, derive_momenta

__version__ = "0.1.0"

__all__ = [
    "HBAR", "M_E", "MomentumSet", "Scenario", "WaveSample", "derive_momenta",
    "psi_approx", "psi_exact", "psi_initial", "psi_longtime", "__version__",
]
