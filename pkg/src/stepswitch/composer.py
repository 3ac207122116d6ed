"""Full wave functions assembled from the four truncated plane waves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Scenario, derive_momenta, stationary_state
from .transient import DEFAULT_TOL, eval_term, eval_term_approx

METHODS = ("exact", "approx", "oracle", "grid", "limit")


@dataclass(frozen=True)
class WaveSample:
    x: float
    t: float
    value: complex
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not np.isfinite(self.value):
            raise ValueError(f"non-finite wave function at x={self.x}, t={self.t}")

    @property
    def density(self) -> float:
        return abs(self.value) ** 2


def coefficients(s: Scenario) -> dict:
    """Weights of ``psi_j`` in the initial stationary state."""
    ms = derive_momenta(s)
    if s.incidence == "left":
        return {1: 1.0 + 0j, 2: ms.R0_l, 3: ms.T0_l}
    return {4: 1.0 + 0j, 3: ms.R0_r, 2: ms.T0_r}


def psi_exact(s: Scenario, x: float, t: float, tol=DEFAULT_TOL) -> WaveSample:
    """Semianalytic wave function at ``(x, t)``; ``t = 0`` returns the initial state."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return WaveSample(x, t, complex(psi_initial(s, x)), "exact")
    val = 0j
    for j, cf in coefficients(s).items():
        if cf == 0:
            continue
        val += cf * sum(eval_term(j, a, s, x, t, tol) for a in "IRT")
    return WaveSample(x, t, complex(val), "exact")


def psi_exact_j(s: Scenario, j: int, x: float, t: float, tol=DEFAULT_TOL) -> complex:
    """A single truncated plane wave ``psi_j(x, t)``."""
    return complex(sum(eval_term(j, a, s, x, t, tol) for a in "IRT"))


_DOMINANT = {1: ((3, "I"), (1, "T")), -1: ((1, "I"), (2, "I"), (1, "R"))}


def psi_approx(s: Scenario, x: float, t: float, dominant: bool = False) -> WaveSample:
    """Pole term plus leading remainder moment for every term.

    With ``dominant=True`` only the terms that carry most of the weight for
    left incidence are kept: the old and new transmitted waves ``3I, 1T``
    for ``x > 0`` and ``1I, 2I, 1R`` for ``x < 0``.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    cf = coefficients(s)
    if dominant:
        if s.incidence != "left":
            raise ValueError("the dominant-term mode is defined for left incidence")
        keep = _DOMINANT[1 if x >= 0 else -1]
    else:
        keep = [(j, a) for j in cf for a in "IRT"]
    val = sum(cf[j] * eval_term_approx(j, a, s, x, t) for j, a in keep if j in cf)
    return WaveSample(x, t, complex(val), "approx")


def psi_initial(s: Scenario, x) -> complex:
    """Stationary state of the old step (the state at ``t = 0``)."""
    return stationary_state(s, "old", x)


def longtime_energy(s: Scenario) -> float:
    """Energy of the state the system relaxes to (left level = 0)."""
    ms = derive_momenta(s)
    if s.incidence == "left":
        return s.E_q
    return float((ms.p0 * ms.p0).real / (2 * s.m) - s.V0_new)


def psi_longtime(s: Scenario, x):
    """``t -> infinity`` limit with the phase ``exp(-i E t/hbar)`` removed.

    The pole terms of the incident wave survive: for left incidence the new
    step's stationary state at the old left momentum ``q0``; for right
    incidence the one at the old right momentum ``p0``, whose left momentum
    ``q(p0)`` under the new depth may be evanescent.
    """
    return stationary_state(s, "new", x)


def psi_grid_exact(s: Scenario, xs, t, tol=DEFAULT_TOL) -> np.ndarray:
    """``psi_exact`` on an array of positions."""
    return np.array([psi_exact(s, float(x), t, tol).value for x in np.ravel(xs)])
