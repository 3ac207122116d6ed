"""Step-potential scattering: units, scenarios, momentum maps and amplitudes.

Conventions
-----------
Energies in eV, lengths in nm, times in fs.  Momenta are ``hbar * k`` in
eV*fs/nm, so plane waves read ``exp(1j * k * x / HBAR)`` and kinetic energy
is ``k**2 / (2 * m)`` with ``m`` in eV*fs**2/nm**2.

The potential is ``V(x) = -V0 * Theta(x)`` (zero on the left).  For a step
depth ``V`` the two momenta on either side of the step are related by
``p**2 = q**2 + 2*m*V``.  ``p_of_q`` has its branch cut on the segment
joining ``q = +-i*sqrt(2mV)`` and ``q_of_p`` on the segment joining
``p = +-sqrt(2mV)``; both maps are odd and keep ``sign(p) == sign(q)`` on
the real axis outside the cut.

Points lying exactly on a cut are resolved with an explicit ``side`` hint:
``+1`` selects the limit from the ``+i0`` side of a real-axis cut (or the
``+0`` side, i.e. from the right, of an imaginary-axis cut), ``-1`` the
opposite lip.  ``side=0`` leaves the value to the floating-point sign of the
imaginary part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

HBAR = 0.6582119569  # eV fs
HBAR2_OVER_ME = 0.076199682  # eV nm^2
M_E = HBAR**2 / HBAR2_OVER_ME  # electron mass in eV fs^2 / nm^2

_ON_CUT_RTOL = 1e-13


@dataclass(frozen=True)
class Units:
    hbar: float = HBAR
    hbar2_over_me: float = HBAR2_OVER_ME

    @property
    def electron_mass(self) -> float:
        return self.hbar**2 / self.hbar2_over_me


class BranchPointError(ValueError):
    pass


def _sqrt_real_cut(z, s, side):
    """``sqrt(z - s) * sqrt(z + s)`` with its cut on ``[-s, s]`` (``s > 0``)."""
    z = np.asarray(z, dtype=complex)
    # a signed zero would put the two factors on different sides of their cuts
    z = z.real + 1j * (z.imag + 0.0)
    val = np.sqrt(z - s) * np.sqrt(z + s)
    if side:
        on = (np.abs(z.imag) <= _ON_CUT_RTOL * s) & (np.abs(z.real) < s)
        if np.any(on):
            lim = side * 1j * np.sqrt(np.maximum(s * s - z.real**2, 0.0))
            val = np.where(on, lim, val)
    return val


def _sqrt_imag_cut(z, s, side):
    """``sqrt(z**2 + s**2)`` with its cut on ``[-i s, i s]``, odd, ~z at infinity."""
    z = np.asarray(z, dtype=complex)
    w = -1j * z
    # rotating by -i maps the right lip of the imaginary cut onto the lower
    # lip of the real cut
    return 1j * _sqrt_real_cut(w, s, -side)


def p_of_q(q, V, m, side=0, return_flag=False):
    """Momentum on the right of the step given the momentum ``q`` on the left.

    Parameters
    ----------
    q : complex or array
    V : float
        Step depth in eV (``V > 0`` lowers the right level).
    m : float
        Mass in eV fs^2/nm^2.
    side : {-1, 0, +1}
        Lip selector for arguments exactly on the cut.
    return_flag : bool
        Also return a boolean (array) marking branch points, where ``p = 0``.
    """
    c = 2.0 * m * V
    q = np.asarray(q, dtype=complex)
    if c > 0:
        p = _sqrt_imag_cut(q, math.sqrt(c), side)
    elif c < 0:
        p = _sqrt_real_cut(q, math.sqrt(-c), side)
    else:
        p = q.copy()
    flag = np.abs(q * q + c) <= _ON_CUT_RTOL * max(abs(c), 1e-300)
    if np.any(flag):
        p = np.where(flag, 0.0, p)
    p = p[()] if p.ndim == 0 else p
    if return_flag:
        return p, (flag[()] if flag.ndim == 0 else flag)
    return p


def q_of_p(p, V, m, side=0, return_flag=False):
    """Momentum on the left of the step given the momentum ``p`` on the right."""
    c = 2.0 * m * V
    p = np.asarray(p, dtype=complex)
    if c > 0:
        q = _sqrt_real_cut(p, math.sqrt(c), side)
    elif c < 0:
        q = _sqrt_imag_cut(p, math.sqrt(-c), side)
    else:
        q = p.copy()
    flag = np.abs(p * p - c) <= _ON_CUT_RTOL * max(abs(c), 1e-300)
    if np.any(flag):
        q = np.where(flag, 0.0, q)
    q = q[()] if q.ndim == 0 else q
    if return_flag:
        return q, (flag[()] if flag.ndim == 0 else flag)
    return q


def amplitudes(k, V, m, incidence="left", side=0):
    """Reflection and transmission amplitudes ``(R, T)`` of the step ``-V*Theta(x)``.

    For ``incidence='left'`` the argument is the left momentum ``q``;
    for ``'right'`` it is the right momentum ``p``.  Complex and negative
    arguments give the analytic continuation.
    """
    if incidence == "left":
        q = np.asarray(k, dtype=complex)
        p = p_of_q(q, V, m, side)
        den = q + p
        assert np.all(den != 0), "q + p vanished"
        return (q - p) / den, 2.0 * q / den
    if incidence == "right":
        p = np.asarray(k, dtype=complex)
        q = q_of_p(p, V, m, side)
        den = q + p
        assert np.all(den != 0), "q + p vanished"
        return (p - q) / den, 2.0 * p / den
    raise ValueError(f"incidence must be 'left' or 'right', got {incidence!r}")


@dataclass(frozen=True)
class Scenario:
    """Physical inputs of a switch ``V0_old -> V0_new`` at ``t = 0``.

    ``mass`` is in units of the electron mass; energies in eV.  ``E_q`` is
    the kinetic energy on the left level.  Negative ``E_q`` (evanescent on
    the left) is only meaningful for right incidence.
    """

    mass: float
    E_q: float
    V0_old: float
    V0_new: float
    incidence: str = "left"
    t_switch: float = field(default=0.0, init=False)

    def __post_init__(self):
        for name in ("mass", "E_q", "V0_old", "V0_new"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite, got {val!r}")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.incidence not in ("left", "right"):
            raise ValueError(f"incidence must be 'left' or 'right', got {self.incidence!r}")
        if self.E_q == 0:
            raise ValueError("E_q = 0 is a threshold (zero incident momentum)")
        if self.E_q < 0 and self.incidence == "left":
            raise ValueError("left incidence needs E_q > 0")
        if self.incidence == "right" and self.E_q + self.V0_old <= 0:
            raise ValueError("right incidence needs E_q + V0_old > 0")

    @property
    def m(self) -> float:
        """Mass in eV fs^2 / nm^2."""
        return self.mass * M_E

    @property
    def evanescent(self) -> bool:
        return self.E_q < 0

    def momenta(self) -> "MomentumSet":
        return derive_momenta(self)

    def potential(self, x, which="new"):
        V0 = self.V0_new if which == "new" else self.V0_old
        return np.where(np.asarray(x) >= 0, -V0, 0.0)


@dataclass(frozen=True)
class MomentumSet:
    q0: complex
    p0: complex
    p0_new: complex
    q0_new: complex
    R0_l: complex
    T0_l: complex
    R0_r: complex
    T0_r: complex
    Rl: complex
    Tl: complex
    Rr: complex
    Tr: complex

    def as_dict(self) -> dict:
        return {k: [float(np.real(v)), float(np.imag(v))] for k, v in self.__dict__.items()}


def derive_momenta(s: Scenario) -> MomentumSet:
    """All incident/transmitted momenta and amplitudes of a scenario.

    ``q0`` is real positive, or ``1j*|q0|`` when ``E_q < 0``.  ``p0`` is the
    old right momentum and ``p0_new = p(q0)`` under the new depth.  For
    right incidence the right momentum survives the switch, so the new left
    momentum is ``q0_new = q(p0)`` under the new depth (``Rr``, ``Tr`` are
    evaluated at ``p0``).
    """
    m = s.m
    if s.E_q > 0:
        q0 = complex(math.sqrt(2 * m * s.E_q))
    else:
        q0 = 1j * math.sqrt(-2 * m * s.E_q)
    p0 = complex(np.sqrt(complex(q0 * q0 + 2 * m * s.V0_old)))
    if p0.real < 0:
        p0 = -p0
    p0_new = complex(p_of_q(q0, s.V0_new, m, side=1))
    q0_new = complex(q_of_p(p0, s.V0_new, m, side=1))
    R0_l, T0_l = (complex(v) for v in amplitudes(q0, s.V0_old, m, "left", side=1))
    R0_r, T0_r = (complex(v) for v in amplitudes(p0, s.V0_old, m, "right", side=1))
    Rl, Tl = (complex(v) for v in amplitudes(q0, s.V0_new, m, "left", side=1))
    Rr, Tr = (complex(v) for v in amplitudes(p0, s.V0_new, m, "right", side=1))
    return MomentumSet(q0, p0, p0_new, q0_new, R0_l, T0_l, R0_r, T0_r, Rl, Tl, Rr, Tr)


def stationary_state(s: Scenario, which, x):
    """Stationary scattering state of the old or new step, incident amplitude 1.

    Left incidence uses the left momentum ``q0``.  Right incidence uses the
    right momentum ``p0`` (which both the old and the new right-incident
    states share) and ``q`` from the selected depth.
    """
    if which not in ("old", "new"):
        raise ValueError("which must be 'old' or 'new'")
    V = s.V0_old if which == "old" else s.V0_new
    m = s.m
    ms = derive_momenta(s)
    x = np.asarray(x, dtype=float)
    if s.incidence == "left":
        q = ms.q0
        p = complex(p_of_q(q, V, m, side=1))
        R, T = (complex(v) for v in amplitudes(q, V, m, "left", side=1))
        left = np.exp(1j * q * x / HBAR) + R * np.exp(-1j * q * x / HBAR)
        right = T * np.exp(1j * p * x / HBAR)
    else:
        p = ms.p0
        q = complex(q_of_p(p, V, m, side=1))
        if q.imag < 0:
            q = -q
        R, T = (complex(v) for v in amplitudes(p, V, m, "right", side=1))
        left = T * np.exp(-1j * q * x / HBAR)
        right = np.exp(-1j * p * x / HBAR) + R * np.exp(1j * p * x / HBAR)
    out = np.where(x < 0, left, right)
    return out[()] if out.ndim == 0 else out


def stationary_energy(s: Scenario, which="old") -> float:
    """Energy (left level = 0) of the stationary state returned by ``stationary_state``."""
    ms = derive_momenta(s)
    if s.incidence == "left":
        return s.E_q
    V = s.V0_old if which == "old" else s.V0_new
    return float((ms.p0**2).real / (2 * s.m) - V)
