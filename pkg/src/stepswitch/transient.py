"""The twelve half-line terms of the switched-step evolution.

Each truncated plane wave ``psi_j`` (``j = 1..4``) splits into an
independent (``I``), reflected (``R``) and transmitted (``T``) piece.  Each
piece is

    psi_ja(x, t) = c_j * F * Int_{C_j} dk exp(-i(a k**2 + b k)) g(k)

with ``a = t/(2 m hbar)``, ``b = -sigma x / hbar`` and ``F = exp(i V t/hbar)``
on ``x >= 0``.  Completing the square puts the saddle at ``ks = sigma*x*m/t``
and the steepest-descent line at ``k = ks + r(1 - i)``; in the scaled
variable ``u = (k - ks)/f``, ``f = (1 - i) sqrt(m hbar / t)``, the line is the
real axis and the exponential is ``exp(-u**2)``.

The pole of ``g`` is integrated in closed form through the Faddeeva
function; the pole-free remainder ``H`` is integrated numerically along the
steepest-descent line, detouring around the swept part of the branch cut.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .faddeeva import w
from .model import HBAR, Scenario, derive_momenta, p_of_q, q_of_p
from .quadrature import QuadratureError, integrate_path

TERMS = tuple((j, a) for j in (1, 2, 3, 4) for a in ("I", "R", "T"))

U_MAX = 8.0
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class TermDescriptor:
    """One row of the term table, bound to a scenario.

    ``support`` is +1 for ``x >= 0`` and -1 for ``x < 0``; ``sigma`` is the
    sign of ``k`` in the spatial exponential; ``contour_side`` is +1 when
    the contour passes above the singularities, -1 below.  ``cut`` is
    ``'real'``, ``'imag'`` or ``'none'`` (orientation of the branch-cut
    segment of ``g`` in the integration variable) and ``branch`` its
    half-length.
    """

    j: int
    alpha: str
    support: int
    variable: str
    sigma: int
    contour_side: int
    cut: str
    branch: float
    pole: complex
    k0: complex
    A0: complex
    has_H: bool
    phase_flag: bool
    c: complex
    m: float
    V: float
    g: Callable = field(compare=False, repr=False)

    @property
    def label(self) -> str:
        return f"{self.j}{self.alpha}"

    def in_support(self, x) -> bool:
        return (x >= 0) if self.support > 0 else (x < 0)

    def saddle(self, x, t) -> float:
        return self.sigma * x * self.m / t

    def H(self, k, side=0):
        """Remainder ``g(k) - A0/(k - k0)``."""
        k = np.asarray(k, dtype=complex)
        if not self.has_H:
            return np.zeros_like(k)
        return self.g(k, side) - self.A0 / (k - self.k0)


@dataclass(frozen=True)
class SaddleFrame:
    x: float
    t: float
    u0: complex
    f: complex
    saddle_k: float
    quad_prefactor: complex
    a: float
    s_u: float


def _cut_kind(variable, V):
    if V == 0:
        return "none"
    if variable == "p":
        return "real" if V > 0 else "imag"
    return "imag" if V > 0 else "real"


@functools.lru_cache(maxsize=256)
def term_descriptor(j: int, alpha: str, s: Scenario) -> TermDescriptor:
    """Build the descriptor of term ``(j, alpha)`` for scenario ``s``."""
    if (j, alpha) not in TERMS:
        raise ValueError(f"no term ({j!r}, {alpha!r})")
    if s.evanescent and j == 2:
        raise NotImplementedError(
            "evanescent initial waves put the psi_2 pole on the branch cut; "
            "use the oracle for these scenarios")
    ms = derive_momenta(s)
    m, V = s.m, s.V0_new
    bp = math.sqrt(abs(2 * m * V))

    def pq(k, side=0):
        return p_of_q(k, V, m, side)

    def qp(k, side=0):
        return q_of_p(k, V, m, side)

    if j in (1, 2):
        Q0 = ms.q0 if j == 1 else -ms.q0
        c = 1j / (2 * math.pi)
        side = 1
        if alpha == "I":
            var, sigma, supp = "q", 1, -1
            g = lambda k, sd=0: 1.0 / (k - Q0)
            k0, A0 = Q0, 1.0 + 0j
        elif alpha == "R":
            var, sigma, supp = "q", -1, -1

            def g(k, sd=0):
                p = pq(k, sd)
                return (k - p) / ((k + p) * (k - Q0))
            p = complex(pq(Q0, -1))
            k0, A0 = Q0, (Q0 - p) / (Q0 + p)
        else:
            var, sigma, supp = "p", 1, 1

            def g(k, sd=0):
                q = qp(k, sd)
                return 2 * k / ((q + k) * (q - Q0))
            k0 = complex(pq(Q0, -1))
            A0 = 2 * Q0 / (Q0 + k0)
        pole = Q0
    else:
        P0 = ms.p0 if j == 3 else -ms.p0
        c = -1j / (2 * math.pi)
        side = -1
        if alpha == "I":
            var, sigma, supp = "p", 1, 1
            g = lambda k, sd=0: 1.0 / (k - P0)
            k0, A0 = P0, 1.0 + 0j
        elif alpha == "R":
            var, sigma, supp = "p", -1, 1

            def g(k, sd=0):
                q = qp(k, sd)
                return (k - q) / ((k + q) * (k - P0))
            q = complex(qp(P0, 1))
            k0, A0 = P0, (P0 - q) / (P0 + q)
        else:
            var, sigma, supp = "q", 1, -1

            def g(k, sd=0):
                p = pq(k, sd)
                return 2 * k / ((k + p) * (p - P0))
            k0 = complex(qp(P0, 1))
            A0 = 2 * P0 / (k0 + P0)
        pole = P0
    cut = "none" if alpha == "I" else _cut_kind(var, V)
    return TermDescriptor(
        j=j, alpha=alpha, support=supp, variable=var, sigma=sigma,
        contour_side=side, cut=cut, branch=bp if cut != "none" else 0.0,
        pole=complex(pole), k0=complex(k0), A0=complex(A0),
        has_H=(alpha != "I" and cut != "none"), phase_flag=(supp > 0),
        c=c, m=m, V=V, g=g)


def map_to_u(x: float, t: float, term: TermDescriptor) -> SaddleFrame:
    """Steepest-descent frame of ``term`` at ``(x, t)``."""
    if not t > 0:
        raise ValueError("t must be positive; use the initial state at t = 0")
    m = term.m
    s_u = math.sqrt(m * HBAR / t)
    f = (1 - 1j) * s_u
    ks = term.saddle(x, t)
    u0 = (term.k0 - ks) / f
    pref = np.exp(1j * m * x * x / (2 * HBAR * t))
    return SaddleFrame(x=x, t=t, u0=complex(u0), f=complex(f), saddle_k=ks,
                       quad_prefactor=complex(pref), a=t / (2 * m * HBAR), s_u=s_u)


def eval_Iprime(term: TermDescriptor, frame: SaddleFrame) -> complex:
    """Closed-form pole contribution ``pref * A0 * Int du exp(-u^2)/(u - u0)``."""
    if term.A0 == 0:
        return 0j
    if term.j in (1, 2):
        return complex(-1j * math.pi * frame.quad_prefactor * term.A0 * w(-frame.u0))
    return complex(1j * math.pi * frame.quad_prefactor * term.A0 * w(frame.u0))


def _detour_path(term, frame):
    """Polyline (k-plane) homotopic to the original contour for the remainder.

    Returns the vertex list and the number of initial panels per segment.
    """
    ks, s_u, a = frame.saddle_k, frame.s_u, frame.a
    R = U_MAX * s_u
    d = 1 - 1j

    def sd(r):
        return ks + r * d

    bc = term.branch
    side = term.contour_side
    swept = False
    if term.cut == "real":
        swept = (ks < bc) if side > 0 else (ks > -bc)
    elif term.cut == "imag":
        swept = ((ks < bc) if side > 0 else (ks > -bc)) and abs(ks) < R
    if not swept:
        return [sd(-R), sd(R)], [16], False

    if term.cut == "real":
        span = bc + abs(ks)
        delta = min(0.25 * bc, 0.25 / (a * span))
        end = bc + delta if side > 0 else -bc - delta
        verts = [sd(-R), sd(-delta), end + 1j * delta, end - 1j * delta,
                 sd(delta), sd(R)]
        lip_phase = a * span * span
    else:
        span = bc + abs(ks)
        delta = min(0.25 * bc, 0.25 / (a * span))
        top = side * (bc + delta)
        verts = [sd(-R), sd(-ks - delta), -delta + 1j * top, delta + 1j * top,
                 sd(-ks + delta), sd(R)]
        lip_phase = a * span * span
    nlip = int(min(4000, max(4, lip_phase / 1.5)))
    # drop SD stubs that point back past the truncation
    if abs(verts[1] - ks) > abs(verts[0] - ks):
        verts = verts[1:]
        panels = [nlip, 4, nlip, 16]
    else:
        panels = [16, nlip, 4, nlip, 16]
    return verts, panels, True


def _guarded_H(term, frame):
    """``H`` with a Cauchy-mean evaluation close to ``k0`` (avoids cancellation)."""
    k0 = term.k0
    if term.cut == "real":
        dist = abs(k0.imag) if abs(k0.real) < term.branch else abs(k0 - np.sign(k0.real) * term.branch)
    elif term.cut == "imag":
        dist = abs(k0.real) if abs(k0.imag) < term.branch else abs(k0 - 1j * np.sign(k0.imag) * term.branch)
    else:
        dist = np.inf
    scale = max(abs(k0), term.branch, 1e-300)
    rho = min(1e-3 * scale, 0.5 * dist)
    if not rho > 1e-9 * scale:
        return term.H
    theta = 2 * np.pi * np.arange(32) / 32
    ring = k0 + rho * np.exp(1j * theta)
    h_ring = term.H(ring)

    def H(k):
        k = np.asarray(k, dtype=complex)
        out = term.H(k)
        near = np.abs(k - k0) < 0.5 * rho
        if np.any(near):
            kn = k[near]
            out[near] = np.mean(h_ring[None, :] * (rho * np.exp(1j * theta))[None, :]
                                / (ring[None, :] - kn[:, None]), axis=1)
        return out
    return H


def eval_Isecond(term: TermDescriptor, frame: SaddleFrame, tol=DEFAULT_TOL,
                 method="auto", return_info=False):
    """Remainder integral ``pref * Int dk exp(-i a (k-ks)^2) H(k)``.

    ``method`` is ``'quad'`` (steepest-descent line with branch-cut detour),
    ``'series'`` (term-by-term Gaussian moments of the Taylor series of
    ``H`` about the saddle; only when no cut is swept) or ``'auto'``.
    """
    if not term.has_H:
        return (0j, {"method": "none", "error": 0.0}) if return_info else 0j
    verts, panels, swept = _detour_path(term, frame)
    if method in ("auto", "series") and not swept:
        val, err, ok = _series_Isecond(term, frame, tol)
        if ok or method == "series":
            info = {"method": "series", "error": err}
            return (val, info) if return_info else val
    ks, a = frame.saddle_k, frame.a
    H = _guarded_H(term, frame)

    def integrand(k):
        z = k - ks
        return H(k) * np.exp(-1j * a * z * z)

    res = integrate_path(integrand, verts, tol=tol, rtol=tol, panels=panels)
    if not res.converged:
        raise QuadratureError("remainder quadrature did not converge", res.value, res.error)
    val = complex(frame.quad_prefactor * res.value)
    info = {"method": "quad", "error": res.error, "swept": swept, "evaluations": res.evaluations}
    return (val, info) if return_info else val


def _cut_distance_u(term, frame):
    """Distance from the saddle to the branch-cut image in the u-plane."""
    bc = term.branch
    if term.cut == "real":
        seg = np.linspace(-bc, bc, 401) + 0j
    else:
        seg = 1j * np.linspace(-bc, bc, 401)
    return float(np.min(np.abs(seg - frame.saddle_k)) / abs(frame.f))


def _series_Isecond(term, frame, tol):
    """Gaussian-moment series ``f sqrt(pi) sum Gamma(n+1/2)/sqrt(pi) * h_{2n}``."""
    dcut = _cut_distance_u(term, frame)
    rho = min(1.0, 0.5 * dcut, max(abs(frame.u0) / 2, 1e-3))
    if dcut < 2 or abs(frame.u0) <= 2:
        return 0j, np.inf, False
    n_pts = 64
    theta = 2 * np.pi * np.arange(n_pts) / n_pts
    uc = rho * np.exp(1j * theta)
    hv = term.H(frame.saddle_k + frame.f * uc)
    coef = np.fft.fft(hv) / n_pts / rho ** np.arange(n_pts)
    total = 0j
    prev = np.inf
    err = np.inf
    for n in range(n_pts // 4):
        term_n = math.gamma(n + 0.5) * coef[2 * n]
        mag = abs(term_n)
        total += term_n
        if mag < tol / max(abs(frame.f), 1e-300):
            err = mag
            break
        if mag > prev:
            err = mag
            break
        prev = mag
    val = frame.quad_prefactor * frame.f * total
    ok = err * abs(frame.f) < tol
    return complex(val), float(err * abs(frame.f)), ok


def eval_term(j, alpha, s: Scenario, x, t, tol=DEFAULT_TOL, method="auto") -> complex:
    """``psi_{j alpha}(x, t)`` (zero off its support half-line)."""
    term = term_descriptor(j, alpha, s)
    if not term.in_support(x):
        return 0j
    fr = map_to_u(x, t, term)
    val = eval_Iprime(term, fr) + eval_Isecond(term, fr, tol, method)
    F = np.exp(1j * s.V0_new * t / HBAR) if term.phase_flag else 1.0
    return complex(term.c * F * val)


def eval_term_parts(j, alpha, s: Scenario, x, t, tol=DEFAULT_TOL):
    """``(pole part, remainder part)`` of ``psi_{j alpha}``, both with ``c_j F``."""
    term = term_descriptor(j, alpha, s)
    if not term.in_support(x):
        return 0j, 0j
    fr = map_to_u(x, t, term)
    F = np.exp(1j * s.V0_new * t / HBAR) if term.phase_flag else 1.0
    return (complex(term.c * F * eval_Iprime(term, fr)),
            complex(term.c * F * eval_Isecond(term, fr, tol)))


def H_at_saddle(term: TermDescriptor, frame: SaddleFrame) -> complex:
    """``H(u = 0)``; on a real cut the lip facing the original contour is used."""
    if not term.has_H:
        return 0j
    ks = frame.saddle_k
    k0 = term.k0
    if abs(ks - k0) < 1e-7 * max(abs(k0), term.branch, 1e-300):
        return complex(_guarded_H(term, frame)(np.array([ks + 0j]))[0])
    return complex(term.H(np.array([ks + 0j]), term.contour_side)[0])


def eval_term_approx(j, alpha, s: Scenario, x, t) -> complex:
    """Pole term plus the leading Gaussian moment of the remainder."""
    term = term_descriptor(j, alpha, s)
    if not term.in_support(x):
        return 0j
    fr = map_to_u(x, t, term)
    lead = fr.quad_prefactor * fr.f * math.sqrt(math.pi) * H_at_saddle(term, fr)
    F = np.exp(1j * s.V0_new * t / HBAR) if term.phase_flag else 1.0
    return complex(term.c * F * (eval_Iprime(term, fr) + lead))


def branch_crossing_time(term: TermDescriptor, x: float) -> float | None:
    """Time at which the steepest-descent line passes the branch point (``|x m / t| = branch``)."""
    if term.cut == "none" or x == 0:
        return None
    return abs(x) * term.m / term.branch
