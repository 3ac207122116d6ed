"""Brute-force reference for the switched-step wave function.

The momentum integrals are integrated directly in their natural variable
along a contour that runs just above (``psi_1``, ``psi_2``) or just below
(``psi_3``, ``psi_4``) the real axis, jumps over an imaginary branch cut with
a rectangular bump, and bends its tails by ``pi/8`` into the sectors where
the Gaussian factor decays.  No saddle point, Faddeeva function or pole
subtraction is involved, so agreement with :mod:`stepswitch.transient` is a
genuine cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import HBAR, Scenario, derive_momenta, p_of_q, q_of_p
from .quadrature import integrate_path

TAIL_ANGLE = math.pi / 8


@dataclass(frozen=True)
class ContourSpec:
    """Contour parameters; ``None`` fields are chosen from ``(x, t)``.

    ``eps`` is the offset of the horizontal run from the real axis and
    ``K`` the half-width of that run before the tails bend away.
    """

    eps: float | None = None
    K: float | None = None
    tol: float = 1e-11
    tail_angle: float = TAIL_ANGLE


def _pieces(j, s: Scenario, x):
    """Integrands ``(variable, sigma, G)`` of the pieces of ``psi_j`` at ``x``.

    The full integrand is ``G(k) * exp(i sigma k x/hbar - i E(k) t/hbar)``.
    """
    ms = derive_momenta(s)
    m, V = s.m, s.V0_new
    out = []
    if j in (1, 2):
        Q0 = ms.q0 if j == 1 else -ms.q0
        if x < 0:
            out.append(("q", 1, lambda q: 1.0 / (q - Q0), False))

            def gr(q):
                p = p_of_q(q, V, m)
                return (q - p) / ((q + p) * (q - Q0))
            out.append(("q", -1, gr, True))
        else:
            def gt(p):
                q = q_of_p(p, V, m)
                return 2 * p / ((q + p) * (q - Q0))
            out.append(("p", 1, gt, True))
    else:
        P0 = ms.p0 if j == 3 else -ms.p0
        if x < 0:
            def gt(q):
                p = p_of_q(q, V, m)
                return 2 * q / ((q + p) * (p - P0))
            out.append(("q", 1, gt, True))
        else:
            out.append(("p", 1, lambda p: 1.0 / (p - P0), False))

            def gr(p):
                q = q_of_p(p, V, m)
                return (p - q) / ((q + p) * (p - P0))
            out.append(("p", -1, gr, True))
    return out


def _contour(var, sigma, side, has_cut, s, x, t, spec, scale):
    """Polyline vertices and initial panel counts for one piece."""
    m, V = s.m, s.V0_new
    c = 2 * m * V
    bc = math.sqrt(abs(c))
    imag_cut = has_cut and ((var == "q") == (c > 0)) and c != 0
    a = t / (2 * m * HBAR)
    ks = sigma * x * m / t if t > 0 else 0.0
    K = spec.K
    if K is None:
        K = 1.5 * max(abs(ks), bc, scale) + 4 * (math.sqrt(m * HBAR / t) if t > 0 else 0.0)
    eps = spec.eps
    if eps is None:
        eps = 1e-3 * scale
        if t > 0:
            eps = min(eps, 0.5 / (2 * a * (K + abs(ks))))
    y = side * eps
    th = spec.tail_angle
    if t > 0:
        # length L along each tail with 2 a (dist) L sin(th) cos-ish >= 40
        def tail_len(x0):
            # decay exponent 2a (x0 + r cos) r sin
            A = 2 * a * math.cos(th) * math.sin(th)
            B = 2 * a * x0 * math.sin(th)
            return (-B + math.sqrt(B * B + 4 * A * 45.0)) / (2 * A)
        Lr = tail_len(K - ks)
        Ll = tail_len(K + ks)
        left_dir = -np.exp(-1j * th)
        right_dir = np.exp(-1j * th)
    else:
        sx = sigma * x
        if sx == 0:
            raise ValueError("the t = 0 oracle needs x != 0")
        L = 45.0 * HBAR / (abs(x) * math.sin(th))
        Ll = Lr = L
        if sx > 0:
            left_dir, right_dir = -np.exp(-1j * th), np.exp(1j * th)
        else:
            left_dir, right_dir = -np.exp(1j * th), np.exp(-1j * th)
    start = -K + 1j * y + Ll * left_dir
    end = K + 1j * y + Lr * right_dir
    mid = [-K + 1j * y]
    if imag_cut:
        h = 0.25 * bc
        wb = 0.25 * bc
        if t > 0:
            lead = max(side * ks, 0.0)
            wb = min(wb, lead + 0.25 / (a * (bc + h)))
        top = side * (bc + h)
        mid += [-wb + 1j * y, -wb + 1j * top, wb + 1j * top, wb + 1j * y]
    mid.append(K + 1j * y)
    verts = [start] + mid + [end]

    def n_panels(z1, z2):
        if t > 0:
            r1, r2 = (z1 - ks).real, (z2 - ks).real
            if r1 * r2 < 0:
                ph = a * (r1 * r1 + r2 * r2)
            else:
                ph = a * abs(r1 * r1 - r2 * r2)
        else:
            ph = abs((z2 - z1).real * x) / HBAR
        return int(min(400000, max(4, ph / 1.5)))
    panels = [8] + [n_panels(verts[i], verts[i + 1]) for i in range(1, len(verts) - 2)] + [8]
    return verts, panels


def oracle_piece(j, s: Scenario, x, t, piece, spec: ContourSpec | None = None) -> complex:
    """One piece of ``psi_j``: ``(var, sigma, G, has_cut)`` from ``_pieces``."""
    spec = spec or ContourSpec()
    var, sigma, G, has_cut = piece
    ms = derive_momenta(s)
    scale = max(abs(ms.q0), abs(ms.p0), abs(ms.p0_new), abs(ms.q0_new))
    side = 1 if j in (1, 2) else -1
    verts, panels = _contour(var, sigma, side, has_cut, s, x, t, spec, scale)
    m, V = s.m, s.V0_new
    shift = V if var == "p" else 0.0

    def f(k):
        E = k * k / (2 * m) - shift
        return G(k) * np.exp(1j * (sigma * k * x - E * t) / HBAR)

    res = integrate_path(f, verts, tol=spec.tol, rtol=spec.tol, panels=panels,
                         max_intervals=2000000, raise_on_fail=True)
    c = 1j / (2 * math.pi) if j in (1, 2) else -1j / (2 * math.pi)
    return complex(c * res.value)


def oracle_psi_j(j, s: Scenario, x, t, spec: ContourSpec | None = None) -> complex:
    """``psi_j(x, t)`` by direct contour quadrature."""
    return sum(oracle_piece(j, s, x, t, pc, spec) for pc in _pieces(j, s, x))


def oracle_psi(s: Scenario, x, t, spec: ContourSpec | None = None) -> complex:
    """Full wave function by direct quadrature (same composition as the exact solver)."""
    ms = derive_momenta(s)
    if s.incidence == "left":
        coeffs = {1: 1.0, 2: ms.R0_l, 3: ms.T0_l}
    else:
        coeffs = {4: 1.0, 3: ms.R0_r, 2: ms.T0_r}
    return complex(sum(cf * oracle_psi_j(j, s, x, t, spec) for j, cf in coeffs.items()))


def compare_report(s: Scenario, points, spec: ContourSpec | None = None, tol=1e-10):
    """Relative deviation between the semianalytic and the oracle wave functions.

    Returns a list of dicts with ``x, t, exact, oracle, rel``.
    """
    from .composer import psi_exact
    rows = []
    for x, t in points:
        ex = psi_exact(s, x, t, tol=tol).value
        orc = oracle_psi(s, x, t, spec)
        rel = abs(ex - orc) / max(abs(orc), 1e-300)
        rows.append({"x": x, "t": t, "exact": ex, "oracle": orc, "rel": rel})
    return rows
