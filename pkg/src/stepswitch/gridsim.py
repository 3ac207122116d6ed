"""Crank-Nicolson (Cayley) evolution on a finite box with open edges.

The box ``[-L/2, L/2]`` is discretised with ``N`` points, a 3-point
Laplacian and the step potential sampled pointwise (``x >= 0`` takes the
right level).  Interior points follow

    (1 + i H dt / 2 hbar) psi^{n+1} = (1 - i H dt / 2 hbar) psi^n

with the edge values as Dirichlet data.  With ``closed=False`` the edge
values are advanced explicitly by a one-way-wave ansatz (Mains-Haddad):

* left:  ``psi = A e^{i q0 x} e^{-iEt} + B(x, t) e^{-i q0 x}``, the reflected
  envelope ``B`` drifting left at ``q0/m``;
* right: ``psi = C(x, t) e^{i p0' x}``, the transmitted envelope drifting
  right at ``p0'/m``.

Envelope slopes come from the two outermost points on each side.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numba
import numpy as np

from .model import HBAR, Scenario, derive_momenta, stationary_state


@dataclass
class GridState:
    psi: np.ndarray
    t: float
    dx: float
    dt: float
    L: float
    scenario: Scenario
    closed: bool = False
    A_inc: complex = 1.0 + 0j
    steps: int = 0
    x: np.ndarray = field(repr=False, default=None)

    @property
    def N(self) -> int:
        return self.psi.size

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.dx)


def init_grid(s: Scenario, L: float, N: int, dt: float, closed: bool = False) -> GridState:
    """Old stationary state sampled on ``N`` points of ``[-L/2, L/2]``.

    ``closed=True`` pins both edges to zero (a hard-wall box), for which the
    Cayley step is exactly unitary on the interior.
    """
    if not (L > 0 and dt > 0):
        raise ValueError("L and dt must be positive")
    if N < 3:
        raise ValueError("need at least 3 grid points")
    if s.incidence != "left":
        raise NotImplementedError("the open-edge scheme injects from the left")
    x = np.linspace(-L / 2, L / 2, N)
    dx = L / (N - 1)
    psi = np.asarray(stationary_state(s, "old", x), dtype=complex)
    if closed:
        psi[0] = psi[-1] = 0.0
    e_scale = max(abs(s.E_q), abs(s.V0_new), abs(s.V0_old)) + HBAR**2 / (2 * s.m * dx * dx)
    if dt * e_scale / HBAR > 0.5 and dt * max(abs(s.E_q), abs(s.V0_new) + abs(s.E_q)) / HBAR > 0.05:
        warnings.warn("time step is coarse compared with the physical energies", RuntimeWarning)
    return GridState(psi=psi, t=0.0, dx=dx, dt=dt, L=L, scenario=s, closed=closed, x=x)


@numba.njit(cache=True, fastmath=True)
def _advance(psi, nsteps, t0, dt, dx, x0, kap, V, open_edges, A, q0, p1, m, E, hbar):
    """Advance ``psi`` in place by ``nsteps`` Cayley steps; returns the final time."""
    N = psi.size
    n = N - 2
    z = 0.5j * dt / hbar
    off = -z * kap
    # Thomas factorisation of the constant left-hand side
    cp = np.empty(n, dtype=np.complex128)
    den = np.empty(n, dtype=np.complex128)
    den[0] = 1.0 + z * (2 * kap + V[1])
    cp[0] = off / den[0]
    for i in range(1, n):
        den[i] = 1.0 + z * (2 * kap + V[i + 1]) - off * cp[i - 1]
        cp[i] = off / den[i]
    inv = 1.0 / den
    rd = np.empty(N, dtype=np.complex128)
    for k in range(N):
        rd[k] = 1.0 - z * (2 * kap + V[k])
    zk = z * kap
    r = np.empty(n, dtype=np.complex128)
    ph = np.exp(-1j * E * dt / hbar)
    xN = x0 + (N - 1) * dx
    t = t0
    for _ in range(nsteps):
        if open_edges:
            inc0 = A * np.exp(1j * (q0 * x0 - E * t) / hbar)
            inc1 = A * np.exp(1j * (q0 * (x0 + dx) - E * t) / hbar)
            B0 = (psi[0] - inc0) * np.exp(1j * q0 * x0 / hbar)
            B1 = (psi[1] - inc1) * np.exp(1j * q0 * (x0 + dx) / hbar)
            left_new = psi[0] * ph + (q0 / m) * (B1 - B0) / dx * np.exp(-1j * q0 * x0 / hbar) * dt
            C1 = psi[N - 1] * np.exp(-1j * p1 * xN / hbar)
            C0 = psi[N - 2] * np.exp(-1j * p1 * (xN - dx) / hbar)
            right_new = psi[N - 1] * ph - (p1 / m) * (C1 - C0) / dx * np.exp(1j * p1 * xN / hbar) * dt
        else:
            left_new = psi[0]
            right_new = psi[N - 1]
        # right-hand side fused with the forward sweep
        r[0] = (rd[1] * psi[1] + zk * (psi[0] + psi[2])
                - off * left_new) * inv[0]
        for i in range(1, n):
            k = i + 1
            rhs = rd[k] * psi[k] + zk * (psi[k - 1] + psi[k + 1])
            if i == n - 1:
                rhs -= off * right_new
            r[i] = (rhs - off * r[i - 1]) * inv[i]
        for i in range(n - 2, -1, -1):
            r[i] = r[i] - cp[i] * r[i + 1]
        psi[0] = left_new
        psi[N - 1] = right_new
        for i in range(n):
            psi[i + 1] = r[i]
        t += dt
    return t


def _kernel_args(state: GridState):
    s = state.scenario
    ms = derive_momenta(s)
    V = np.where(state.x >= 0, -s.V0_new, 0.0).astype(float)
    kap = HBAR**2 / (2 * s.m * state.dx**2)
    return (state.dx, float(state.x[0]), kap, V, not state.closed, complex(state.A_inc),
            float(ms.q0.real), float(ms.p0_new.real), s.m, float(s.E_q), HBAR)


def step(state: GridState, nsteps: int = 1) -> GridState:
    """Advance by ``nsteps`` time steps (in place); returns the state."""
    if state.scenario.evanescent:
        raise NotImplementedError("open edges need a propagating incident wave")
    dx, x0, kap, V, open_edges, A, q0, p1, m, E, hb = _kernel_args(state)
    state.t = _advance(state.psi, int(nsteps), state.t, state.dt, dx, x0, kap, V,
                       open_edges, A, q0, p1, m, E, hb)
    state.steps += int(nsteps)
    return state


def grid_flux(state: GridState, idx: int) -> float:
    """Flux at grid index ``idx``: centered inside, second-order one-sided at the edges."""
    psi, dx, N = state.psi, state.dx, state.N
    if 0 < idx < N - 1:
        d = (psi[idx + 1] - psi[idx - 1]) / (2 * dx)
    elif idx == 0:
        d = (-3 * psi[0] + 4 * psi[1] - psi[2]) / (2 * dx)
    else:
        d = (3 * psi[-1] - 4 * psi[-2] + psi[-3]) / (2 * dx)
    return float((np.conj(psi[idx]) * d).imag * HBAR / state.scenario.m)


@dataclass
class ProbeSeries:
    t: np.ndarray
    x: np.ndarray  # actual grid positions of the probes
    flux: np.ndarray  # shape (n_times, n_probes)
    density: np.ndarray
    psi: np.ndarray


def probe_indices(state: GridState, probes) -> np.ndarray:
    return np.array([int(np.argmin(np.abs(state.x - p))) for p in probes])


def run_probes(s: Scenario, L: float, N: int, dt: float, T: float, probes,
               stride: int | None = None, closed: bool = False) -> ProbeSeries:
    """Evolve to time ``T`` recording flux and density at ``probes`` every ``stride`` steps."""
    state = init_grid(s, L, N, dt, closed=closed)
    idx = probe_indices(state, probes)
    nsteps = int(round(T / dt))
    if stride is None:
        stride = max(1, nsteps // 500)
    ts, J, rho, vals = [], [], [], []

    def record():
        ts.append(state.t)
        J.append([grid_flux(state, i) for i in idx])
        vals.append(state.psi[idx].copy())
        rho.append(np.abs(vals[-1]) ** 2)

    record()
    done = 0
    while done < nsteps:
        k = min(stride, nsteps - done)
        step(state, k)
        done += k
        record()
    return ProbeSeries(np.array(ts), state.x[idx], np.array(J), np.array(rho), np.array(vals))


def first_deviation_time(t, J_grid, J_exact, threshold) -> float:
    """First sampled time at which ``|J_grid - J_exact|`` exceeds ``threshold`` (inf if never)."""
    bad = np.nonzero(np.abs(np.asarray(J_grid) - np.asarray(J_exact)) > threshold)[0]
    return float(t[bad[0]]) if bad.size else math.inf
