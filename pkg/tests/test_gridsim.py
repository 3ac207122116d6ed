import math

import numpy as np
import pytest

from stepswitch.gridsim import (first_deviation_time, grid_flux, init_grid, probe_indices,
                                run_probes, step)
from stepswitch.model import HBAR, Scenario
from stepswitch.observables import stationary_flux


def test_closed_box_is_unitary(set_b):
    st = init_grid(set_b, 44.96, 801, 1e-3, closed=True)
    n0 = st.norm()
    step(st, 2000)
    assert abs(st.norm() - n0) < 1e-11 * n0
    assert st.t == pytest.approx(2.0)
    assert st.steps == 2000


def test_minimal_grid(set_a):
    st = init_grid(set_a, 10.0, 3, 1e-3)
    step(st, 5)
    assert st.psi.shape == (3,)
    assert np.all(np.isfinite(st.psi))
    with pytest.raises(ValueError):
        init_grid(set_a, 10.0, 2, 1e-3)
    with pytest.raises(ValueError):
        init_grid(set_a, -1.0, 10, 1e-3)
    with pytest.raises(NotImplementedError):
        init_grid(Scenario(0.067, 0.3, 0.3, 0.8, "right"), 10.0, 10, 1e-3)


def test_coarse_step_warns(set_a):
    with pytest.warns(RuntimeWarning):
        init_grid(set_a, 10.0, 101, 0.5)


def test_free_plane_wave_stays_put():
    # no step at all: the open edges must pass a plane wave without reflection
    s = Scenario(0.067, 0.3, 0.0, 0.0)
    st = init_grid(s, 40.0, 2001, 1e-3)
    step(st, 3000)
    ref = np.exp(1j * (math.sqrt(2 * s.m * s.E_q) * st.x - s.E_q * st.t) / HBAR)
    assert np.max(np.abs(st.psi - ref)) < 2e-2


def test_initial_flux_matches_stationary(set_b):
    st = init_grid(set_b, 44.96, 2000, 1e-4)
    J = stationary_flux(set_b, "old")
    for i in (0, 500, 1000, 1999):
        assert grid_flux(st, i) == pytest.approx(J, rel=2e-3)


def test_probes_and_deviation(set_b):
    ps = run_probes(set_b, 44.96, 1000, 1e-3, 2.0, [-22.48, 0.0, 22.48], stride=100)
    assert ps.flux.shape == (21, 3)
    assert ps.t[0] == 0 and ps.t[-1] == pytest.approx(2.0)
    assert np.allclose(ps.density, np.abs(ps.psi) ** 2)
    st = init_grid(set_b, 44.96, 1000, 1e-3)
    assert list(probe_indices(st, [-22.48, 22.48])) == [0, 999]
    t = np.arange(4.0)
    assert first_deviation_time(t, [0, 0, 1, 1], [0, 0, 0, 0], 0.5) == 2.0
    assert first_deviation_time(t, [0, 0, 0, 0], [0, 0, 0, 0], 0.5) == math.inf
