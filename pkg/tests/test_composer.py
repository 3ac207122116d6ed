import numpy as np
import pytest

from stepswitch.composer import (WaveSample, coefficients, longtime_energy, psi_approx, psi_exact,
                                 psi_grid_exact, psi_initial, psi_longtime)
from stepswitch.model import HBAR, Scenario, derive_momenta
from stepswitch.oracle import oracle_psi


def test_initial_state_at_zero(set_a):
    for x in (-3.0, 0.0, 4.0):
        assert psi_exact(set_a, x, 0.0).value == psi_initial(set_a, x)
    with pytest.raises(ValueError):
        psi_exact(set_a, 1.0, -1.0)


@pytest.mark.parametrize("x", [-30.0, -8.0, -1.0, 1.0, 8.0, 30.0])
def test_recovers_initial_state(set_a, x):
    t = 1e-3
    v = psi_exact(set_a, x, t).value
    ref = psi_initial(set_a, x) * np.exp(-1j * set_a.E_q * t / HBAR)
    assert abs(v - ref) < 1e-3


@pytest.mark.parametrize("incidence", ["left", "right"])
def test_relaxes_to_new_stationary_state(incidence):
    s = Scenario(0.067, 0.3, 0.3, 0.8, incidence)
    E = longtime_energy(s)
    t = 1e4
    for x in (-20.0, 20.0):
        v = psi_exact(s, x, t).value * np.exp(1j * E * t / HBAR)
        assert abs(v - psi_longtime(s, x)) < 1e-2


def test_longtime_energy_right_keeps_momentum():
    s = Scenario(0.067, 0.3, 0.3, 0.8, "right")
    ms = derive_momenta(s)
    assert longtime_energy(s) == pytest.approx(ms.p0.real**2 / (2 * s.m) - 0.8)
    assert longtime_energy(Scenario(0.067, 0.3, 0.3, 0.8)) == 0.3


def test_right_incidence_against_oracle():
    s = Scenario(0.067, 0.3, 0.3, 0.8, "right")
    for x, t in [(-10.0, 5.0), (15.0, 40.0)]:
        assert abs(psi_exact(s, x, t).value - oracle_psi(s, x, t)) < 1e-8


def test_schrodinger_residual(set_b):
    x, t, h, ht = 6.0, 25.0, 2e-2, 1e-3
    f = lambda xx, tt: psi_exact(set_b, xx, tt).value
    lap = (f(x + h, t) - 2 * f(x, t) + f(x - h, t)) / h**2
    dt = (f(x, t + ht) - f(x, t - ht)) / (2 * ht)
    res = 1j * HBAR * dt + HBAR**2 / (2 * set_b.m) * lap + set_b.V0_new * f(x, t)
    assert abs(res) < 1e-4 * (HBAR**2 / (2 * set_b.m) / h**2)


def test_coefficients(set_a):
    ms = derive_momenta(set_a)
    assert coefficients(set_a) == {1: 1.0, 2: ms.R0_l, 3: ms.T0_l}
    r = Scenario(0.067, 0.3, 0.3, 0.8, "right")
    assert set(coefficients(r)) == {2, 3, 4}


def test_plateau_densities(set_a):
    # right of the step and behind the slower front the density sits at |T|^2
    t = 50.0
    for x in (10.0, 20.0):
        assert psi_exact(set_a, x, t).density == pytest.approx(0.4708, abs=0.03)
    ms = derive_momenta(set_a)
    assert abs(ms.T0_l) ** 2 == pytest.approx(0.6863, abs=1e-4)


def test_approx(set_a):
    v = psi_approx(set_a, 20.0, 500.0).value
    ex = psi_exact(set_a, 20.0, 500.0).value
    assert abs(v - ex) < 0.02 * abs(ex)
    dom = psi_approx(set_a, 20.0, 500.0, dominant=True).value
    assert abs(abs(dom) ** 2 - abs(ex) ** 2) < 0.05 * abs(ex) ** 2
    with pytest.raises(ValueError):
        psi_approx(set_a, 1.0, 0.0)
    with pytest.raises(ValueError):
        psi_approx(Scenario(0.067, 0.3, 0.3, 0.8, "right"), 1.0, 1.0, dominant=True)


def test_wave_sample_validation():
    with pytest.raises(ValueError):
        WaveSample(0.0, 1.0, complex("nan"), "exact")
    with pytest.raises(ValueError):
        WaveSample(0.0, 1.0, 1.0, "guess")
    assert WaveSample(0.0, 1.0, 2j, "grid").density == 4.0


def test_vector_helper(set_b):
    xs = np.array([-1.0, 2.0])
    v = psi_grid_exact(set_b, xs, 3.0)
    assert v.shape == (2,)
    assert v[1] == psi_exact(set_b, 2.0, 3.0).value


@pytest.mark.parametrize("t", [200.0, 500.0])
def test_dominant_terms_right_of_step(set_a, t):
    # away from the fronts the two transmitted waves carry the density; the
    # full approximation is never worse than the dominant-term one
    ms = derive_momenta(set_a)
    ell = np.sqrt(HBAR * t / set_a.m)
    fronts = [ms.p0.real * t / set_a.m, ms.p0_new.real * t / set_a.m]
    for x in np.linspace(2.0, 250.0, 63):
        if min(abs(x - f) for f in fronts) < 3 * ell:
            continue
        e = psi_exact(set_a, x, t).density
        d = psi_approx(set_a, x, t, dominant=True).density
        a = psi_approx(set_a, x, t).density
        assert abs(d - e) <= 0.05 * e
        assert abs(a - e) <= abs(d - e) + 1e-3 * e
