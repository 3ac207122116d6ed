import numpy as np
import pytest

from stepswitch.model import Scenario, derive_momenta
from stepswitch.oracle import ContourSpec, compare_report, oracle_psi, oracle_psi_j


@pytest.mark.parametrize("x,t", [(-9.0, 3.0), (14.0, 30.0)])
def test_contour_offset_invariance(set_a, x, t):
    v1 = oracle_psi(set_a, x, t)
    v2 = oracle_psi(set_a, x, t, ContourSpec(eps=2e-4))
    v3 = oracle_psi(set_a, x, t, ContourSpec(eps=1e-4))
    assert abs(v1 - v2) < 1e-9
    assert abs(v2 - v3) < 1e-9


def test_run_length_invariance(set_b):
    v1 = oracle_psi(set_b, 5.0, 10.0)
    v2 = oracle_psi(set_b, 5.0, 10.0, ContourSpec(K=3.0))
    assert abs(v1 - v2) < 1e-9


def test_truncated_plane_waves_at_switch(set_a):
    ms = derive_momenta(set_a)
    # psi_1(x, 0) = theta(-x) exp(i q0 x / hbar)
    from stepswitch.model import HBAR
    x = -5.0
    assert oracle_psi_j(1, set_a, x, 0.0) == pytest.approx(np.exp(1j * ms.q0 * x / HBAR), abs=1e-8)
    assert abs(oracle_psi_j(1, set_a, 5.0, 0.0)) < 1e-8
    assert oracle_psi_j(3, set_a, 4.0, 0.0) == pytest.approx(np.exp(1j * ms.p0 * 4.0 / HBAR), abs=1e-8)
    with pytest.raises(ValueError):
        oracle_psi_j(1, set_a, 0.0, 0.0)


def test_compare_report(set_b):
    rows = compare_report(set_b, [(-3.0, 2.0), (8.0, 15.0)])
    assert len(rows) == 2
    assert max(r["rel"] for r in rows) < 1e-8


def test_evanescent_right_incidence():
    s = Scenario(0.067, -0.1, 0.3, 0.8, "right")
    v = oracle_psi(s, -1.0, 5.0)
    assert np.isfinite(v)
