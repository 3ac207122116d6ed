import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stepswitch.quadrature import QuadratureError, integrate_path


def test_gaussian():
    r = integrate_path(lambda k: np.exp(-k * k), [-10, 10])
    assert r.converged
    assert r.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_closed_loop_residue():
    sq = [1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j, 1 + 1j]
    r = integrate_path(lambda k: 1.0 / (k - 0.2 + 0.1j), sq, tol=1e-12)
    assert r.value == pytest.approx(2j * math.pi, abs=1e-10)


@given(st.floats(1.0, 200.0))
def test_oscillatory(om):
    r = integrate_path(lambda k: np.exp(1j * om * k), [0.0, 10.0], tol=1e-12,
                       panels=int(om * 10 / 3) + 1)
    exact = (np.exp(10j * om) - 1) / (1j * om)
    assert abs(r.value - exact) < 1e-10


def test_gaussian_rotated_path():
    # exp(-i a k^2) integrated along its steepest-descent line
    a = 3.0
    d = np.exp(-1j * math.pi / 4)
    r = integrate_path(lambda k: np.exp(-1j * a * k * k), [-8 * d, 8 * d])
    assert r.value == pytest.approx(math.sqrt(math.pi / a) * d, rel=1e-12)


def test_failure_reporting():
    f = lambda k: 1.0 / np.sqrt(np.abs(k) + 1e-300)
    r = integrate_path(f, [-1.0, 1.0], tol=1e-14, rtol=1e-15, max_intervals=50)
    assert not r.converged
    with pytest.raises(QuadratureError):
        integrate_path(f, [-1.0, 1.0], tol=1e-14, rtol=1e-15, max_intervals=50, raise_on_fail=True)


def test_degenerate_paths():
    assert integrate_path(np.exp, [1.0]).value == 0
    assert integrate_path(np.exp, [1.0, 1.0]).value == 0
