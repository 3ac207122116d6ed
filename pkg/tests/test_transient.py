import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from stepswitch.model import HBAR, Scenario, derive_momenta
from stepswitch.oracle import oracle_psi_j
from stepswitch.transient import (TERMS, branch_crossing_time, eval_Iprime, eval_Isecond,
                                  eval_term, eval_term_approx, eval_term_parts, map_to_u,
                                  term_descriptor)

TABLE = {
    # (j, alpha): (support, variable, sigma, contour side)
    (1, "I"): (-1, "q", 1, 1), (1, "R"): (-1, "q", -1, 1), (1, "T"): (1, "p", 1, 1),
    (2, "I"): (-1, "q", 1, 1), (2, "R"): (-1, "q", -1, 1), (2, "T"): (1, "p", 1, 1),
    (3, "I"): (1, "p", 1, -1), (3, "R"): (1, "p", -1, -1), (3, "T"): (-1, "q", 1, -1),
    (4, "I"): (1, "p", 1, -1), (4, "R"): (1, "p", -1, -1), (4, "T"): (-1, "q", 1, -1),
}

scenarios = st.builds(
    lambda m, E, V0, V1, inc: Scenario(m, E, V0, V1, inc),
    st.floats(0.03, 0.5), st.floats(0.05, 1.0), st.floats(0.0, 1.0), st.floats(0.05, 1.5),
    st.sampled_from(["left", "right"]))


def test_term_table(set_a):
    assert len(TERMS) == 12
    for (j, a), row in TABLE.items():
        d = term_descriptor(j, a, set_a)
        assert (d.support, d.variable, d.sigma, d.contour_side) == row
        assert d.phase_flag == (d.support > 0)
        assert d.has_H == (a != "I")
    with pytest.raises(ValueError):
        term_descriptor(5, "I", set_a)


def _dist_to_cut(d, k):
    if d.cut == "none":
        return math.inf
    b = d.branch
    if d.cut == "real":
        return abs(k - min(max(k.real, -b), b))
    return abs(k - 1j * min(max(k.imag, -b), b))


@given(scenarios, st.sampled_from(TERMS))
def test_pole_residue(s, ja):
    d = term_descriptor(*ja, s)
    k0 = d.k0
    rho = 1e-3 * max(abs(k0), 1e-2)
    assume(_dist_to_cut(d, k0) > 3 * rho)
    th = 2 * np.pi * np.arange(64) / 64
    z = rho * np.exp(1j * th)
    res = np.mean(d.g(k0 + z) * z)
    assert abs(res - d.A0) <= 1e-8 * max(1.0, abs(d.A0))


@given(scenarios, st.sampled_from(TERMS), st.floats(-50, 50), st.floats(0.1, 100))
def test_support(s, ja, x, t):
    d = term_descriptor(*ja, s)
    if not d.in_support(x):
        assert eval_term(*ja, s, x, t) == 0
        assert eval_term_approx(*ja, s, x, t) == 0


def test_evanescent_psi2_not_implemented():
    s = Scenario(0.067, -0.1, 0.3, 0.8, "right")
    with pytest.raises(NotImplementedError):
        term_descriptor(2, "T", s)
    # the other terms are available
    assert np.isfinite(eval_term(4, "T", s, -3.0, 5.0))


@pytest.mark.parametrize("j", [1, 2, 3, 4])
@pytest.mark.parametrize("x,t", [(-12.0, 4.0), (7.5, 30.0), (60.0, 20.0), (-40.0, 300.0)])
def test_terms_match_oracle(set_a, j, x, t):
    ex = sum(eval_term(j, a, set_a, x, t) for a in "IRT")
    orc = oracle_psi_j(j, set_a, x, t)
    assert abs(ex - orc) <= 1e-8 * max(abs(orc), 1e-3)


def test_series_matches_quadrature(set_a):
    hits = 0
    for j, a in TERMS:
        d = term_descriptor(j, a, set_a)
        if not d.has_H:
            continue
        for x, t in [(-30.0, 2.0), (30.0, 2.0), (5.0, 0.5), (-60.0, 1.0), (60.0, 1.0), (-20.0, 0.5), (90.0, 3.0)]:
            if not d.in_support(x):
                continue
            fr = map_to_u(x, t, d)
            sv, info = eval_Isecond(d, fr, method="series", return_info=True)
            if not np.isfinite(info["error"]) or info["error"] > 1e-11:
                continue
            qv = eval_Isecond(d, fr, method="quad")
            assert abs(sv - qv) <= 1e-9 * max(1.0, abs(qv))
            hits += 1
    assert hits >= 3


def test_incident_terms_have_no_remainder(set_b):
    for j in (1, 2, 3, 4):
        d = term_descriptor(j, "I", set_b)
        x = -5.0 if d.support < 0 else 5.0
        assert eval_term_approx(j, "I", set_b, x, 7.0) == pytest.approx(eval_term(j, "I", set_b, x, 7.0), abs=1e-15)
        pole, rem = eval_term_parts(j, "I", set_b, x, 7.0)
        assert rem == 0


def test_approx_improves_with_time(set_a):
    for j, a in [(1, "R"), (1, "T"), (3, "T"), (3, "R")]:
        d = term_descriptor(j, a, set_a)
        x = 20.0 * d.support
        errs = [abs(eval_term_approx(j, a, set_a, x, t) - eval_term(j, a, set_a, x, t)) for t in (200.0, 5000.0)]
        assert errs[1] < 0.2 * errs[0]


@pytest.mark.parametrize("frac", [0.2, -1.0, -4.0])
def test_pole_part_behind_front(set_a, frac):
    # behind the front: plane wave plus a Fresnel tail of size 1/(2 sqrt(pi) |u0|)
    d = term_descriptor(1, "I", set_a)
    ms = derive_momenta(set_a)
    t = 100.0
    x = -frac * ms.q0.real * t / d.m if frac > 0 else frac * 10.0
    fr = map_to_u(x, t, d)
    val = d.c * eval_Iprime(d, fr)
    ref = np.exp(1j * (ms.q0 * x - ms.q0**2 / (2 * d.m) * t) / HBAR)
    tail = abs(val - ref) * abs(fr.u0) * 2 * math.sqrt(math.pi)
    assert tail == pytest.approx(1.0, abs=2.0 / abs(fr.u0) ** 2)


@given(st.floats(0.05, 0.6), st.floats(0.05, 1.0), st.floats(0.05, 1.2))
def test_right_transmitted_wavefront(E, V0, V1):
    # 4T carries a propagating front iff the old right momentum clears the new branch point
    s = Scenario(0.067, E, V0, V1, "right")
    d = term_descriptor(4, "T", s)
    prop = E + V0 > V1
    assume(abs((E + V0) - V1) > 0.02)
    if prop:
        assert abs(d.k0.imag) < 1e-12 and d.k0.real < 0
        t = 400.0
        x = 0.3 * d.k0.real * t / d.m
        pole, _ = eval_term_parts(4, "T", s, x, t)
        fr = map_to_u(x, t, d)
        # plane-wave amplitude up to the algebraic Fresnel tail
        assert abs(pole) == pytest.approx(abs(d.A0), abs=abs(d.A0) / abs(fr.u0))
    else:
        assert abs(d.k0.real) < 1e-12 and abs(d.k0.imag) > 0


def test_branch_crossing_time(set_a):
    d = term_descriptor(1, "T", set_a)
    assert branch_crossing_time(d, 100.0) == pytest.approx(100.0 * d.m / math.sqrt(2 * d.m * 0.8))
    assert branch_crossing_time(d, 100.0) == pytest.approx(48.8, abs=0.05)
    assert branch_crossing_time(term_descriptor(1, "I", set_a), 100.0) is None


def test_time_must_be_positive(set_a):
    with pytest.raises(ValueError):
        map_to_u(1.0, 0.0, term_descriptor(1, "T", set_a))
