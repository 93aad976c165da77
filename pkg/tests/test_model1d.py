import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.integrate import quad

from oracles import fd_interval
from robinspec.model1d import (TMINUS, TPLUS, Model1DParams, tminus_eigenvalues,
                               tplus_eigenvalues, trace_growth)


def P(alpha, delta=1.0, m_max=0.0, beta=0.0):
    return Model1DParams(delta=delta, m_max=m_max, beta=beta, alpha=alpha)


def fd_count_below(p, dirichlet, level):
    vals = fd_interval(p.delta, p.c, p.beta, dirichlet_end=dirichlet, n=2000)
    return int(np.sum(vals < level))


# examples ---------------------------------------------------------------------

def test_tplus_alpha10_exponentially_close():
    res = tplus_eigenvalues(P(10.0), 2)
    assert res.operator == TPLUS
    assert -100.0 - 1e-6 < res.eigenvalues[0] < -100.0 + 1.0
    assert abs(res.eigenvalues[0] + 100.0) < 1e-6
    fd = fd_interval(1.0, 10.0, 0.0, dirichlet_end=True, n=2000)
    assert res.eigenvalues[0] == pytest.approx(fd[0], rel=1e-3)


def test_tplus_second_eigenvalue_nonnegative():
    res = tplus_eigenvalues(P(10.0), 2)
    assert len(res.k_values) == 1
    assert res.eigenvalues[1] >= 0.0


def test_tplus_shifted_by_m_max():
    assert abs(tplus_eigenvalues(P(10.0, m_max=1.0)).eigenvalues[0] + 121.0) < 1e-3


def test_tminus_robin_neumann():
    res = tminus_eigenvalues(P(10.0), 2)
    assert res.operator == TMINUS
    assert abs(res.eigenvalues[0] + 100.0) < 1e-3
    fd = fd_interval(1.0, 10.0, 0.0, n=2000)
    assert res.eigenvalues[0] == pytest.approx(fd[0], rel=1e-3)
    # the Neumann end lies above the Dirichlet one for the same c
    assert res.eigenvalues[0] <= tplus_eigenvalues(P(10.0)).eigenvalues[0]


def test_tminus_two_branches():
    res = tminus_eigenvalues(P(20.0, m_max=1.0, beta=2.0), 3)
    assert abs(res.eigenvalues[0] + 441.0) < 1e-3
    # second branch localized at t = delta, close to -beta^2
    assert len(res.k_values) == 2
    assert -4.0 < res.eigenvalues[1] < -3.0
    fd = fd_interval(1.0, 21.0, 2.0, n=2000)
    np.testing.assert_allclose(res.eigenvalues[:3], fd[:3], rtol=2e-3, atol=2e-3)


def test_k_values_consistent():
    for res in (tplus_eigenvalues(P(7.0, m_max=0.5), 3),
                tminus_eigenvalues(P(7.0, beta=3.0), 4)):
        for k, e in zip(res.k_values, res.eigenvalues):
            assert -k * k == pytest.approx(e, rel=1e-12)
        assert all(np.diff(res.eigenvalues) > 0)


def test_no_negative_eigenvalue_when_c_small():
    res = tplus_eigenvalues(P(0.5, delta=1.0), 2)
    assert res.k_values == ()
    assert all(e >= 0 for e in res.eigenvalues)
    assert len(res.eigenvalues) == 2
    res = tplus_eigenvalues(P(0.0, m_max=-2.0), 1)
    assert res.eigenvalues[0] > 0


def test_invalid_params():
    with pytest.raises(ValueError):
        P(1.0, delta=0.0)
    with pytest.raises(ValueError):
        P(1.0, beta=-1.0)
    with pytest.raises(ValueError):
        tplus_eigenvalues(P(1.0), 0)


def test_large_alpha_no_overflow():
    res = tminus_eigenvalues(P(2000.0, beta=1.0), 2)
    assert res.eigenvalues[0] == pytest.approx(-2000.0 ** 2, rel=1e-12)
    assert math.isfinite(res.trace0)


# trace growth -------------------------------------------------------------------

def test_trace_growth_ratio_tends_to_one():
    rows = trace_growth([P(a) for a in (10.0, 20.0, 40.0)])
    assert [r[0] for r in rows] == [10.0, 20.0, 40.0]
    assert abs(rows[-1][2] - 1.0) < 1e-3
    k10 = math.sqrt(-tplus_eigenvalues(P(10.0)).eigenvalues[0])
    assert 0.5 * 2 * k10 < rows[0][1] < 1.5 * 2 * k10


def test_trace_matches_sinh_oracle():
    # psi = sinh(k(delta - t)) / ||.||, so |psi(0)|^2 = sinh^2(k delta) / int sinh^2
    p = P(3.0, delta=0.7)
    k = tplus_eigenvalues(p).k_values[0]
    norm2 = quad(lambda t: math.sinh(k * (p.delta - t)) ** 2, 0, p.delta, epsabs=0, epsrel=1e-13)[0]
    assert tplus_eigenvalues(p).trace0 == pytest.approx(math.sinh(k * p.delta) ** 2 / norm2, rel=1e-10)


def test_exponential_smallness_of_c1():
    res = tplus_eigenvalues(P(20.0))
    assert abs(res.c1 / res.c2) < math.exp(-1.9 * 20.0)


def test_trace_growth_requires_ground_state():
    with pytest.raises(ValueError):
        trace_growth([P(0.1)])


# properties -----------------------------------------------------------------------

params = st.builds(P, alpha=st.floats(0.3, 40.0), delta=st.floats(0.3, 3.0),
                   m_max=st.floats(-0.5, 2.0), beta=st.floats(0.0, 5.0))


def _normalized(res):
    k = res.k_values[0]
    return lambda t: res.c1 * math.exp(k * t) + res.c2 * math.exp(-k * t)


@settings(max_examples=30, deadline=None)
@given(p=params, operator=st.sampled_from([TPLUS, TMINUS]))
def test_root_count_matches_fd(p, operator):
    solve = tplus_eigenvalues if operator == TPLUS else tminus_eigenvalues
    res = solve(p, 4)
    eig = res.eigenvalues
    # compare counts at levels between consecutive eigenvalues, away from any root
    levels = [0.5 * (a + b) for a, b in zip(eig[:-1], eig[1:])]
    levels = [lv for lv in levels if min(abs(lv - e) for e in eig) > 0.05 * (1 + abs(lv))]
    for lv in levels:
        expected = sum(e < lv for e in eig)
        assert fd_count_below(p, operator == TPLUS, lv) == expected


@settings(max_examples=30, deadline=None)
@given(p=params, operator=st.sampled_from([TPLUS, TMINUS]))
def test_ground_state_normalized(p, operator):
    solve = tplus_eigenvalues if operator == TPLUS else tminus_eigenvalues
    res = solve(p, 1)
    if not res.k_values:
        return
    psi = _normalized(res)
    total = quad(lambda t: psi(t) ** 2, 0.0, p.delta, epsabs=0, epsrel=1e-13, limit=200)[0]
    assert total == pytest.approx(1.0, abs=1e-10)
    assert psi(0.0) ** 2 == pytest.approx(res.trace0, rel=1e-10)
    if operator == TPLUS:
        assert abs(psi(p.delta)) < 1e-10 * abs(psi(0.0))


@settings(max_examples=30, deadline=None)
@given(delta=st.floats(0.3, 3.0), m=st.floats(0.0, 2.0),
       alphas=st.lists(st.floats(1.5, 60.0), min_size=2, max_size=6, unique=True))
def test_tplus_decreasing_in_alpha(delta, m, alphas):
    alphas = sorted(alphas)
    assume(min(np.diff(alphas)) > 1e-3)
    e = [tplus_eigenvalues(P(a, delta, m)).eigenvalues[0] for a in alphas]
    assert all(np.diff(e) < 0)


@settings(max_examples=40, deadline=None)
@given(p=params)
def test_dirichlet_neumann_ordering(p):
    q = P(p.alpha, p.delta, p.m_max, 0.0)
    assert tminus_eigenvalues(q, 1).eigenvalues[0] <= tplus_eigenvalues(q, 1).eigenvalues[0]


@pytest.mark.parametrize("alpha", [10.0, 20.0, 40.0])
def test_delta_insensitivity(alpha):
    m = 0.5
    for solve, beta in ((tplus_eigenvalues, 0.0), (tminus_eigenvalues, 1.0)):
        e = [solve(P(alpha, delta, m, beta)).eigenvalues[0] for delta in (0.5, 1.0, 2.0)]
        assert max(e) - min(e) < 1e-3 * alpha ** 2
        assert abs(e[1] + (alpha + m) ** 2) < 1e-3 * alpha
