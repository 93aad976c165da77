import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import multiplicity as oracle_multiplicity, radial_fd_spectrum
from robinspec import asympt
from robinspec.geometry import DomainSpec, GeometryError
from robinspec.radial import (BesselUnderflowWarning, ball_negative_spectrum, bessel_i_scaled,
                              multiplicity, negative_spectrum, negative_spectrum_grid,
                              shell_negative_spectrum)
from robinspec.results import RADIAL_EXACT, results_from_csv, results_to_csv

SHELL_B = 2.0 ** (1.0 / 3.0)


def energies(results):
    return np.array([r.E for r in results])


@pytest.mark.parametrize("nu", [2, 3])
@pytest.mark.parametrize("R", [1.0, 2.0])
@pytest.mark.parametrize("alpha", [5.0, 10.0, 20.0])
def test_ball_matches_fd_oracle(nu, R, alpha):
    res = ball_negative_spectrum(nu, R, alpha, 5)
    oracle = radial_fd_spectrum(nu, alpha, 5, b=R, n=4000, lmax=8)
    assert len(res) == 5 == len(oracle)
    E = energies(res)
    assert np.all(np.abs(E - oracle) <= 1e-6 * np.abs(E) + 1e-8)


@pytest.mark.parametrize("b,alpha", [(2.0, 10.0), (SHELL_B, 20.0), (3.0, 5.0)])
def test_shell_matches_fd_oracle(b, alpha):
    res = shell_negative_spectrum(3, 1.0, b, alpha, 4)
    oracle = radial_fd_spectrum(3, alpha, 4, a=1.0, b=b, n=4000, lmax=8)
    E = energies(res)
    assert np.all(np.abs(E - oracle) <= 1e-6 * np.abs(E) + 1e-8)


def test_ball_alpha20_two_term_window():
    E = ball_negative_spectrum(3, 1.0, 20.0, 1)[0].E
    assert abs(E + 400.0 + 40.0) < 5.0


def test_disk_R2_linear_coefficient_is_curvature():
    grid = asympt.geometric_grid(20.0, 640.0, 8)
    res = [ball_negative_spectrum(2, 2.0, a, 1)[0] for a in grid]
    fit = asympt.fit_linear_coefficient(res)
    assert fit.c_hat == pytest.approx(0.5, abs=max(3 * fit.c_err, 0.01))


def test_tiny_alpha_disk():
    res = ball_negative_spectrum(2, 1.0, 1e-3, 1)
    assert res[0].E < -(1e-3) ** 2
    assert res[0].E > -1e-2


@pytest.mark.parametrize("alpha", [0.0, -1.0])
def test_no_negative_spectrum_at_nonpositive_alpha(alpha):
    assert ball_negative_spectrum(3, 1.0, alpha, 3) == []
    assert shell_negative_spectrum(3, 1.0, 2.0, alpha, 3) == []


def test_shell_heavier_than_ball_at_alpha20():
    shell = shell_negative_spectrum(3, 1.0, SHELL_B, 20.0, 1)[0].E
    ball = ball_negative_spectrum(3, 1.0, 20.0, 1)[0].E
    assert shell > ball


@pytest.mark.parametrize("b", [5.0, 10.0, 20.0])
def test_thick_shell_outer_layer(b):
    # E_1 + alpha^2 = -(nu-1) alpha / b + O(1)
    for alpha in (50.0, 100.0, 200.0):
        E = shell_negative_spectrum(3, 1.0, b, alpha, 1)[0].E
        assert abs(E + alpha ** 2 + 2.0 * alpha / b) < 1.0


def test_inner_sphere_sign_convention():
    # with the outward normal at r = a the inner sphere is concave, so the
    # ground state lives at r = b and its coefficient is 1/b, not 1/a
    grid = asympt.geometric_grid(20.0, 640.0, 8)
    res = [shell_negative_spectrum(3, 1.0, 2.0, a, 1)[0] for a in grid]
    assert asympt.fit_linear_coefficient(res).c_hat == pytest.approx(2 * 0.5, abs=0.02)


def test_negative_spectrum_dispatch():
    assert negative_spectrum(DomainSpec.ball(3, 1.0), 10.0, 2) == ball_negative_spectrum(
        3, 1.0, 10.0, 2)
    with pytest.raises(GeometryError):
        negative_spectrum(DomainSpec.star2d([1.0]), 10.0, 1)
    with pytest.raises(GeometryError):
        shell_negative_spectrum(3, 2.0, 1.0, 10.0, 1)


# bookkeeping ---------------------------------------------------------------

@given(l=st.integers(0, 30), nu=st.integers(2, 8))
def test_multiplicity_formula(l, nu):
    assert multiplicity(l, nu) == oracle_multiplicity(l, nu)


def test_multiplicity_small_cases():
    assert [multiplicity(l, 3) for l in range(4)] == [1, 3, 5, 7]
    assert [multiplicity(l, 2) for l in range(4)] == [1, 2, 2, 2]
    assert [multiplicity(l, 4) for l in range(4)] == [1, 4, 9, 16]


@pytest.mark.parametrize("alpha", [5.0, 20.0, 80.0])
def test_disk_pairs(alpha):
    res = ball_negative_spectrum(2, 1.0, alpha, 9)
    assert res[0].l == 0
    E = energies(res)
    for i in range(1, 9, 2):
        assert res[i].l == res[i + 1].l >= 1
        assert E[i] == E[i + 1]
    assert np.all(np.diff(E) >= 0)
    assert [r.j for r in res] == list(range(1, 10))


def test_truncation_flag():
    res = ball_negative_spectrum(3, 1.0, 0.5, 5)
    assert len(res) == 1
    assert res[0].flag == "truncated"
    full = ball_negative_spectrum(3, 1.0, 20.0, 5)
    assert all(r.flag == "" for r in full)


def test_underflow_warning():
    with pytest.warns(BesselUnderflowWarning):
        assert bessel_i_scaled(200.0, 1e-3) == 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bessel_i_scaled(2.0, 1.0)


def test_results_fields_and_csv():
    res = ball_negative_spectrum(3, 1.0, 10.0, 4)
    assert all(r.method == RADIAL_EXACT for r in res)
    assert all(r.err_est < 1e-9 * abs(r.E) for r in res)
    assert results_from_csv(results_to_csv(res)) == res
    header = results_to_csv(res).splitlines()[0].split(",")
    assert {"domain_id", "alpha", "j", "E", "l", "multiplicity", "method", "err_est"} <= set(header)


def test_grid_deterministic_with_workers():
    spec = DomainSpec.shell(3, 1.0, 2.0)
    grid = asympt.geometric_grid(5.0, 200.0, 9)
    serial = negative_spectrum_grid(spec, grid, 3)
    parallel = negative_spectrum_grid(spec, grid, 3, max_workers=4)
    assert serial == parallel
    assert [(r.alpha, r.j) for r in serial] == sorted((r.alpha, r.j) for r in serial)


# properties --------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(nu=st.integers(2, 5), R=st.floats(0.3, 3.0), lam=st.floats(0.2, 5.0),
       alpha=st.floats(1.0, 100.0))
def test_scaling_law(nu, R, lam, alpha):
    lhs = energies(ball_negative_spectrum(nu, lam * R, alpha, 3))
    rhs = energies(ball_negative_spectrum(nu, R, lam * alpha, 3)) / lam ** 2
    assert len(lhs) == len(rhs)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


@settings(max_examples=20, deadline=None)
@given(lam=st.floats(0.3, 3.0), alpha=st.floats(1.0, 60.0))
def test_shell_scaling_law(lam, alpha):
    lhs = energies(shell_negative_spectrum(3, lam, 2 * lam, alpha, 3))
    rhs = energies(shell_negative_spectrum(3, 1.0, 2.0, lam * alpha, 3)) / lam ** 2
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


@settings(max_examples=40, deadline=None)
@given(nu=st.integers(2, 6), R=st.floats(0.2, 5.0), alpha=st.floats(1e-3, 300.0))
def test_ground_state_below_minus_alpha_squared(nu, R, alpha):
    res = ball_negative_spectrum(nu, R, alpha, 1)
    assert len(res) == 1 and res[0].E < -alpha ** 2


@settings(max_examples=30, deadline=None)
@given(nu=st.integers(2, 4), alpha=st.floats(1.0, 200.0))
def test_nondecreasing_in_j(nu, alpha):
    for res in (ball_negative_spectrum(nu, 1.0, alpha, 6),
                shell_negative_spectrum(nu, 1.0, 1.5, alpha, 6)):
        assert np.all(np.diff(energies(res)) >= 0)
        assert all(r.E < 0 for r in res)


def test_large_alpha_no_overflow():
    E = ball_negative_spectrum(3, 1.0, 5000.0, 2)
    assert all(math.isfinite(r.E) for r in E)
    assert E[0].E + 5000.0 ** 2 + 2 * 5000.0 == pytest.approx(0.0, abs=5.0)
