"""Mode-function solver, Wronskian conservation, and the integral-of-motion map."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iontomo import (
    InvalidTrajectoryError,
    OscillatorParams,
    SolverError,
    epsilon_at,
    omega_squared,
    solve_epsilon,
    symplectic_map,
)

PARAMS04 = OscillatorParams(kappa=0.4, omega_drive=2.0)

# Frozen output of an independent high-order integrator (DOP853 at
# rtol=atol=1e-12) for kappa=0.4, Omega=2 at t=10.  Regenerated by
# test_frozen_reference_reproducible_by_scipy when scipy is available.
EPS_AT_10 = -0.5705545107619477 - 0.7926747852266474j
DEPS_AT_10 = 0.8485518880469056 - 0.5737827117542950j


@pytest.mark.parametrize(
    "t, kappa, omega, expected",
    [
        (0.0, 0.5, 2.0, 1.0),
        (1.7, 0.0, 3.0, 1.0),
        (math.pi / 4, 1.0, 1.0, 1.5),
    ],
)
def test_omega_squared_values(t, kappa, omega, expected):
    params = OscillatorParams(kappa=kappa, omega_drive=omega)
    assert omega_squared(t, params) == pytest.approx(expected, abs=1e-14)


def test_omega_squared_vectorized_and_bounded_below():
    t = np.linspace(0.0, 30.0, 500)
    w2 = omega_squared(t, OscillatorParams(kappa=1.3, omega_drive=2.7))
    assert w2.shape == t.shape
    assert np.all(w2 >= 1.0)


@pytest.mark.parametrize("kappa, omega", [(-0.1, 1.0), (0.5, 0.0), (0.5, -2.0)])
def test_params_validation(kappa, omega):
    with pytest.raises(ValueError):
        OscillatorParams(kappa=kappa, omega_drive=omega)


def test_initial_conditions(traj04):
    assert traj04.times[0] == 0.0
    assert traj04.eps[0] == 1.0 + 0.0j
    assert traj04.deps[0] == 1.0j


@pytest.mark.parametrize("kappa, omega", [(0.0, 1.0), (0.4, 2.0), (1.0, 2.0)])
def test_wronskian_conserved(kappa, omega):
    traj = solve_epsilon(OscillatorParams(kappa=kappa, omega_drive=omega), t_end=20.0)
    assert np.max(np.abs(traj.wronskian() - 1.0)) <= 1e-8


def test_static_trap_closed_form():
    traj = solve_epsilon(OscillatorParams(kappa=0.0, omega_drive=1.0), t_end=20.0)
    exact = np.exp(1j * traj.times)
    assert np.max(np.abs(traj.eps - exact)) <= 1e-8
    assert np.max(np.abs(traj.deps - 1j * exact)) <= 1e-8


def test_matches_frozen_reference(traj04):
    assert abs(traj04.eps[-1] - EPS_AT_10) <= 1e-10
    assert abs(traj04.deps[-1] - DEPS_AT_10) <= 1e-10


def test_frozen_reference_reproducible_by_scipy():
    integrate = pytest.importorskip("scipy.integrate")

    def rhs(t, y):
        w2 = 1.0 + (0.4 * math.sin(2.0 * t)) ** 2
        return [y[1], -w2 * y[0]]

    sol = integrate.solve_ivp(
        rhs, (0.0, 10.0), [1.0 + 0.0j, 1.0j], method="DOP853", rtol=1e-12, atol=1e-12
    )
    assert abs(sol.y[0, -1] - EPS_AT_10) <= 1e-9
    assert abs(sol.y[1, -1] - DEPS_AT_10) <= 1e-9


def test_grid_refinement_fourth_order():
    # endpoint error against a much finer run must drop ~2^4 per halving
    params = OscillatorParams(kappa=1.0, omega_drive=2.0)
    ref = solve_epsilon(params, t_end=5.0, n_steps=16000).eps[-1]
    e_coarse = abs(solve_epsilon(params, t_end=5.0, n_steps=500).eps[-1] - ref)
    e_fine = abs(solve_epsilon(params, t_end=5.0, n_steps=1000).eps[-1] - ref)
    order = math.log2(e_coarse / e_fine)
    assert 3.5 <= order <= 4.5


def test_epsilon_at_zero_is_exact():
    assert epsilon_at(PARAMS04, 0.0) == (1.0 + 0.0j, 1.0j)


def test_epsilon_at_matches_endpoint(traj04):
    eps, deps = epsilon_at(traj04.params, 10.0)
    assert eps == complex(traj04.eps[-1])
    assert deps == complex(traj04.deps[-1])


def test_at_interpolates_between_samples(traj04):
    h = float(traj04.times[1] - traj04.times[0])
    t_mid = float(traj04.times[500]) + 0.5 * h
    eps_i, deps_i = traj04.at(t_mid)
    eps_x, deps_x = epsilon_at(traj04.params, t_mid)
    assert abs(eps_i - eps_x) <= 1e-6  # linear interpolation, O(h^2)
    assert abs(deps_i - deps_x) <= 1e-6
    eps_s, deps_s = traj04.at(float(traj04.times[700]))
    assert eps_s == complex(traj04.eps[700])
    assert deps_s == complex(traj04.deps[700])


def test_at_outside_range_raises(traj04):
    with pytest.raises(ValueError):
        traj04.at(10.5)
    with pytest.raises(ValueError):
        traj04.at(-0.1)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"t_end": 0.0},
        {"t_end": -1.0},
        {"t_end": 1.0, "tol": 0.0},
        {"t_end": 1.0, "n_steps": 1},
    ],
)
def test_solve_epsilon_rejects_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        solve_epsilon(PARAMS04, **kwargs)


def test_solver_error_when_tolerance_unreachable():
    # roundoff keeps the Wronskian drift near 1e-14 here, far above a 1e-30
    # target, and the step size already sits at the refinement floor
    with pytest.raises(SolverError):
        solve_epsilon(PARAMS04, t_end=1e-7, n_steps=60001, tol=1e-30)


def test_identity_map_at_t0():
    smap = symplectic_map(1.0 + 0.0j, 1.0j)
    assert smap.apply(0.7, -1.3) == (0.7, -1.3)
    assert smap.frame(0.4, 2.0) == (0.4, 2.0)
    assert smap.det == pytest.approx(1.0, abs=1e-15)


def test_quarter_period_rotation():
    # kappa=0 at t=pi/2: eps=i, deps=-1; the backward map is the quarter-turn
    smap = symplectic_map(1.0j, -1.0 + 0.0j)
    p0, q0 = smap.apply(0.0, 1.0)
    assert (p0, q0) == pytest.approx((1.0, 0.0), abs=1e-15)
    p0, q0 = smap.apply(1.0, 0.0)
    assert (p0, q0) == pytest.approx((0.0, -1.0), abs=1e-15)
    assert smap.det == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=20000))
def test_map_determinant_one_along_trajectory(traj04, i):
    smap = symplectic_map(traj04.eps[i], traj04.deps[i])
    assert abs(smap.det - 1.0) <= 1e-10


def test_invalid_trajectory_point_rejected():
    with pytest.raises(InvalidTrajectoryError):
        symplectic_map(1.0 + 0.0j, 2.0j)
