"""Classical mode function of the trapped ion and its linear integrals of motion.

The ion motion is modelled as a parametric oscillator with dimensionless
frequency ``omega^2(t) = 1 + kappa^2 sin^2(Omega t)`` (units with
``hbar = m = omega(0) = 1``).  Everything downstream is built from the complex
mode function ``eps(t)`` solving

    eps'' + omega^2(t) eps = 0,   eps(0) = 1,   eps'(0) = 1j,

whose Wronskian ``Im(eps* eps') = 1`` is conserved exactly by the flow and is
the symplecticity certificate for all derived maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTrajectoryError, SolverError

__all__ = [
    "OscillatorParams",
    "EpsilonTrajectory",
    "SymplecticMap",
    "omega_squared",
    "solve_epsilon",
    "epsilon_at",
    "symplectic_map",
]

#: Wronskian slack accepted when building maps from externally supplied points.
WRONSKIAN_ATOL = 1e-6

#: Default local-error target for :func:`solve_epsilon`.
DEFAULT_TOL = 1e-9

#: Steps per unit time when the caller does not fix ``n_steps``.
_STEPS_PER_UNIT_TIME = 2000

#: Hard floor on the RK4 step size; below this the tolerance is unreachable.
_MIN_STEP = 1e-12


@dataclass(frozen=True)
class OscillatorParams:
    """Trap drive parameters.

    Parameters
    ----------
    kappa : float
        Dimensionless drive strength, ``kappa >= 0``.
    omega_drive : float
        Dimensionless drive frequency ``Omega > 0`` in units of the static
        trap frequency.
    """

    kappa: float
    omega_drive: float

    def __post_init__(self) -> None:
        if not (self.kappa >= 0.0):
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if not (self.omega_drive > 0.0):
            raise ValueError(f"omega_drive must be > 0, got {self.omega_drive}")


def omega_squared(t, params: OscillatorParams):
    """Squared trap frequency ``1 + kappa^2 sin^2(Omega t)``.

    Accepts scalar or array ``t``; the result is always >= 1.
    """
    s = np.sin(params.omega_drive * np.asarray(t, dtype=float))
    return 1.0 + (params.kappa * s) ** 2


@dataclass(frozen=True)
class EpsilonTrajectory:
    """Densely sampled mode function on a uniform time grid.

    Attributes
    ----------
    params : OscillatorParams
        Drive that generated the trajectory.
    times : ndarray
        Strictly increasing samples starting at 0.
    eps, deps : ndarray of complex
        ``eps(t_i)`` and ``eps'(t_i)``.
    """

    params: OscillatorParams
    times: np.ndarray
    eps: np.ndarray
    deps: np.ndarray

    def wronskian(self) -> np.ndarray:
        """``Im(eps* eps')`` at every sample; identically 1 for the exact flow."""
        return np.imag(np.conj(self.eps) * self.deps)

    def at(self, t: float) -> tuple[complex, complex]:
        """Linearly interpolated ``(eps, deps)`` at time ``t``.

        Interpolation error is O(h^2) in the sample spacing; invariants are
        only guaranteed at the samples themselves.  Use :func:`epsilon_at`
        when an off-grid point is needed at solver accuracy.
        """
        t = float(t)
        if t < self.times[0] or t > self.times[-1]:
            raise ValueError(f"t={t} outside trajectory range [{self.times[0]}, {self.times[-1]}]")
        e_re = np.interp(t, self.times, self.eps.real)
        e_im = np.interp(t, self.times, self.eps.imag)
        d_re = np.interp(t, self.times, self.deps.real)
        d_im = np.interp(t, self.times, self.deps.imag)
        return complex(e_re, e_im), complex(d_re, d_im)


def _rk4(params: OscillatorParams, t_end: float, n_steps: int):
    """Classic fixed-step RK4 over the complexified system (eps, eps')."""
    t = np.linspace(0.0, t_end, n_steps + 1)
    h = t_end / n_steps
    eps = np.empty(n_steps + 1, dtype=complex)
    deps = np.empty(n_steps + 1, dtype=complex)
    eps[0] = 1.0
    deps[0] = 1.0j

    k2 = params.kappa ** 2
    om = params.omega_drive

    def f(ti, y0, y1):
        w2 = 1.0 + k2 * math.sin(om * ti) ** 2
        return y1, -w2 * y0

    y0, y1 = eps[0], deps[0]
    for i in range(n_steps):
        ti = t[i]
        a0, a1 = f(ti, y0, y1)
        b0, b1 = f(ti + h / 2, y0 + h / 2 * a0, y1 + h / 2 * a1)
        c0, c1 = f(ti + h / 2, y0 + h / 2 * b0, y1 + h / 2 * b1)
        d0, d1 = f(ti + h, y0 + h * c0, y1 + h * c1)
        y0 = y0 + h / 6 * (a0 + 2 * b0 + 2 * c0 + d0)
        y1 = y1 + h / 6 * (a1 + 2 * b1 + 2 * c1 + d1)
        eps[i + 1] = y0
        deps[i + 1] = y1
    return t, eps, deps


def solve_epsilon(
    params: OscillatorParams,
    t_end: float,
    n_steps: int | None = None,
    tol: float = DEFAULT_TOL,
) -> EpsilonTrajectory:
    """Integrate the mode equation on ``[0, t_end]``.

    Parameters
    ----------
    params : OscillatorParams
    t_end : float
        Final time, > 0.
    n_steps : int, optional
        Number of uniform RK4 steps.  Defaults to 2000 per unit time (at
        least 1000), which holds the Wronskian near machine precision for
        moderate ``kappa * Omega``; large products need finer grids.
    tol : float
        Accuracy target.  The Wronskian drift is required to stay below
        ``10 * tol``; if it does not, the step count is doubled and the
        integration retried.

    Returns
    -------
    EpsilonTrajectory

    Raises
    ------
    SolverError
        If the tolerance remains unreachable down to the step-size floor.
    """
    if not (t_end > 0.0):
        raise ValueError(f"t_end must be > 0, got {t_end}")
    if not (tol > 0.0):
        raise ValueError(f"tol must be > 0, got {tol}")
    if n_steps is None:
        n_steps = max(1000, math.ceil(_STEPS_PER_UNIT_TIME * t_end))
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps}")

    gate = 10.0 * tol
    while True:
        t, eps, deps = _rk4(params, t_end, n_steps)
        drift = np.max(np.abs(np.imag(np.conj(eps) * deps) - 1.0))
        if drift <= gate:
            return EpsilonTrajectory(params=params, times=t, eps=eps, deps=deps)
        if t_end / (2 * n_steps) < _MIN_STEP:
            raise SolverError(
                f"Wronskian drift {drift:.3e} exceeds gate {gate:.3e} at the "
                f"step-size floor (n_steps={n_steps}); tolerance unreachable"
            )
        n_steps *= 2


def epsilon_at(params: OscillatorParams, t: float, tol: float = DEFAULT_TOL) -> tuple[complex, complex]:
    """``(eps, deps)`` at a single time, with the sample landing exactly on ``t``.

    Used where interpolation error is not acceptable, e.g. finite-difference
    stencils in the verification harness.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0.0:
        return 1.0 + 0.0j, 1.0j
    traj = solve_epsilon(params, t_end=t, tol=tol)
    return complex(traj.eps[-1]), complex(traj.deps[-1])


@dataclass(frozen=True)
class SymplecticMap:
    """Linear integral-of-motion map built from one (eps, deps) point.

    ``apply`` sends a phase-space point observed at the current time to the
    initial point of the classical trajectory through it:

        p0 = lam_pp * p + lam_pq * q
        q0 = lam_qp * p + lam_qq * q

    ``frame`` propagates tomographic frame parameters forward in time:

        mu(t) = Re(deps) * nu + Re(eps) * mu
        nu(t) = Im(deps) * nu + Im(eps) * mu

    Both share the four stored entries; the determinant equals the Wronskian
    ``Im(eps* deps)`` and is 1 for any valid trajectory point.
    """

    lam_pp: float
    lam_pq: float
    lam_qp: float
    lam_qq: float

    @property
    def det(self) -> float:
        return self.lam_pp * self.lam_qq - self.lam_pq * self.lam_qp

    def apply(self, p, q):
        """Initial-point coordinates (p0, q0) for current-time (p, q)."""
        p0 = self.lam_pp * p + self.lam_pq * q
        q0 = self.lam_qp * p + self.lam_qq * q
        return p0, q0

    def frame(self, mu, nu):
        """Time-evolved frame parameters (mu_t, nu_t)."""
        mu_t = self.lam_pp * mu - self.lam_pq * nu
        nu_t = -self.lam_qp * mu + self.lam_qq * nu
        return mu_t, nu_t


def symplectic_map(eps: complex, deps: complex) -> SymplecticMap:
    """Build the integral-of-motion map from a mode-function sample.

    Raises
    ------
    InvalidTrajectoryError
        If ``|Im(eps* deps) - 1| >= 1e-6`` (not a valid trajectory point).
    """
    eps = complex(eps)
    deps = complex(deps)
    w = (np.conj(eps) * deps).imag
    if abs(w - 1.0) >= WRONSKIAN_ATOL:
        raise InvalidTrajectoryError(
            f"Im(eps* deps) = {w!r} violates the Wronskian invariant"
        )
    return SymplecticMap(
        lam_pp=eps.real,
        lam_pq=-deps.real,
        lam_qp=-eps.imag,
        lam_qq=deps.imag,
    )
