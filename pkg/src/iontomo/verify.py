"""Finite-difference verification of the tomogram evolution law and moment dynamics.

The evolved tomogram of the trapped ion must satisfy the first-order equation

    dw/dt - mu dw/dnu + omega^2(t) nu dw/dmu = 0

for any state.  This harness measures central-difference residuals of that
equation on probe grids, checks the Ehrenfest/variance ODEs of the Gaussian
moments, and recomputes Gaussian moments by wavefunction quadrature as an
independent oracle.  Mode-function values at stencil times are re-solved
exactly (never interpolated) so discretization of the trajectory cannot leak
into the residuals.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .oscillator import OscillatorParams, EpsilonTrajectory, epsilon_at, omega_squared
from .states import GaussianState, eval_wavefunction, gaussian_from_epsilon
from .tomography import TomogramQuery, evolve_tomogram

__all__ = [
    "ProbeGrid",
    "ResidualReport",
    "pde_residual",
    "moment_odes_check",
    "wavefunction_moment_oracle",
    "replacement_evolution",
    "frozen_frame_evolution",
]


@dataclass(frozen=True)
class ProbeGrid:
    """Probe points and stencil steps for the evolution-equation residual.

    Defaults give a 5x5x5x5 tensor grid over (X, mu, nu, t) with delta probed
    at the exact-covariance representatives {-1, 0, 2}.  The mu range stays
    positive so no stencil point can reach the degenerate frame (0, 0);
    homogeneity makes the mirrored half-plane redundant.
    """

    x_values: tuple = (-2.0, -1.0, 0.0, 1.0, 2.0)
    mu_values: tuple = (0.3, 0.6, 0.9, 1.2, 1.5)
    nu_values: tuple = (-1.2, -0.6, 0.0, 0.6, 1.2)
    t_values: tuple = (0.5, 1.0, 2.0, 4.0, 7.0)
    delta_values: tuple = (-1.0, 0.0, 2.0)
    h_t: float = 1e-3
    h_mu: float = 1e-3
    h_nu: float = 1e-3

    def spec(self) -> dict:
        return {
            "x_values": list(self.x_values),
            "mu_values": list(self.mu_values),
            "nu_values": list(self.nu_values),
            "t_values": list(self.t_values),
            "delta_values": list(self.delta_values),
        }


@dataclass(frozen=True)
class ResidualReport:
    """Residual summary of one verification run."""

    max_abs_residual: float
    rms_residual: float
    h_t: float | None = None
    h_mu: float | None = None
    h_nu: float | None = None
    convergence_order: float | None = None
    grid_spec: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "max_abs_residual": self.max_abs_residual,
            "rms_residual": self.rms_residual,
            "h_t": self.h_t,
            "h_mu": self.h_mu,
            "h_nu": self.h_nu,
            "convergence_order": self.convergence_order,
            "grid_spec": self.grid_spec,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


@lru_cache(maxsize=4096)
def _eps_cached(params: OscillatorParams, t: float) -> tuple[complex, complex]:
    return epsilon_at(params, t)


def replacement_evolution(initial: Callable, params: OscillatorParams) -> Callable:
    """Evolution evaluator (X, mu, nu, delta, t) by frame transport.

    ``initial`` is a t=0 tomogram evaluator (Y, mu, nu).  The mode function is
    solved exactly at each requested t and memoized.
    """
    def evolution(X, mu, nu, delta, t):
        eps, deps = _eps_cached(params, float(t))
        return evolve_tomogram(initial, eps, deps, TomogramQuery(X=X, mu=mu, nu=nu, delta=delta))
    return evolution


def frozen_frame_evolution(initial: Callable) -> Callable:
    """Negative control: ignores t entirely, so the transport terms go unbalanced."""
    def evolution(X, mu, nu, delta, t):
        return initial(np.asarray(X, dtype=float) - np.asarray(delta, dtype=float), mu, nu)
    return evolution


def _residual_samples(evolution: Callable, params: OscillatorParams, probe: ProbeGrid,
                      h_t: float, h_mu: float, h_nu: float) -> np.ndarray:
    X = np.asarray(probe.x_values, dtype=float)[:, np.newaxis]
    delta = np.asarray(probe.delta_values, dtype=float)[np.newaxis, :]
    out = []
    for t in probe.t_values:
        w2 = float(omega_squared(t, params))
        for mu in probe.mu_values:
            for nu in probe.nu_values:
                d_t = (evolution(X, mu, nu, delta, t + h_t)
                       - evolution(X, mu, nu, delta, t - h_t)) / (2.0 * h_t)
                d_nu = (evolution(X, mu, nu + h_nu, delta, t)
                        - evolution(X, mu, nu - h_nu, delta, t)) / (2.0 * h_nu)
                d_mu = (evolution(X, mu + h_mu, nu, delta, t)
                        - evolution(X, mu - h_mu, nu, delta, t)) / (2.0 * h_mu)
                res = d_t - mu * d_nu + w2 * nu * d_mu
                if not np.all(np.isfinite(res)):
                    raise ValueError(f"non-finite residual at t={t}, mu={mu}, nu={nu}")
                out.append(np.abs(res).ravel())
    return np.concatenate(out)


def pde_residual(evolution: Callable, params: OscillatorParams, probe: ProbeGrid | None = None) -> ResidualReport:
    """Central-difference residual of the evolution equation on the probe grid.

    Runs the stencil at the probe steps and again at half steps; the reported
    convergence order is log2 of the rms ratio and should sit near 2.
    """
    if probe is None:
        probe = ProbeGrid()
    res_h = _residual_samples(evolution, params, probe, probe.h_t, probe.h_mu, probe.h_nu)
    res_half = _residual_samples(evolution, params, probe,
                                 probe.h_t / 2.0, probe.h_mu / 2.0, probe.h_nu / 2.0)
    rms = float(np.sqrt(np.mean(res_h ** 2)))
    rms_half = float(np.sqrt(np.mean(res_half ** 2)))
    order = math.log2(rms / rms_half) if rms_half > 0.0 else None
    return ResidualReport(
        max_abs_residual=float(res_h.max()),
        rms_residual=rms,
        h_t=probe.h_t,
        h_mu=probe.h_mu,
        h_nu=probe.h_nu,
        convergence_order=order,
        grid_spec=probe.spec(),
    )


_MOMENT_FRACTIONS = (0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 0.95)


def _moments(params: OscillatorParams, t: float, alpha: complex) -> np.ndarray:
    eps, deps = _eps_cached(params, t)
    s = gaussian_from_epsilon(eps, deps, alpha)
    return np.array([s.mean_q, s.mean_p, s.sigma_qq, s.sigma_pq, s.sigma_pp])


def _moment_residuals(params: OscillatorParams, alpha: complex, t_values, h: float) -> np.ndarray:
    rows = []
    for t in t_values:
        m = _moments(params, t, alpha)
        dm = (_moments(params, t + h, alpha) - _moments(params, t - h, alpha)) / (2.0 * h)
        w2 = float(omega_squared(t, params))
        q, p, sqq, spq, spp = m
        rows.append([
            dm[0] - p,                 # d<q>/dt = <p>
            dm[1] + w2 * q,            # d<p>/dt = -omega^2 <q>
            dm[2] - 2.0 * spq,         # dsigma_qq/dt = 2 sigma_pq
            dm[3] - (spp - w2 * sqq),  # dsigma_pq/dt = sigma_pp - omega^2 sigma_qq
            dm[4] + 2.0 * w2 * spq,    # dsigma_pp/dt = -2 omega^2 sigma_pq
        ])
    return np.abs(np.array(rows))


def moment_odes_check(traj: EpsilonTrajectory, alpha: complex = 0j, *, h: float = 1e-4) -> ResidualReport:
    """Ehrenfest and variance ODE residuals along a solved trajectory.

    Probe times are interior fractions of the trajectory span; moments at the
    stencil points come from exact re-solves, so the residual is pure stencil
    truncation plus solver noise.
    """
    t_end = float(traj.times[-1])
    t_values = [max(h, f * t_end) for f in _MOMENT_FRACTIONS]
    res_h = _moment_residuals(traj.params, complex(alpha), t_values, h)
    res_half = _moment_residuals(traj.params, complex(alpha), t_values, h / 2.0)
    rms = float(np.sqrt(np.mean(res_h ** 2)))
    rms_half = float(np.sqrt(np.mean(res_half ** 2)))
    order = math.log2(rms / rms_half) if rms_half > 0.0 else None
    return ResidualReport(
        max_abs_residual=float(res_h.max()),
        rms_residual=rms,
        h_t=h,
        convergence_order=order,
        grid_spec={"t_values": list(t_values), "alpha": [complex(alpha).real, complex(alpha).imag]},
    )


def wavefunction_moment_oracle(kind: str, eps: complex, deps: complex, alpha: complex = 0j) -> GaussianState:
    """Gaussian moments recomputed by quadrature over the wavefunction.

    Position moments integrate |Psi|^2 directly; momentum moments use the
    analytic derivative of the closed-form exponent,
    Psi' = (i deps x / eps + sqrt(2) alpha / eps) Psi, never a finite
    difference.  Only the Gaussian family is supported.
    """
    if kind not in ("ground", "coherent"):
        raise ValueError(f"moment oracle supports 'ground' and 'coherent', got {kind!r}")
    eps = complex(eps)
    deps = complex(deps)
    alpha = complex(alpha) if kind == "coherent" else 0j

    sigma_q = abs(eps) / math.sqrt(2.0)
    center = math.sqrt(2.0) * (alpha * np.conj(eps)).real
    x = np.linspace(center - 12.0 * sigma_q, center + 12.0 * sigma_q, 4001)
    dx = x[1] - x[0]
    w = np.full(x.size, dx)
    w[[0, -1]] *= 0.5

    psi = eval_wavefunction(kind, eps, deps, x, alpha=alpha)
    dpsi = (1j * deps * x / eps + math.sqrt(2.0) * alpha / eps) * psi
    prob = np.abs(psi) ** 2
    if max(prob[0], prob[-1]) > 1e-14 * prob.max():
        raise RuntimeError("quadrature window does not capture the wavefunction support")

    norm = float(prob @ w)
    mean_q = float((x * prob) @ w) / norm
    sigma_qq = float(((x - mean_q) ** 2 * prob) @ w) / norm
    mean_p = float(np.real(np.conj(psi) * (-1j) * dpsi @ w)) / norm
    p2 = float(np.abs(dpsi) ** 2 @ w) / norm
    corr = np.conj(psi) * x * dpsi
    # <(qp + pq)/2> = Re(-i (integral psi* x psi' dx + 1/2))
    sym = float(np.real(-1j * (complex(corr @ w) + 0.5 * norm))) / norm
    return GaussianState(
        mean_p=mean_p,
        mean_q=mean_q,
        sigma_pp=p2 - mean_p ** 2,
        sigma_qq=sigma_qq,
        sigma_pq=sym - mean_q * mean_p,
    )
