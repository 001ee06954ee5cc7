"""Gaussian and even/odd cat states of the trapped ion: wavefunctions and Wigner functions.

All moments derive from the mode function: ``sigma_qq = |eps|^2 / 2``,
``sigma_pp = |eps'|^2 / 2``, ``sigma_pq = Re(eps* eps') / 2``, and for a
coherent amplitude ``alpha`` the means are ``<q> = sqrt(2) Re(alpha eps*)``,
``<p> = sqrt(2) Re(alpha eps'*)``.  Wigner functions follow the convention
``integral W dq dp = 2 pi`` per mode, so every tomographic marginal built from
them is a unit-normalized probability density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from . import _container
from .errors import InvalidTrajectoryError, NormalizationDivergenceError
from .oscillator import WRONSKIAN_ATOL, SymplecticMap

__all__ = [
    "GaussianState",
    "CatSpec",
    "MultimodeCatSpec",
    "WignerGrid",
    "gaussian_from_epsilon",
    "schroedinger_relation_check",
    "eval_wavefunction",
    "wigner_gaussian",
    "wigner_cat",
    "evolve_wigner",
]

#: Largest supported number-state index; the normalized-Hermite recurrence is
#: overflow-safe up to (at least) this order.
MAX_NUMBER_INDEX = 200

Parity = Literal["even", "odd"]


def _check_wronskian(eps: complex, deps: complex) -> tuple[complex, complex]:
    eps = complex(eps)
    deps = complex(deps)
    w = (np.conj(eps) * deps).imag
    if abs(w - 1.0) >= WRONSKIAN_ATOL:
        raise InvalidTrajectoryError(f"Im(eps* deps) = {w!r} violates the Wronskian invariant")
    return eps, deps


@dataclass(frozen=True)
class GaussianState:
    """Quadrature means and dispersion matrix of a one-mode Gaussian state.

    Attributes
    ----------
    mean_p, mean_q : float
        First moments ``<p>``, ``<q>``.
    sigma_pp, sigma_qq, sigma_pq : float
        Second central moments; the dispersion matrix must be positive
        definite (``sigma_pp, sigma_qq > 0`` and ``d > 0``).
    """

    mean_p: float = 0.0
    mean_q: float = 0.0
    sigma_pp: float = 0.5
    sigma_qq: float = 0.5
    sigma_pq: float = 0.0

    def __post_init__(self) -> None:
        if not (self.sigma_pp > 0.0 and self.sigma_qq > 0.0):
            raise ValueError("sigma_pp and sigma_qq must be positive")
        if not (self.d > 0.0):
            raise ValueError(f"dispersion determinant d = {self.d} must be positive")

    @property
    def T(self) -> float:
        """Trace invariant sigma_pp + sigma_qq."""
        return self.sigma_pp + self.sigma_qq

    @property
    def d(self) -> float:
        """Determinant invariant sigma_pp sigma_qq - sigma_pq^2; 1/4 for pure states."""
        return self.sigma_pp * self.sigma_qq - self.sigma_pq ** 2

    @property
    def is_pure(self) -> bool:
        return abs(self.d - 0.25) < 1e-10


@dataclass(frozen=True)
class CatSpec:
    """One-mode even/odd coherent superposition |alpha> +/- |-alpha>."""

    alpha: complex
    parity: Parity

    def __post_init__(self) -> None:
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.parity == "odd" and abs(self.alpha) == 0.0:
            raise NormalizationDivergenceError("odd cat normalization diverges at alpha = 0")

    @property
    def norm_squared(self) -> float:
        """N^2 = exp(|alpha|^2) / (4 cosh|alpha|^2) (even) or sinh (odd)."""
        a2 = abs(self.alpha) ** 2
        den = math.cosh(a2) if self.parity == "even" else math.sinh(a2)
        return math.exp(a2) / (4.0 * den)


@dataclass(frozen=True)
class MultimodeCatSpec:
    """n-mode even/odd coherent superposition |A> +/- |-A>, A = (alpha_1..alpha_n)."""

    alphas: tuple[complex, ...]
    parity: Parity

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))
        if len(self.alphas) == 0:
            raise ValueError("at least one mode required")
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.parity == "odd" and self.amp_squared == 0.0:
            raise NormalizationDivergenceError("odd cat normalization diverges at A = 0")

    @property
    def n_modes(self) -> int:
        return len(self.alphas)

    @property
    def amp_squared(self) -> float:
        """|A|^2 = sum |alpha_i|^2."""
        return float(sum(abs(a) ** 2 for a in self.alphas))

    @property
    def norm_squared(self) -> float:
        a2 = self.amp_squared
        den = math.cosh(a2) if self.parity == "even" else math.sinh(a2)
        return math.exp(a2) / (4.0 * den)


def gaussian_from_epsilon(eps: complex, deps: complex, alpha: complex = 0j) -> GaussianState:
    """Gaussian state carried by the mode function at one instant.

    Parameters
    ----------
    eps, deps : complex
        Mode function value and derivative; must satisfy the Wronskian
        invariant within 1e-6.
    alpha : complex
        Coherent amplitude (0 for the squeezed ground state).

    Returns
    -------
    GaussianState
        Pure state with d = 1/4 up to rounding.
    """
    eps, deps = _check_wronskian(eps, deps)
    alpha = complex(alpha)
    sq2 = math.sqrt(2.0)
    return GaussianState(
        mean_p=sq2 * (alpha * np.conj(deps)).real,
        mean_q=sq2 * (alpha * np.conj(eps)).real,
        sigma_pp=abs(deps) ** 2 / 2.0,
        sigma_qq=abs(eps) ** 2 / 2.0,
        sigma_pq=(np.conj(eps) * deps).real / 2.0,
    )


def schroedinger_relation_check(state: GaussianState) -> tuple[float, float]:
    """Correlation coefficient and minimization residual of the uncertainty relation.

    Returns ``(r, residual)`` with ``r = sigma_pq / sqrt(sigma_qq sigma_pp)``
    and ``residual = |sigma_qq sigma_pp - (1/4)/(1 - r^2)|``.  The residual
    vanishes exactly for states that minimize the relation, which includes
    every output of :func:`gaussian_from_epsilon`.
    """
    r = state.sigma_pq / math.sqrt(state.sigma_qq * state.sigma_pp)
    residual = abs(state.sigma_qq * state.sigma_pp - 0.25 / (1.0 - r ** 2))
    return r, residual


def _hermite_orthonormal(m: int, xi: np.ndarray) -> np.ndarray:
    """h_m(xi) = H_m(xi) / (2^{m/2} sqrt(m!)), via the stable three-term recurrence."""
    h_prev = np.zeros_like(xi)
    h = np.ones_like(xi)
    for k in range(1, m + 1):
        h, h_prev = xi * math.sqrt(2.0 / k) * h - math.sqrt((k - 1) / k) * h_prev, h
    return h


def eval_wavefunction(
    kind: str,
    eps: complex,
    deps: complex,
    x,
    *,
    alpha: complex = 0j,
    m: int = 0,
    cat: CatSpec | None = None,
) -> np.ndarray:
    """Position wavefunction Psi(x) at one instant of the mode function.

    Parameters
    ----------
    kind : {'ground', 'coherent', 'number', 'cat'}
        Family selector.  'coherent' uses ``alpha``, 'number' uses ``m``,
        'cat' uses ``cat``.
    eps, deps : complex
        Mode function value and derivative (Wronskian-valid).
    x : array_like
        Evaluation points.

    Returns
    -------
    ndarray of complex
        Psi(x); unit L2 norm for every kind.
    """
    eps, deps = _check_wronskian(eps, deps)
    x = np.asarray(x, dtype=float)

    # common squeezed-vacuum envelope pi^{-1/4} eps^{-1/2} exp(i deps x^2 / (2 eps))
    psi0 = math.pi ** -0.25 / np.sqrt(eps) * np.exp(0.5j * deps / eps * x ** 2)

    if kind == "ground":
        return psi0
    if kind == "coherent":
        alpha = complex(alpha)
        a2 = abs(alpha) ** 2
        return psi0 * np.exp(-a2 / 2.0 - alpha ** 2 * np.conj(eps) / (2.0 * eps)
                             + math.sqrt(2.0) * alpha * x / eps)
    if kind == "number":
        if not (0 <= m <= MAX_NUMBER_INDEX):
            raise ValueError(f"number index must be in [0, {MAX_NUMBER_INDEX}], got {m}")
        phase = (np.conj(eps) / eps) ** (m / 2.0)
        return phase * _hermite_orthonormal(m, x / abs(eps)) * psi0
    if kind == "cat":
        if cat is None:
            raise ValueError("kind='cat' requires a CatSpec")
        alpha = complex(cat.alpha)
        a2 = abs(alpha) ** 2
        norm = math.exp(a2 / 2.0) / (2.0 * math.sqrt(
            math.cosh(a2) if cat.parity == "even" else math.sinh(a2)))
        hyp = np.cosh if cat.parity == "even" else np.sinh
        return (2.0 * norm * psi0
                * np.exp(-a2 / 2.0 - np.conj(eps) * alpha ** 2 / (2.0 * eps))
                * hyp(math.sqrt(2.0) * alpha * x / eps))
    raise ValueError(f"unknown wavefunction kind {kind!r}")


def wigner_gaussian(state: GaussianState, q, p):
    """Gaussian Wigner function (2 pi convention).

    W = d^{-1/2} exp( -[sigma_qq (p-<p>)^2 + sigma_pp (q-<q>)^2
                        - 2 sigma_pq (p-<p>)(q-<q>)] / (2d) ), strictly positive.
    """
    dq = np.asarray(q, dtype=float) - state.mean_q
    dp = np.asarray(p, dtype=float) - state.mean_p
    d = state.d
    quad = state.sigma_qq * dp ** 2 + state.sigma_pp * dq ** 2 - 2.0 * state.sigma_pq * dp * dq
    return np.exp(-quad / (2.0 * d)) / math.sqrt(d)


def _wab(A: np.ndarray, B: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Coherent-pair Wigner kernel W_{A,B}(Z), modes summed over the last axis.

    W_{A,B} = 2^n exp(-2 Z Z* + 2 A Z* + 2 B* Z - A B* - |A|^2/2 - |B|^2/2)
    """
    n = Z.shape[-1]
    expo = (-2.0 * Z * np.conj(Z) + 2.0 * A * np.conj(Z) + 2.0 * np.conj(B) * Z
            - A * np.conj(B) - np.abs(A) ** 2 / 2.0 - np.abs(B) ** 2 / 2.0)
    return 2.0 ** n * np.exp(expo.sum(axis=-1))


def wigner_cat(spec: MultimodeCatSpec | CatSpec, q, p):
    """Wigner function of an n-mode even/odd cat at phase-space points.

    Parameters
    ----------
    spec : MultimodeCatSpec or CatSpec
        A one-mode CatSpec is promoted to n=1.
    q, p : array_like
        Mode coordinates; the last axis (or scalars for n=1) runs over modes.

    Returns
    -------
    ndarray of float
        Real value; the two interference terms are complex conjugates, so the
        imaginary part cancels identically.  May be negative; the odd cat has
        W(0) = -2 for one mode.
    """
    if isinstance(spec, CatSpec):
        spec = MultimodeCatSpec(alphas=(spec.alpha,), parity=spec.parity)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if spec.n_modes == 1 and (q.ndim == 0 or q.shape[-1] != 1):
        q = q[..., np.newaxis]
        p = p[..., np.newaxis]
    if q.shape[-1] != spec.n_modes:
        raise ValueError(f"expected {spec.n_modes} mode coordinates, got {q.shape[-1]}")

    Z = (q + 1j * p) / math.sqrt(2.0)
    A = np.asarray(spec.alphas)
    sign = 1.0 if spec.parity == "even" else -1.0
    total = (_wab(A, A, Z) + _wab(-A, -A, Z)
             + sign * (_wab(A, -A, Z) + _wab(-A, A, Z)))
    return spec.norm_squared * np.real(total)


def evolve_wigner(initial: Callable, smap: SymplecticMap, q, p):
    """Time-evolved Wigner value: the initial function at the mapped point.

    ``initial`` is any evaluator ``W0(q, p)``; the map sends the query point
    back along the classical flow (no shift term: the trap Hamiltonian has no
    linear force).
    """
    p0, q0 = smap.apply(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    return initial(q0, p0)


def _uniform_spacing(axis: np.ndarray, name: str) -> float:
    if axis.ndim != 1 or axis.size < 2:
        raise ValueError(f"{name} must be 1-D with at least 2 points")
    steps = np.diff(axis)
    h = steps[0]
    if h <= 0 or not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise ValueError(f"{name} must be uniformly increasing")
    return float(h)


@dataclass(frozen=True)
class WignerGrid:
    """One-mode Wigner function sampled on a uniform rectangular (q, p) grid.

    ``values[i, j] = W(q_axis[i], p_axis[j])`` under the 2 pi normalization
    convention.  Immutable; construction validates axis uniformity and
    finiteness.
    """

    q_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    dq: float = field(init=False)
    dp: float = field(init=False)

    def __post_init__(self) -> None:
        q = np.asarray(self.q_axis, dtype=float)
        p = np.asarray(self.p_axis, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "q_axis", q)
        object.__setattr__(self, "p_axis", p)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "dq", _uniform_spacing(q, "q_axis"))
        object.__setattr__(self, "dp", _uniform_spacing(p, "p_axis"))
        if v.shape != (q.size, p.size):
            raise ValueError(f"values shape {v.shape} does not match axes ({q.size}, {p.size})")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")

    @classmethod
    def from_evaluator(cls, evaluator: Callable, q_axis, p_axis) -> "WignerGrid":
        """Sample ``evaluator(q, p)`` on the tensor grid (serial, deterministic)."""
        q_axis = np.asarray(q_axis, dtype=float)
        p_axis = np.asarray(p_axis, dtype=float)
        Q, P = np.meshgrid(q_axis, p_axis, indexing="ij")
        return cls(q_axis=q_axis, p_axis=p_axis, values=np.asarray(evaluator(Q, P), dtype=float))

    def integral(self) -> float:
        """Trapezoid estimate of (integral W dq dp) / 2 pi; 1 when support is captured."""
        wq = np.full(self.q_axis.size, self.dq)
        wq[[0, -1]] *= 0.5
        wp = np.full(self.p_axis.size, self.dp)
        wp[[0, -1]] *= 0.5
        return float(wq @ self.values @ wp) / (2.0 * math.pi)

    def interpolate(self, q, p):
        """Catmull-Rom bicubic interpolation; 0 outside the grid.

        Error is O(h^4) for smooth data, which keeps grid-backed projections
        usable as oracles at desk tolerances.
        """
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        q, p = np.broadcast_arrays(q, p)
        nq, npp = self.values.shape

        sq = (q - self.q_axis[0]) / self.dq
        sp = (p - self.p_axis[0]) / self.dp
        inside = (sq >= 0.0) & (sq <= nq - 1.0) & (sp >= 0.0) & (sp <= npp - 1.0)
        sq = np.where(inside, sq, 0.0)
        sp = np.where(inside, sp, 0.0)
        iq = np.minimum(sq.astype(int), nq - 2)
        ip = np.minimum(sp.astype(int), npp - 2)
        tq = sq - iq
        tp = sp - ip

        # zero-padded by one ring so the 4-point stencil never leaves the array
        padded = np.zeros((nq + 2, npp + 2))
        padded[1:-1, 1:-1] = self.values

        wq = _catmull_rom_weights(tq)
        wp = _catmull_rom_weights(tp)
        out = np.zeros_like(sq)
        for a in range(4):
            row = np.zeros_like(sq)
            for b in range(4):
                row += wp[b] * padded[iq + a, ip + b]
            out += wq[a] * row
        return np.where(inside, out, 0.0)

    def save(self, path: str, fmt: str = "csv") -> None:
        """Write as CSV rows ``q,p,w`` or as the JSON+binary container."""
        if fmt == "csv":
            _container.save_csv_triples(path, ("q", "p", "w"), self.q_axis, self.p_axis, self.values)
        elif fmt == "bin":
            _container.save_container(path, "wigner", ["q", "p"], [self.q_axis, self.p_axis], self.values)
        else:
            raise ValueError(f"unknown format {fmt!r}")

    @staticmethod
    def load(path: str) -> "WignerGrid":
        if _container.is_container(path):
            kind, axes, values = _container.load_container(path)
            if kind != "wigner":
                raise ValueError(f"{path}: container holds {kind!r}, not a Wigner grid")
            q_axis, p_axis = axes
        else:
            q_axis, p_axis, values = _container.load_csv_triples(path, ("q", "p", "w"))
        return WignerGrid(q_axis=q_axis, p_axis=p_axis, values=values)


def _catmull_rom_weights(t: np.ndarray) -> list[np.ndarray]:
    t2 = t * t
    t3 = t2 * t
    return [
        -0.5 * t3 + t2 - 0.5 * t,
        1.5 * t3 - 2.5 * t2 + 1.0,
        -1.5 * t3 + 2.0 * t2 + 0.5 * t,
        0.5 * t3 - 0.5 * t2,
    ]
