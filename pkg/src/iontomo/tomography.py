"""Symplectic tomograms: analytic marginals, time evolution, projection, inversion.

A tomogram w(X, mu, nu, delta) is the probability density of the quadrature
X = mu q + nu p + delta.  Only Y = X - delta matters (exact shift covariance),
and scaling (Y, mu, nu) by lambda rescales the density by 1/|lambda|
(homogeneity), so the optical restriction mu = cos(phi), nu = sin(phi),
delta = 0 already determines the full tomogram.

Evolution never solves a PDE here: frame parameters are transported along the
classical mode function, w(X, mu, nu, t) = w0(X - delta, mu(t), nu(t)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import _container
from .errors import (
    DegenerateFrameError,
    InsufficientAnglesError,
    ReconstructionQualityError,
    SupportTruncationWarning,
)
from .oscillator import symplectic_map
from .states import CatSpec, GaussianState, WignerGrid

__all__ = [
    "TomogramQuery",
    "GaussianTomogram",
    "OpticalSinogram",
    "tomogram_gaussian",
    "tomogram_cat",
    "cat_evaluator",
    "evolve_tomogram",
    "optical_slice",
    "project_wigner",
    "invert_to_wigner",
    "radon_reconstruct",
    "sinogram_evaluator",
]


@dataclass(frozen=True)
class TomogramQuery:
    """Frame parameters and quadrature value(s) for a tomogram evaluation.

    Fields broadcast against each other, so X may be an array while the frame
    stays scalar.  ``delta`` shifts the quadrature origin: Y = X - delta.
    """

    X: object
    mu: object
    nu: object
    delta: object = 0.0

    @property
    def Y(self):
        return np.asarray(self.X, dtype=float) - np.asarray(self.delta, dtype=float)


def _frame_arrays(q: TomogramQuery):
    mu = np.asarray(q.mu, dtype=float)
    nu = np.asarray(q.nu, dtype=float)
    if np.any((mu == 0.0) & (nu == 0.0)):
        raise DegenerateFrameError("tomogram frame (mu, nu) = (0, 0) has no density")
    return mu, nu


def tomogram_gaussian(state: GaussianState, q: TomogramQuery):
    """Gaussian marginal (2 pi sigma_X)^{-1/2} exp(-(X - Xbar)^2 / (2 sigma_X)).

    sigma_X = mu^2 sigma_qq + nu^2 sigma_pp + 2 mu nu sigma_pq and
    Xbar = mu <q> + nu <p> + delta.
    """
    mu, nu = _frame_arrays(q)
    sig = mu ** 2 * state.sigma_qq + nu ** 2 * state.sigma_pp + 2.0 * mu * nu * state.sigma_pq
    if np.any(sig <= 0.0):
        raise DegenerateFrameError("sigma_X <= 0; dispersion matrix not positive on this frame")
    # work with Y = X - delta so shift covariance is exact, not one rounding off
    ybar = mu * state.mean_q + nu * state.mean_p
    return np.exp(-((q.Y - ybar) ** 2) / (2.0 * sig)) / np.sqrt(2.0 * math.pi * sig)


@dataclass(frozen=True)
class GaussianTomogram:
    """Callable tomogram of a Gaussian state, signature (Y, mu, nu)."""

    state: GaussianState

    def __call__(self, Y, mu, nu):
        return tomogram_gaussian(self.state, TomogramQuery(X=Y, mu=mu, nu=nu))


def _cat_pieces(spec: CatSpec, q: TomogramQuery):
    """The four tomogram terms (w1, w2, w3, w4); w4 = conj(w3) analytically."""
    mu, nu = _frame_arrays(q)
    r2 = mu ** 2 + nu ** 2
    Y = q.Y
    alpha = complex(spec.alpha)
    a2 = abs(alpha) ** 2
    # displacement in the measured quadrature; coherent peaks sit at +-(s + s*)
    s = alpha * (mu - 1j * nu) / math.sqrt(2.0)
    s_re = 2.0 * s.real
    s_im = s - np.conj(s)
    w1 = np.exp(-((Y - s_re) ** 2) / r2)
    w2 = np.exp(-((Y + s_re) ** 2) / r2)
    w3 = np.exp(-2.0 * a2 - ((Y - s_im) ** 2) / r2)
    w4 = np.exp(-2.0 * a2 - ((Y + s_im) ** 2) / r2)
    return w1, w2, w3, w4, r2


def tomogram_cat(spec: CatSpec, q: TomogramQuery):
    """Even/odd cat marginal.

    N^2 (pi (mu^2 + nu^2))^{-1/2} [w1 + w2 +/- (w3 + w4)] with displaced
    Gaussians w1, w2 and the conjugate interference pair w3, w4 built from
    s = alpha (mu - i nu) / sqrt(2).  Nonnegative up to rounding; integrates
    to 1 over X for any frame.
    """
    w1, w2, w3, w4, r2 = _cat_pieces(spec, q)
    sign = 1.0 if spec.parity == "even" else -1.0
    total = w1 + w2 + sign * (w3 + w4)
    return spec.norm_squared / np.sqrt(math.pi * r2) * np.real(total)


def cat_evaluator(spec: CatSpec) -> Callable:
    """Tomogram evaluator (Y, mu, nu) for a cat state."""
    def evaluator(Y, mu, nu):
        return tomogram_cat(spec, TomogramQuery(X=Y, mu=mu, nu=nu))
    return evaluator


def evolve_tomogram(initial: Callable, eps: complex, deps: complex, q: TomogramQuery):
    """Tomogram at time t of the mode function: w0(X - delta, mu(t), nu(t)).

    ``initial`` is the t=0 evaluator with signature (Y, mu, nu).  The frame
    parameters are transported with mu(t) = Re(deps) nu + Re(eps) mu,
    nu(t) = Im(deps) nu + Im(eps) mu; the map is invertible, so an evolved
    frame can only degenerate if the inputs were already invalid.
    """
    smap = symplectic_map(eps, deps)
    mu, nu = _frame_arrays(q)
    mu_t, nu_t = smap.frame(mu, nu)
    if np.any((mu_t == 0.0) & (nu_t == 0.0)):
        raise DegenerateFrameError("evolved frame collapsed to (0, 0); trajectory point invalid")
    return initial(q.Y, mu_t, nu_t)


def optical_slice(evaluator: Callable, phi, X, eps: complex | None = None, deps: complex | None = None):
    """Rotated-quadrature restriction mu = cos(phi), nu = sin(phi), delta = 0.

    With (eps, deps) supplied the slice is evolved in time, i.e. the evaluator
    is read at the transported frame parameters.
    """
    phi = np.asarray(phi, dtype=float)
    mu = np.cos(phi)
    nu = np.sin(phi)
    if eps is not None:
        return evolve_tomogram(evaluator, eps, deps, TomogramQuery(X=X, mu=mu, nu=nu))
    return evaluator(np.asarray(X, dtype=float), mu, nu)


WignerSource = Union[WignerGrid, Callable]


def project_wigner(
    source: WignerSource,
    q: TomogramQuery,
    *,
    n_coarse: int = 321,
    n_fine: int = 2049,
    halfwidth_sigmas: float = 10.0,
    u_max: float = 40.0,
) -> float:
    """Tomogram value by direct line integration of a Wigner function.

    Integrates W along the line mu q + nu p = Y and divides by
    2 pi sqrt(mu^2 + nu^2).  A coarse scan of |W| along the line locates the
    support; the fine trapezoid pass covers its center +- ``halfwidth_sigmas``
    standard widths with ``n_fine`` points.  Serves as the independent oracle
    for every analytic tomogram, so it never reuses their moment formulas.

    ``source`` is a WignerGrid (bicubic interpolation, 0 outside) or a
    callable W(q, p).
    """
    mu = float(np.asarray(q.mu))
    nu = float(np.asarray(q.nu))
    if mu == 0.0 and nu == 0.0:
        raise DegenerateFrameError("projection frame (mu, nu) = (0, 0)")
    Y = float(np.asarray(q.Y))
    r = math.hypot(mu, nu)

    base_q = mu * Y / r ** 2
    base_p = nu * Y / r ** 2
    tan_q = -nu / r
    tan_p = mu / r

    if isinstance(source, WignerGrid):
        f = source.interpolate
        # exact line-box intersection; outside the box the interpolant is 0,
        # and ending the window on the box edge lets the truncation check see
        # any mass the grid cuts off
        scan_lo, scan_hi = -math.inf, math.inf
        for base, tan, axis in ((base_q, tan_q, source.q_axis), (base_p, tan_p, source.p_axis)):
            if tan != 0.0:
                a, b = (axis[0] - base) / tan, (axis[-1] - base) / tan
                scan_lo = max(scan_lo, min(a, b))
                scan_hi = min(scan_hi, max(a, b))
            elif not (axis[0] <= base <= axis[-1]):
                return 0.0
        if scan_hi <= scan_lo:
            return 0.0
    else:
        f = source
        scan_lo, scan_hi = -u_max, u_max

    u = np.linspace(scan_lo, scan_hi, n_coarse)
    vals = np.abs(np.asarray(f(base_q + u * tan_q, base_p + u * tan_p), dtype=float))
    mass = vals.sum()
    if mass > 0.0:
        center = float((u * vals).sum() / mass)
        width = math.sqrt(max(float(((u - center) ** 2 * vals).sum() / mass), 1e-6))
        lo = max(center - halfwidth_sigmas * width, scan_lo)
        hi = min(center + halfwidth_sigmas * width, scan_hi)
    else:
        lo, hi = scan_lo, scan_hi

    uf = np.linspace(lo, hi, n_fine)
    wf = np.asarray(f(base_q + uf * tan_q, base_p + uf * tan_p), dtype=float)
    peak = np.max(np.abs(wf))
    # peak <= 1e-12 means the line never meets the support; endpoint noise on
    # such lines is not truncation
    if peak > 1e-12 and max(abs(wf[0]), abs(wf[-1])) > 1e-6 * peak:
        warnings.warn(
            "integration window truncates the Wigner support on this line",
            SupportTruncationWarning,
            stacklevel=2,
        )
    du = (hi - lo) / (n_fine - 1)
    w = np.full(n_fine, du)
    w[[0, -1]] *= 0.5
    return float(wf @ w) / (2.0 * math.pi * r)


def invert_to_wigner(
    evaluator: Callable,
    q_axis,
    p_axis,
    *,
    k_max: float = 12.0,
    n_nodes: int = 193,
    n_y: int = 513,
    y_halfwidth_sigmas: float = 12.0,
    n_coarse: int = 129,
    norm_tol: float = 1e-2,
) -> WignerGrid:
    """Wigner function from a tomogram by the reduced Fourier inversion.

    W(q, p) = (1/2 pi) integral P(Y, mu, nu) exp(i (Y - mu q - nu p)) dY dmu dnu,
    discretized with trapezoid rules on uniform mu, nu in [-k_max, k_max]
    (``n_nodes`` each).  k_max must cover the Fourier transform of the state:
    superpositions of coherent pieces separated by 2 alpha carry interference
    lobes centered at radius 2 sqrt(2) |alpha|, so the default reaches
    |alpha| = 3.  The Y quadrature uses a per-node window: the tomogram
    width grows like sqrt(mu^2 + nu^2), so a coarse scan first locates the
    support of each column, then ``n_y`` points cover its center +-
    ``y_halfwidth_sigmas`` standard widths.  The node mu = nu = 0 is never
    evaluated; its Fourier coefficient is exactly 1 for a normalized tomogram.

    ``evaluator(Y, mu, nu)`` must broadcast over array arguments.

    Raises
    ------
    ReconstructionQualityError
        When the reconstructed grid misses 2 pi normalization by more than
        ``norm_tol`` (cutoff k_max or the output window too small).
    """
    q_axis = np.asarray(q_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    nodes = np.linspace(-k_max, k_max, n_nodes)

    F = np.empty((n_nodes, n_nodes), dtype=complex)
    scan_u = np.linspace(-1.0, 1.0, n_coarse)[:, np.newaxis]
    fine_t = np.linspace(0.0, 1.0, n_y)[:, np.newaxis]
    for i, m in enumerate(nodes):
        nu = nodes
        degenerate = (m == 0.0) & (nu == 0.0)
        safe_nu = np.where(degenerate, 1.0, nu)

        radius = np.sqrt(m ** 2 + safe_nu ** 2)
        scan_half = y_halfwidth_sigmas * np.maximum(1.0, radius)
        Ys = scan_u * scan_half[np.newaxis, :]
        Pv = np.abs(np.asarray(evaluator(Ys, m, safe_nu[np.newaxis, :]), dtype=float))
        mass = Pv.sum(axis=0)
        mass = np.where(mass > 0.0, mass, 1.0)
        center = (Ys * Pv).sum(axis=0) / mass
        width = np.sqrt(np.maximum(((Ys - center) ** 2 * Pv).sum(axis=0) / mass, 1e-6))
        lo = center - y_halfwidth_sigmas * width
        hi = center + y_halfwidth_sigmas * width

        Yf = lo[np.newaxis, :] + (hi - lo)[np.newaxis, :] * fine_t
        kernel = np.exp(1j * Yf) * np.asarray(evaluator(Yf, m, safe_nu[np.newaxis, :]), dtype=complex)
        kernel[0, :] *= 0.5
        kernel[-1, :] *= 0.5
        F[i, :] = kernel.sum(axis=0) * (hi - lo) / (n_y - 1)
        F[i, degenerate] = 1.0

    # separable phase factors turn the double (mu, nu) sum into two matmuls
    w_nodes = np.full(n_nodes, nodes[1] - nodes[0])
    w_nodes[[0, -1]] *= 0.5
    A = np.exp(-1j * np.outer(q_axis, nodes)) * w_nodes
    B = np.exp(-1j * np.outer(nodes, p_axis)) * w_nodes[:, np.newaxis]
    values = np.real(A @ F @ B) / (2.0 * math.pi)

    grid = WignerGrid(q_axis=q_axis, p_axis=p_axis, values=values)
    norm = grid.integral()
    if abs(norm - 1.0) > norm_tol:
        raise ReconstructionQualityError(
            f"reconstructed grid integrates to {norm:.6f} (tolerance {norm_tol}); "
            f"increase k_max={k_max}, the node counts, or the output window"
        )
    return grid


@dataclass(frozen=True)
class OpticalSinogram:
    """Rotated-quadrature marginals w(X, phi) on a uniform (phi, X) grid.

    ``values[i, j] = w(x_axis[j], phi_axis[i])`` with phi_axis uniform inside
    [0, pi).  Every column is a probability density in X; construction checks
    each one integrates to 1 within 5e-2 (looser checks belong to callers).
    """

    phi_axis: np.ndarray
    x_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        phi = np.asarray(self.phi_axis, dtype=float)
        x = np.asarray(self.x_axis, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "phi_axis", phi)
        object.__setattr__(self, "x_axis", x)
        object.__setattr__(self, "values", v)
        if phi.ndim != 1 or phi.size < 1:
            raise ValueError("phi_axis must be a 1-D grid")
        if phi[0] < 0.0 or phi[-1] >= math.pi:
            raise ValueError("phi_axis must lie inside [0, pi)")
        if phi.size > 1:
            steps = np.diff(phi)
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
                raise ValueError("phi_axis must be uniform")
        if x.ndim != 1 or x.size < 2 or not np.all(np.diff(x) > 0):
            raise ValueError("x_axis must be increasing")
        if v.shape != (phi.size, x.size):
            raise ValueError(f"values shape {v.shape} does not match axes ({phi.size}, {x.size})")
        if not np.all(np.isfinite(v)):
            raise ValueError("sinogram values must be finite")
        norms = self.column_norms()
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > 5e-2:
            raise ValueError(f"sinogram columns must be normalized; worst deviation {worst:.3e}")

    def column_norms(self) -> np.ndarray:
        """Trapezoid integral of each phi-row over X."""
        dx = np.diff(self.x_axis)
        w = np.zeros(self.x_axis.size)
        w[:-1] += 0.5 * dx
        w[1:] += 0.5 * dx
        return self.values @ w

    @classmethod
    def from_evaluator(cls, evaluator: Callable, phi_axis, x_axis) -> "OpticalSinogram":
        """Sample optical slices of a (Y, mu, nu) evaluator on the grid."""
        phi_axis = np.asarray(phi_axis, dtype=float)
        x_axis = np.asarray(x_axis, dtype=float)
        values = np.empty((phi_axis.size, x_axis.size))
        for i, phi in enumerate(phi_axis):
            values[i, :] = optical_slice(evaluator, phi, x_axis)
        return cls(phi_axis=phi_axis, x_axis=x_axis, values=values)

    def save(self, path: str, fmt: str = "csv") -> None:
        """Write as CSV rows ``phi,x,w`` or as the JSON+binary container."""
        if fmt == "csv":
            _container.save_csv_triples(path, ("phi", "x", "w"), self.phi_axis, self.x_axis, self.values)
        elif fmt == "bin":
            _container.save_container(path, "sinogram", ["phi", "x"], [self.phi_axis, self.x_axis], self.values)
        else:
            raise ValueError(f"unknown format {fmt!r}")

    @staticmethod
    def load(path: str) -> "OpticalSinogram":
        if _container.is_container(path):
            kind, axes, values = _container.load_container(path)
            if kind != "sinogram":
                raise ValueError(f"{path}: container holds {kind!r}, not a sinogram")
            phi_axis, x_axis = axes
        else:
            phi_axis, x_axis, values = _container.load_csv_triples(path, ("phi", "x", "w"))
        return OpticalSinogram(phi_axis=phi_axis, x_axis=x_axis, values=values)


def radon_reconstruct(sinogram: OpticalSinogram, q_axis, p_axis, *, apodization: str = "hann") -> WignerGrid:
    """Wigner function from an optical sinogram by filtered backprojection.

    Each angular projection is ramp-filtered in frequency space (|omega|,
    apodized by a Hann window at the sampling Nyquist frequency unless
    ``apodization=None``) and backprojected with linear interpolation.  With
    the 2 pi Wigner convention the overall scale is exactly the angle step:
    W = dphi * sum_phi filtered_phi(q cos phi + p sin phi).

    Raises
    ------
    InsufficientAnglesError
        With fewer than 16 angles.
    """
    if sinogram.phi_axis.size < 16:
        raise InsufficientAnglesError(
            f"filtered backprojection needs >= 16 angles, got {sinogram.phi_axis.size}"
        )
    if apodization not in ("hann", None, "none"):
        raise ValueError(f"unknown apodization {apodization!r}")

    x = sinogram.x_axis
    n = x.size
    dx = float(x[1] - x[0])
    nfft = 1
    while nfft < 2 * n:
        nfft *= 2
    omega = 2.0 * math.pi * np.fft.fftfreq(nfft, d=dx)
    filt = np.abs(omega)
    if apodization == "hann":
        filt *= 0.5 * (1.0 + np.cos(math.pi * omega / (math.pi / dx)))

    q_axis = np.asarray(q_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    Q, P = np.meshgrid(q_axis, p_axis, indexing="ij")
    out = np.zeros_like(Q)
    padded = np.zeros(nfft)
    for i, phi in enumerate(sinogram.phi_axis):
        padded[:] = 0.0
        padded[:n] = sinogram.values[i]
        filtered = np.real(np.fft.ifft(filt * np.fft.fft(padded)))[:n]
        t = Q * math.cos(phi) + P * math.sin(phi)
        out += np.interp(t, x, filtered, left=0.0, right=0.0)

    dphi = math.pi / sinogram.phi_axis.size
    return WignerGrid(q_axis=q_axis, p_axis=p_axis, values=out * dphi)


def sinogram_evaluator(sinogram: OpticalSinogram) -> Callable:
    """Full-plane tomogram evaluator interpolated from an optical sinogram.

    Homogeneity extends the unit-circle data to every frame:
    w(Y, mu, nu) = r^{-1} w_opt(Y / r, phi) with r = sqrt(mu^2 + nu^2) and
    (mu, nu) = r (cos phi, sin phi); angles outside [0, pi) fold back via
    w(X, phi + pi) = w(-X, phi).  Interpolation is bicubic on the (phi, X)
    grid with angle rows wrapped under that fold, 0 outside the X range.
    """
    phi = sinogram.phi_axis
    nphi = phi.size
    dphi = math.pi / nphi
    if nphi > 1 and not math.isclose(float(phi[1] - phi[0]), dphi, rel_tol=1e-9):
        raise ValueError("sinogram angles must tile [0, pi) uniformly for interpolation")

    # two wrap rows on each side: row(phi + pi) = row(phi) with X reversed
    ext = np.empty((nphi + 4, sinogram.x_axis.size))
    ext[2:-2] = sinogram.values
    ext[0] = sinogram.values[-2, ::-1]
    ext[1] = sinogram.values[-1, ::-1]
    ext[-2] = sinogram.values[0, ::-1]
    ext[-1] = sinogram.values[1, ::-1]
    ext_phi = np.concatenate(([phi[0] - 2 * dphi, phi[0] - dphi], phi, [phi[-1] + dphi, phi[-1] + 2 * dphi]))
    grid = WignerGrid(q_axis=ext_phi, p_axis=sinogram.x_axis, values=ext)

    def evaluator(Y, mu, nu):
        mu = np.asarray(mu, dtype=float)
        nu = np.asarray(nu, dtype=float)
        r = np.hypot(mu, nu)
        if np.any(r == 0.0):
            raise DegenerateFrameError("tomogram frame (mu, nu) = (0, 0) has no density")
        angle = np.arctan2(nu, mu)
        flip = angle < 0.0
        angle = np.where(flip, angle + math.pi, angle)
        Ys = np.where(flip, -1.0, 1.0) * np.asarray(Y, dtype=float) / r
        return grid.interpolate(angle, Ys) / r

    return evaluator
