"""Command-line entry point: dataset generation, reconstruction, verification.

Subcommands: ``epsilon``, ``tomogram``, ``reconstruct``, ``verify``.  Each
reads a single JSON config (``--config``); the flags ``--out``, ``--format``
and ``--seed`` override the config keys of the same name.  Unknown config
keys are rejected before any compute.  Exit codes: 0 success, 1 numeric
failure of a computed result (solver tolerance, residual or reconstruction
thresholds), 2 usage/config/input-validation error.

All computation is vectorized serial numpy, so outputs are byte-identical
with and without ``--serial``; the flag is accepted to pin that guarantee.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Callable

import numpy as np

from . import _svg
from ._container import _atomic_write
from .errors import (
    ConfigError,
    DegenerateFrameError,
    InsufficientAnglesError,
    NormalizationDivergenceError,
    ReconstructionQualityError,
    SolverError,
)
from .oscillator import OscillatorParams, epsilon_at, solve_epsilon, symplectic_map
from .states import CatSpec, GaussianState, WignerGrid, evolve_wigner, gaussian_from_epsilon, wigner_cat, wigner_gaussian
from .tomography import (
    GaussianTomogram,
    OpticalSinogram,
    TomogramQuery,
    cat_evaluator,
    evolve_tomogram,
    invert_to_wigner,
    radon_reconstruct,
    sinogram_evaluator,
)
from .verify import (
    ProbeGrid,
    frozen_frame_evolution,
    moment_odes_check,
    pde_residual,
    replacement_evolution,
)

_COMMON_KEYS = {"out", "format", "seed"}


def _fail(code: int, message: str) -> int:
    print(f"iontomo: {message}", file=sys.stderr)
    return code


def _check_keys(cfg: dict, allowed: set, context: str) -> None:
    unknown = sorted(set(cfg) - allowed - _COMMON_KEYS)
    if unknown:
        raise ConfigError(f"unknown {context} config keys: {', '.join(unknown)}")


def _number(cfg: dict, key: str, *, required: bool = False, default=None,
            minimum=None, strict_min=None, context: str = "config"):
    if key not in cfg:
        if required:
            raise ConfigError(f"{context}: missing required key {key!r}")
        return default
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{context}: {key} must be a number, got {v!r}")
    v = float(v)
    if minimum is not None and v < minimum:
        raise ConfigError(f"{context}: {key} must be >= {minimum}, got {v}")
    if strict_min is not None and v <= strict_min:
        raise ConfigError(f"{context}: {key} must be > {strict_min}, got {v}")
    return v


def _integer(cfg: dict, key: str, *, default=None, minimum=None, context: str = "config"):
    if key not in cfg:
        return default
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{context}: {key} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{context}: {key} must be >= {minimum}, got {v}")
    return v


def _complex_amplitude(value, context: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value), 0.0)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)):
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{context}: alpha must be a number or [re, im], got {value!r}")


def _oscillator_params(cfg: dict, context: str) -> OscillatorParams:
    kappa = _number(cfg, "kappa", required=True, minimum=0.0, context=context)
    omega = _number(cfg, "omega_drive", required=True, strict_min=0.0, context=context)
    return OscillatorParams(kappa=kappa, omega_drive=omega)


def _state_config(cfg: dict, context: str):
    """Returns (tomogram evaluator (Y, mu, nu), Wigner evaluator (q, p)) at t=0."""
    if not isinstance(cfg, dict):
        raise ConfigError(f"{context}: state must be an object")
    kind = cfg.get("kind")
    if kind == "gaussian":
        _check_state_keys(cfg, {"kind", "alpha"}, context)
        alpha = _complex_amplitude(cfg.get("alpha", 0.0), context)
        state = gaussian_from_epsilon(1.0, 1.0j, alpha)
        return GaussianTomogram(state), (lambda q, p: wigner_gaussian(state, q, p))
    if kind == "cat":
        _check_state_keys(cfg, {"kind", "alpha", "parity"}, context)
        parity = cfg.get("parity", "even")
        if parity not in ("even", "odd"):
            raise ConfigError(f"{context}: parity must be 'even' or 'odd', got {parity!r}")
        alpha = _complex_amplitude(cfg.get("alpha", 1.0), context)
        try:
            spec = CatSpec(alpha=alpha, parity=parity)
        except NormalizationDivergenceError as exc:
            raise ConfigError(f"{context}: {exc}") from exc
        return cat_evaluator(spec), (lambda q, p: wigner_cat(spec, q, p))
    if kind == "number":
        raise ConfigError(f"{context}: number states have no analytic tomogram; use gaussian or cat")
    raise ConfigError(f"{context}: state.kind must be 'gaussian' or 'cat', got {kind!r}")


def _check_state_keys(cfg: dict, allowed: set, context: str) -> None:
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(f"unknown {context} state keys: {', '.join(unknown)}")


def _resolve_out(cfg: dict, args) -> str:
    out = args.out or cfg.get("out")
    if not out:
        raise ConfigError("no output path: pass --out or set 'out' in the config")
    if not isinstance(out, str):
        raise ConfigError(f"'out' must be a string, got {out!r}")
    return out


def _resolve_format(cfg: dict, args, *, allowed=("csv", "bin")) -> str:
    fmt = args.format or cfg.get("format", "csv")
    if fmt not in allowed:
        raise ConfigError(f"format must be one of {allowed}, got {fmt!r}")
    return fmt


def _validate_seed(cfg: dict, args) -> None:
    # reserved for future sampling features; validated, unused
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ConfigError(f"seed must be an integer, got {seed!r}")


def _plot_path(out: str) -> str:
    return os.path.splitext(out)[0] + ".svg"


def cmd_epsilon(cfg: dict, args) -> int:
    _check_keys(cfg, {"kappa", "omega_drive", "t_end", "n_steps", "tol"}, "epsilon")
    params = _oscillator_params(cfg, "epsilon")
    t_end = _number(cfg, "t_end", required=True, strict_min=0.0, context="epsilon")
    n_steps = _integer(cfg, "n_steps", minimum=2, context="epsilon")
    tol = _number(cfg, "tol", default=1e-9, strict_min=0.0, context="epsilon")
    out = _resolve_out(cfg, args)
    _resolve_format(cfg, args, allowed=("csv",))
    _validate_seed(cfg, args)

    traj = solve_epsilon(params, t_end=t_end, n_steps=n_steps, tol=tol)
    w = traj.wronskian()
    lines = ["t,re_eps,im_eps,re_deps,im_deps,wronskian"]
    for i in range(traj.times.size):
        lines.append(",".join(f"{v:.17g}" for v in (
            traj.times[i], traj.eps[i].real, traj.eps[i].imag,
            traj.deps[i].real, traj.deps[i].imag, w[i])))
    _atomic_write(out, ("\n".join(lines) + "\n").encode())

    if args.plot:
        _svg.svg_polyline(_plot_path(out), traj.times,
                          [("Re eps", traj.eps.real), ("Im eps", traj.eps.imag)],
                          title=f"mode function (kappa={params.kappa}, Omega={params.omega_drive})",
                          xlabel="t", ylabel="eps(t)")
    drift = float(np.max(np.abs(w - 1.0)))
    if drift > 10.0 * tol:
        return _fail(1, f"Wronskian drift {drift:.3e} exceeds 10*tol")
    return 0


def cmd_tomogram(cfg: dict, args) -> int:
    _check_keys(cfg, {"kappa", "omega_drive", "time", "state", "mode", "sinogram", "queries"}, "tomogram")
    params = _oscillator_params(cfg, "tomogram")
    t = _number(cfg, "time", default=0.0, minimum=0.0, context="tomogram")
    if "state" not in cfg:
        raise ConfigError("tomogram: missing required key 'state'")
    base, _ = _state_config(cfg["state"], "tomogram")
    mode = cfg.get("mode", "sinogram")
    out = _resolve_out(cfg, args)
    _validate_seed(cfg, args)

    if t > 0.0:
        eps, deps = epsilon_at(params, t)
        def evaluator(Y, mu, nu):
            return evolve_tomogram(base, eps, deps, TomogramQuery(X=Y, mu=mu, nu=nu))
    else:
        evaluator = base

    if mode == "sinogram":
        fmt = _resolve_format(cfg, args)
        sino_cfg = cfg.get("sinogram", {})
        if not isinstance(sino_cfg, dict):
            raise ConfigError("tomogram: 'sinogram' must be an object")
        unknown = sorted(set(sino_cfg) - {"n_phi", "x_min", "x_max", "n_x"})
        if unknown:
            raise ConfigError(f"unknown tomogram.sinogram keys: {', '.join(unknown)}")
        n_phi = _integer(sino_cfg, "n_phi", default=180, minimum=1, context="sinogram")
        x_min = _number(sino_cfg, "x_min", default=-8.0, context="sinogram")
        x_max = _number(sino_cfg, "x_max", default=8.0, context="sinogram")
        n_x = _integer(sino_cfg, "n_x", default=257, minimum=2, context="sinogram")
        if x_max <= x_min:
            raise ConfigError("sinogram: x_max must exceed x_min")
        phi_axis = np.arange(n_phi) * math.pi / n_phi
        x_axis = np.linspace(x_min, x_max, n_x)
        try:
            sino = OpticalSinogram.from_evaluator(evaluator, phi_axis, x_axis)
        except ValueError as exc:
            return _fail(1, f"sinogram failed validation: {exc}")
        sino.save(out, fmt=fmt)
        if args.plot:
            _svg.svg_heatmap(_plot_path(out), sino.values, sino.phi_axis, sino.x_axis,
                             title="optical sinogram w(X, phi)", xlabel="phi", ylabel="X",
                             diverging=False)
        return 0

    if mode == "samples":
        _resolve_format(cfg, args, allowed=("csv",))
        queries = cfg.get("queries")
        if (not isinstance(queries, list) or not queries
                or not all(isinstance(r, list) and len(r) == 4
                           and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in r)
                           for r in queries)):
            raise ConfigError("tomogram: mode 'samples' needs 'queries' as a list of [X, mu, nu, delta] rows")
        rows = np.asarray(queries, dtype=float)
        if np.any((rows[:, 1] == 0.0) & (rows[:, 2] == 0.0)):
            raise ConfigError("tomogram: query frame (mu, nu) = (0, 0) is degenerate")
        w = np.array([
            float(evaluator(x - d, m, n)) for x, m, n, d in rows
        ])
        lines = ["X,mu,nu,delta,w"]
        for (x, m, n, d), val in zip(rows, w):
            lines.append(f"{x:.17g},{m:.17g},{n:.17g},{d:.17g},{val:.17g}")
        _atomic_write(out, ("\n".join(lines) + "\n").encode())
        if args.plot:
            order = np.argsort(rows[:, 0])
            _svg.svg_polyline(_plot_path(out), rows[order, 0], [("w", w[order])],
                              title="tomogram samples", xlabel="X", ylabel="w")
        return 0

    raise ConfigError(f"tomogram: mode must be 'sinogram' or 'samples', got {mode!r}")


def _reference_evaluator(ref: dict) -> Callable:
    if not isinstance(ref, dict):
        raise ConfigError("reconstruct: 'reference' must be an object")
    unknown = sorted(set(ref) - {"kind", "alpha", "parity", "time", "kappa", "omega_drive"})
    if unknown:
        raise ConfigError(f"unknown reconstruct.reference keys: {', '.join(unknown)}")
    t = _number(ref, "time", default=0.0, minimum=0.0, context="reference")
    if t > 0.0:
        params = _oscillator_params(ref, "reference")
        eps, deps = epsilon_at(params, t)
    else:
        eps, deps = 1.0 + 0.0j, 1.0j

    kind = ref.get("kind")
    if kind == "gaussian":
        alpha = _complex_amplitude(ref.get("alpha", 0.0), "reference")
        state = gaussian_from_epsilon(eps, deps, alpha)
        return lambda q, p: wigner_gaussian(state, q, p)
    if kind == "cat":
        parity = ref.get("parity", "even")
        if parity not in ("even", "odd"):
            raise ConfigError(f"reference: parity must be 'even' or 'odd', got {parity!r}")
        spec = CatSpec(alpha=_complex_amplitude(ref.get("alpha", 1.0), "reference"), parity=parity)
        w0 = lambda q, p: wigner_cat(spec, q, p)
        if t > 0.0:
            smap = symplectic_map(eps, deps)
            return lambda q, p: evolve_wigner(w0, smap, q, p)
        return w0
    raise ConfigError(f"reference: kind must be 'gaussian' or 'cat', got {kind!r}")


def cmd_reconstruct(cfg: dict, args) -> int:
    _check_keys(cfg, {"input", "method", "grid", "reference", "fourier", "apodization",
                      "norm_tol", "l2_tol"}, "reconstruct")
    path = cfg.get("input")
    if not isinstance(path, str) or not path:
        raise ConfigError("reconstruct: missing required key 'input'")
    method = cfg.get("method", "fbp")
    if method not in ("fbp", "fourier"):
        raise ConfigError(f"reconstruct: method must be 'fbp' or 'fourier', got {method!r}")
    grid_cfg = cfg.get("grid", {})
    if not isinstance(grid_cfg, dict):
        raise ConfigError("reconstruct: 'grid' must be an object")
    unknown = sorted(set(grid_cfg) - {"q_min", "q_max", "n_q", "p_min", "p_max", "n_p"})
    if unknown:
        raise ConfigError(f"unknown reconstruct.grid keys: {', '.join(unknown)}")
    q_axis = np.linspace(_number(grid_cfg, "q_min", default=-6.0, context="grid"),
                         _number(grid_cfg, "q_max", default=6.0, context="grid"),
                         _integer(grid_cfg, "n_q", default=121, minimum=2, context="grid"))
    p_axis = np.linspace(_number(grid_cfg, "p_min", default=-6.0, context="grid"),
                         _number(grid_cfg, "p_max", default=6.0, context="grid"),
                         _integer(grid_cfg, "n_p", default=121, minimum=2, context="grid"))
    norm_tol = _number(cfg, "norm_tol", default=0.05, strict_min=0.0, context="reconstruct")
    l2_tol = _number(cfg, "l2_tol", default=0.05, strict_min=0.0, context="reconstruct")
    out = _resolve_out(cfg, args)
    fmt = _resolve_format(cfg, args)
    _validate_seed(cfg, args)

    try:
        sino = OpticalSinogram.load(path)
    except FileNotFoundError:
        return _fail(2, f"input file not found: {path}")
    except ValueError as exc:
        return _fail(2, f"input file invalid: {exc}")

    try:
        if method == "fbp":
            apod = cfg.get("apodization", "hann")
            if apod is None:
                apod = "none"
            if apod not in ("hann", "none"):
                raise ConfigError(f"reconstruct: apodization must be 'hann' or 'none', got {apod!r}")
            grid = radon_reconstruct(sino, q_axis, p_axis, apodization=apod)
        else:
            fourier_cfg = cfg.get("fourier", {})
            if not isinstance(fourier_cfg, dict):
                raise ConfigError("reconstruct: 'fourier' must be an object")
            unknown = sorted(set(fourier_cfg) - {"k_max", "n_nodes", "n_y", "y_halfwidth_sigmas"})
            if unknown:
                raise ConfigError(f"unknown reconstruct.fourier keys: {', '.join(unknown)}")
            grid = invert_to_wigner(
                sinogram_evaluator(sino), q_axis, p_axis,
                k_max=_number(fourier_cfg, "k_max", default=12.0, strict_min=0.0, context="fourier"),
                n_nodes=_integer(fourier_cfg, "n_nodes", default=193, minimum=3, context="fourier"),
                n_y=_integer(fourier_cfg, "n_y", default=513, minimum=3, context="fourier"),
                y_halfwidth_sigmas=_number(fourier_cfg, "y_halfwidth_sigmas", default=12.0,
                                           strict_min=0.0, context="fourier"),
                norm_tol=norm_tol,
            )
    except InsufficientAnglesError as exc:
        return _fail(2, str(exc))
    except ReconstructionQualityError as exc:
        return _fail(1, str(exc))

    grid.save(out, fmt=fmt)
    report = {
        "method": method,
        "input": path,
        "normalization": grid.integral(),
        "norm_tol": norm_tol,
        "rel_l2_error": None,
    }
    if "reference" in cfg:
        ref = _reference_evaluator(cfg["reference"])
        target = WignerGrid.from_evaluator(ref, q_axis, p_axis)
        num = float(np.linalg.norm(grid.values - target.values))
        den = float(np.linalg.norm(target.values))
        report["rel_l2_error"] = num / den
        report["l2_tol"] = l2_tol
    report_path = os.path.splitext(out)[0] + ".report.json"
    _atomic_write(report_path, (json.dumps(report, sort_keys=True, indent=2) + "\n").encode())

    if args.plot:
        _svg.svg_heatmap(_plot_path(out), grid.values, grid.q_axis, grid.p_axis,
                         title=f"reconstructed Wigner function ({method})",
                         xlabel="q", ylabel="p", diverging=True)

    if abs(report["normalization"] - 1.0) > norm_tol:
        return _fail(1, f"normalization {report['normalization']:.4f} outside tolerance {norm_tol}")
    if report["rel_l2_error"] is not None and report["rel_l2_error"] > l2_tol:
        return _fail(1, f"relative L2 error {report['rel_l2_error']:.4f} exceeds {l2_tol}")
    return 0


def _probe_from_config(cfg: dict) -> ProbeGrid:
    if not isinstance(cfg, dict):
        raise ConfigError("verify: 'probe' must be an object")
    allowed = {"x_values", "mu_values", "nu_values", "t_values", "delta_values",
               "h_t", "h_mu", "h_nu"}
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(f"unknown verify.probe keys: {', '.join(unknown)}")
    kwargs = {}
    for key in ("x_values", "mu_values", "nu_values", "t_values", "delta_values"):
        if key in cfg:
            v = cfg[key]
            if (not isinstance(v, list) or not v
                    or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
                raise ConfigError(f"verify.probe: {key} must be a non-empty number list")
            kwargs[key] = tuple(float(c) for c in v)
    for key in ("h_t", "h_mu", "h_nu"):
        if key in cfg:
            kwargs[key] = _number(cfg, key, strict_min=0.0, context="verify.probe")
    probe = ProbeGrid(**kwargs)
    if any(abs(m) <= max(probe.h_mu, probe.h_nu) for m in probe.mu_values):
        raise ConfigError("verify.probe: mu_values must stay clear of 0 by more than the stencil step")
    return probe


def cmd_verify(cfg: dict, args) -> int:
    _check_keys(cfg, {"kappa", "omega_drive", "suite", "alpha", "cat", "probe",
                      "moment_h", "t_end"}, "verify")
    params = _oscillator_params(cfg, "verify")
    suite = cfg.get("suite", "default")
    if suite not in ("default", "negative-control"):
        raise ConfigError(f"verify: suite must be 'default' or 'negative-control', got {suite!r}")
    alpha = _complex_amplitude(cfg.get("alpha", 1.0), "verify")
    cat_cfg = cfg.get("cat", {"alpha": 1.0, "parity": "even"})
    if not isinstance(cat_cfg, dict):
        raise ConfigError("verify: 'cat' must be an object")
    unknown = sorted(set(cat_cfg) - {"alpha", "parity"})
    if unknown:
        raise ConfigError(f"unknown verify.cat keys: {', '.join(unknown)}")
    cat_eval, _ = _state_config({"kind": "cat", **cat_cfg}, "verify")
    probe = _probe_from_config(cfg.get("probe", {}))
    moment_h = _number(cfg, "moment_h", default=1e-4, strict_min=0.0, context="verify")
    t_end = _number(cfg, "t_end", default=10.0, strict_min=0.0, context="verify")
    out = _resolve_out(cfg, args)
    _validate_seed(cfg, args)

    thresholds = {
        "pde_max": 1e-4,
        "order_range": [1.7, 2.3],
        "moment_max": 1e-6,
        "negative_min": 1e-1,
        "negative_ratio": 1e3,
    }

    base_g = GaussianTomogram(gaussian_from_epsilon(1.0, 1.0j, alpha))
    rep_g = pde_residual(replacement_evolution(base_g, params), params, probe)
    rep_c = pde_residual(replacement_evolution(cat_eval, params), params, probe)
    traj = solve_epsilon(params, t_end=t_end)
    rep_m = moment_odes_check(traj, alpha, h=moment_h)

    def order_ok(rep):
        return rep.convergence_order is not None and 1.7 <= rep.convergence_order <= 2.3

    checks = {
        "pde_gaussian_max": rep_g.max_abs_residual < thresholds["pde_max"],
        "pde_gaussian_order": order_ok(rep_g),
        "pde_cat_max": rep_c.max_abs_residual < thresholds["pde_max"],
        "pde_cat_order": order_ok(rep_c),
        "moments_max": rep_m.max_abs_residual < thresholds["moment_max"],
    }
    report = {
        "suite": suite,
        "kappa": params.kappa,
        "omega_drive": params.omega_drive,
        "thresholds": thresholds,
        "pde_gaussian": rep_g.as_dict(),
        "pde_cat": rep_c.as_dict(),
        "moments": rep_m.as_dict(),
    }

    if suite == "negative-control":
        rep_bad = pde_residual(frozen_frame_evolution(base_g), params, probe)
        detected = (rep_bad.max_abs_residual >= thresholds["negative_min"]
                    and rep_bad.max_abs_residual >= thresholds["negative_ratio"] * rep_g.max_abs_residual)
        checks["negative_control_detected"] = detected
        report["pde_frozen"] = rep_bad.as_dict()

    passed = all(checks.values())
    report["checks"] = checks
    report["passed"] = passed
    _atomic_write(out, (json.dumps(report, sort_keys=True, indent=2) + "\n").encode())
    if not passed:
        failed = ", ".join(k for k, ok in checks.items() if not ok)
        return _fail(1, f"verification thresholds failed: {failed}")
    return 0


_DISPATCH = {
    "epsilon": cmd_epsilon,
    "tomogram": cmd_tomogram,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iontomo",
        description="Trapped-ion phase-space simulation and symplectic tomography toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("epsilon", "solve the mode function and write the trajectory CSV"),
        ("tomogram", "generate tomogram samples or an optical sinogram"),
        ("reconstruct", "reconstruct a Wigner grid from a sinogram (FBP or Fourier)"),
        ("verify", "run evolution-equation and moment-ODE residual checks"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", help="output path (overrides config 'out')")
        p.add_argument("--plot", action="store_true", help="emit an SVG plot next to the output")
        p.add_argument("--serial", action="store_true",
                       help="force deterministic serial mode (outputs are byte-identical either way)")
        p.add_argument("--format", choices=("csv", "bin"), help="output format (overrides config)")
        p.add_argument("--seed", type=int, help="reserved; validated and unused")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        return _fail(2, f"config file not found: {args.config}")
    except json.JSONDecodeError as exc:
        return _fail(2, f"config is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        return _fail(2, "config must be a JSON object")

    try:
        return _DISPATCH[args.command](cfg, args)
    except ConfigError as exc:
        return _fail(2, str(exc))
    except (SolverError, DegenerateFrameError, NormalizationDivergenceError,
            ReconstructionQualityError) as exc:
        return _fail(1, str(exc))


if __name__ == "__main__":
    sys.exit(main())
