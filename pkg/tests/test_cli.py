"""End-to-end checks of the four subcommands through ``iontomo.cli.main``."""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from iontomo import (
    OpticalSinogram,
    TomogramQuery,
    WignerGrid,
    gaussian_from_epsilon,
    tomogram_gaussian,
)
from iontomo.cli import main
from test_oscillator import DEPS_AT_10, EPS_AT_10


def cfg_file(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def read_csv(path):
    return np.genfromtxt(path, delimiter=",", names=True)


# -------------------------------------------------------------------- epsilon


def test_epsilon_static_trap(tmp_path):
    t_end = 6.0
    cfg = cfg_file(tmp_path, {"kappa": 0.0, "omega_drive": 1.0, "t_end": t_end})
    out = tmp_path / "eps.csv"
    assert main(["epsilon", "--config", cfg, "--out", str(out)]) == 0

    data = read_csv(out)
    assert data.dtype.names == ("t", "re_eps", "im_eps", "re_deps", "im_deps", "wronskian")
    assert np.max(np.abs(data["wronskian"] - 1.0)) <= 1e-8
    assert data["re_eps"][-1] == pytest.approx(math.cos(t_end), abs=1e-8)
    assert data["im_eps"][-1] == pytest.approx(math.sin(t_end), abs=1e-8)


def test_epsilon_driven_matches_frozen_reference(tmp_path):
    cfg = cfg_file(
        tmp_path,
        {"kappa": 0.4, "omega_drive": 2.0, "t_end": 10.0, "out": str(tmp_path / "eps.csv")},
    )
    assert main(["epsilon", "--config", cfg]) == 0
    data = read_csv(tmp_path / "eps.csv")
    assert complex(data["re_eps"][-1], data["im_eps"][-1]) == pytest.approx(EPS_AT_10, abs=1e-9)
    assert complex(data["re_deps"][-1], data["im_deps"][-1]) == pytest.approx(DEPS_AT_10, abs=1e-9)


def test_epsilon_unreachable_tolerance_fails_numerically(tmp_path):
    cfg = cfg_file(
        tmp_path,
        {"kappa": 0.0, "omega_drive": 1.0, "t_end": 1e-7, "n_steps": 60001, "tol": 1e-30},
    )
    out = tmp_path / "eps.csv"
    assert main(["epsilon", "--config", cfg, "--out", str(out)]) == 1
    assert not out.exists()


def test_epsilon_plot(tmp_path):
    cfg = cfg_file(tmp_path, {"kappa": 0.0, "omega_drive": 1.0, "t_end": 1.0})
    out = tmp_path / "eps.csv"
    assert main(["epsilon", "--config", cfg, "--out", str(out), "--plot"]) == 0
    svg = tmp_path / "eps.svg"
    assert svg.exists()
    assert ET.parse(svg).getroot().tag.endswith("svg")


# --------------------------------------------------------------- config errors


def test_malformed_config_is_usage_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = tmp_path / "eps.csv"
    assert main(["epsilon", "--config", str(bad), "--out", str(out)]) == 2
    assert not out.exists()


@pytest.mark.parametrize(
    "payload",
    [
        {"kappa": 0.0, "omega_drive": 1.0, "t_end": 1.0, "bogus": 3},  # unknown key
        {"kappa": 0.0, "t_end": 1.0},  # missing omega_drive
        {"kappa": -0.5, "omega_drive": 1.0, "t_end": 1.0},  # invalid kappa
        {"kappa": 0.0, "omega_drive": 1.0, "t_end": 1.0, "seed": 1.5},  # bad seed
        [1, 2, 3],  # not an object
    ],
)
def test_epsilon_config_errors(tmp_path, payload):
    cfg = cfg_file(tmp_path, payload)
    assert main(["epsilon", "--config", cfg, "--out", str(tmp_path / "o.csv")]) == 2


def test_epsilon_rejects_binary_format(tmp_path):
    cfg = cfg_file(tmp_path, {"kappa": 0.0, "omega_drive": 1.0, "t_end": 1.0})
    out = tmp_path / "eps.bin"
    assert main(["epsilon", "--config", cfg, "--out", str(out), "--format", "bin"]) == 2


def test_missing_config_file(tmp_path):
    assert main(["epsilon", "--config", str(tmp_path / "absent.json")]) == 2


def test_missing_output_path(tmp_path):
    cfg = cfg_file(tmp_path, {"kappa": 0.0, "omega_drive": 1.0, "t_end": 1.0})
    assert main(["epsilon", "--config", cfg]) == 2


def test_usage_error_without_subcommand():
    assert main([]) == 2


# ------------------------------------------------------------------- tomogram


def tomogram_cfg(state, *, time=0.0, sinogram=None, **extra):
    payload = {"kappa": 0.0, "omega_drive": 1.0, "state": state}
    if time:
        payload["time"] = time
    if sinogram is not None:
        payload["sinogram"] = sinogram
    payload.update(extra)
    return payload


def test_vacuum_sinogram_angle_independent(tmp_path):
    cfg = cfg_file(
        tmp_path,
        tomogram_cfg({"kind": "gaussian"}, sinogram={"n_phi": 24, "x_min": -6, "x_max": 6, "n_x": 65}),
    )
    out = tmp_path / "sino.csv"
    assert main(["tomogram", "--config", cfg, "--out", str(out)]) == 0
    sino = OpticalSinogram.load(str(out))
    assert sino.values.shape == (24, 65)
    np.testing.assert_allclose(sino.column_norms(), 1.0, atol=1e-6)
    assert np.max(np.abs(sino.values - sino.values[0])) <= 1e-12


def test_evolved_vacuum_sinogram_unchanged(tmp_path):
    # static trap: the evolved vacuum stays rotation invariant
    cfg = cfg_file(
        tmp_path,
        tomogram_cfg({"kind": "gaussian"}, time=1.0,
                     sinogram={"n_phi": 24, "x_min": -6, "x_max": 6, "n_x": 65}),
    )
    out = tmp_path / "sino.csv"
    assert main(["tomogram", "--config", cfg, "--out", str(out)]) == 0
    sino = OpticalSinogram.load(str(out))
    vac = np.exp(-sino.x_axis ** 2) / math.sqrt(math.pi)
    assert np.max(np.abs(sino.values - vac)) <= 1e-10


def _count_maxima(x, w, floor):
    return sum(
        1 for i in range(1, w.size - 1)
        if w[i] > floor and w[i] >= w[i - 1] and w[i] > w[i + 1]
    )


def test_cat_sinogram_shows_fringes(tmp_path):
    cfg = cfg_file(
        tmp_path,
        tomogram_cfg({"kind": "cat", "alpha": 2.0, "parity": "even"},
                     sinogram={"n_phi": 36, "x_min": -6, "x_max": 6, "n_x": 401}),
    )
    out = tmp_path / "cat.csv"
    assert main(["tomogram", "--config", cfg, "--out", str(out)]) == 0
    sino = OpticalSinogram.load(str(out))
    # two coherent humps along the displacement axis, five fringe peaks at pi/2
    assert _count_maxima(sino.x_axis, sino.values[0], 1e-3) == 2
    assert _count_maxima(sino.x_axis, sino.values[18], 1e-3) == 5


def test_tomogram_samples_mode(tmp_path):
    queries = [[0.3, 1.0, 0.0, 0.0], [-0.7, 0.6, -0.8, 0.4], [1.1, 0.0, 1.0, -0.2]]
    cfg = cfg_file(
        tmp_path,
        tomogram_cfg({"kind": "gaussian", "alpha": [0.5, 0.5]}, mode="samples", queries=queries),
    )
    out = tmp_path / "samples.csv"
    assert main(["tomogram", "--config", cfg, "--out", str(out)]) == 0

    data = read_csv(out)
    assert data.dtype.names == ("X", "mu", "nu", "delta", "w")
    state = gaussian_from_epsilon(1.0, 1.0j, 0.5 + 0.5j)
    for row in np.atleast_1d(data):
        want = tomogram_gaussian(
            state, TomogramQuery(X=row["X"], mu=row["mu"], nu=row["nu"], delta=row["delta"])
        )
        assert row["w"] == pytest.approx(float(want), abs=1e-12)


@pytest.mark.parametrize(
    "payload",
    [
        tomogram_cfg({"kind": "gaussian"}, mode="samples", queries=[[0.0, 0.0, 0.0, 0.0]]),
        tomogram_cfg({"kind": "number"}),
        tomogram_cfg({"kind": "gaussian"}, mode="pdf"),
        tomogram_cfg({"kind": "gaussian", "parity": "even"}),  # key not valid for gaussian
        tomogram_cfg({"kind": "cat", "alpha": 0.0, "parity": "odd"}),  # diverges
    ],
)
def test_tomogram_config_errors(tmp_path, payload):
    cfg = cfg_file(tmp_path, payload)
    assert main(["tomogram", "--config", cfg, "--out", str(tmp_path / "o.csv")]) == 2


def test_serial_reruns_are_byte_identical(tmp_path):
    cfg = cfg_file(
        tmp_path,
        tomogram_cfg({"kind": "cat", "alpha": 1.0, "parity": "odd"},
                     sinogram={"n_phi": 24, "x_min": -6, "x_max": 6, "n_x": 65}),
    )
    a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    assert main(["tomogram", "--config", cfg, "--out", str(a), "--serial"]) == 0
    assert main(["tomogram", "--config", cfg, "--out", str(b), "--serial"]) == 0
    assert main(["tomogram", "--config", cfg, "--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_sinogram_binary_round_trip(tmp_path):
    cfg = cfg_file(tmp_path, tomogram_cfg({"kind": "gaussian"}))
    out = tmp_path / "sino.bin"
    assert main(["tomogram", "--config", cfg, "--out", str(out), "--format", "bin"]) == 0
    sino = OpticalSinogram.load(str(out))
    again = tmp_path / "again.bin"
    sino.save(str(again), fmt="bin")
    assert again.read_bytes() == out.read_bytes()

    # the binary container is a valid reconstruction input
    rcfg = cfg_file(tmp_path, {"input": str(out)}, name="rec.json")
    assert main(["reconstruct", "--config", rcfg, "--out", str(tmp_path / "w.csv")]) == 0
    grid = WignerGrid.load(str(tmp_path / "w.csv"))
    i0 = np.searchsorted(grid.q_axis, 0.0)
    assert grid.values[i0, i0] == pytest.approx(2.0, rel=5e-2)


# ----------------------------------------------------------------- reconstruct


@pytest.fixture(scope="module")
def cat_sinogram_file(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("sino")
    cfg = cfg_file(tmp, tomogram_cfg({"kind": "cat", "alpha": 2.0, "parity": "even"}))
    out = tmp / "cat.csv"
    assert main(["tomogram", "--config", cfg, "--out", str(out)]) == 0
    return str(out)


def test_reconstruct_fbp_cat(tmp_path, cat_sinogram_file):
    cfg = cfg_file(
        tmp_path,
        {
            "input": cat_sinogram_file,
            "method": "fbp",
            "reference": {"kind": "cat", "alpha": 2.0, "parity": "even"},
        },
    )
    out = tmp_path / "wigner.csv"
    assert main(["reconstruct", "--config", cfg, "--out", str(out), "--plot"]) == 0

    report = json.loads((tmp_path / "wigner.report.json").read_text())
    assert report["method"] == "fbp"
    assert report["input"] == cat_sinogram_file
    assert abs(report["normalization"] - 1.0) <= report["norm_tol"]
    assert report["rel_l2_error"] < report["l2_tol"] == 0.05

    svg = tmp_path / "wigner.svg"
    assert svg.exists()
    assert ET.parse(svg).getroot().tag.endswith("svg")


def test_reconstruct_quality_gate_failure_still_writes_outputs(tmp_path, cat_sinogram_file):
    cfg = cfg_file(
        tmp_path,
        {
            "input": cat_sinogram_file,
            "method": "fbp",
            "reference": {"kind": "cat", "alpha": 2.0, "parity": "even"},
            "l2_tol": 1e-4,
        },
    )
    out = tmp_path / "wigner.csv"
    assert main(["reconstruct", "--config", cfg, "--out", str(out)]) == 1
    assert out.exists()
    report = json.loads((tmp_path / "wigner.report.json").read_text())
    assert report["rel_l2_error"] > 1e-4


def test_reconstruct_fourier_vacuum(tmp_path):
    scfg = cfg_file(tmp_path, tomogram_cfg({"kind": "gaussian"}), name="sino.json")
    sino_path = tmp_path / "vac.csv"
    assert main(["tomogram", "--config", scfg, "--out", str(sino_path)]) == 0

    rcfg = cfg_file(
        tmp_path,
        {
            "input": str(sino_path),
            "method": "fourier",
            "grid": {"q_min": -6, "q_max": 6, "n_q": 81, "p_min": -6, "p_max": 6, "n_p": 81},
            "fourier": {"k_max": 8.0, "n_nodes": 97, "n_y": 257},
        },
        name="rec.json",
    )
    out = tmp_path / "w.csv"
    assert main(["reconstruct", "--config", rcfg, "--out", str(out)]) == 0
    grid = WignerGrid.load(str(out))
    assert grid.values[40, 40] == pytest.approx(2.0, abs=2e-2)
    report = json.loads((tmp_path / "w.report.json").read_text())
    assert report["normalization"] == pytest.approx(1.0, abs=1e-2)
    assert report["rel_l2_error"] is None


def test_reconstruct_missing_and_invalid_input(tmp_path):
    cfg = cfg_file(tmp_path, {"input": str(tmp_path / "nope.csv")})
    assert main(["reconstruct", "--config", cfg, "--out", str(tmp_path / "w.csv")]) == 2

    garbage = tmp_path / "garbage.csv"
    garbage.write_text("this,is,not\na,sinogram,file\n")
    cfg2 = cfg_file(tmp_path, {"input": str(garbage)}, name="g.json")
    assert main(["reconstruct", "--config", cfg2, "--out", str(tmp_path / "w.csv")]) == 2


def test_reconstruct_rejects_few_angles_and_bad_apodization(tmp_path):
    scfg = cfg_file(
        tmp_path,
        tomogram_cfg({"kind": "gaussian"}, sinogram={"n_phi": 12, "x_min": -6, "x_max": 6, "n_x": 65}),
        name="sino.json",
    )
    sparse = tmp_path / "sparse.csv"
    assert main(["tomogram", "--config", scfg, "--out", str(sparse)]) == 0
    cfg = cfg_file(tmp_path, {"input": str(sparse)})
    assert main(["reconstruct", "--config", cfg, "--out", str(tmp_path / "w.csv")]) == 2

    dense = tmp_path / "dense.csv"
    scfg2 = cfg_file(
        tmp_path,
        tomogram_cfg({"kind": "gaussian"}, sinogram={"n_phi": 24, "x_min": -6, "x_max": 6, "n_x": 65}),
        name="sino2.json",
    )
    assert main(["tomogram", "--config", scfg2, "--out", str(dense)]) == 0
    cfg2 = cfg_file(tmp_path, {"input": str(dense), "apodization": "hamming"}, name="apod.json")
    assert main(["reconstruct", "--config", cfg2, "--out", str(tmp_path / "w.csv")]) == 2


# --------------------------------------------------------------------- verify


def verify_cfg(**extra):
    payload = {"kappa": 0.4, "omega_drive": 2.0}
    payload.update(extra)
    return payload


def test_verify_default_suite(tmp_path):
    cfg = cfg_file(tmp_path, verify_cfg())
    out = tmp_path / "report.json"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert set(report["checks"]) == {
        "pde_gaussian_max", "pde_gaussian_order", "pde_cat_max", "pde_cat_order", "moments_max",
    }
    assert all(report["checks"].values())
    assert report["pde_gaussian"]["max_abs_residual"] < report["thresholds"]["pde_max"]
    assert report["moments"]["max_abs_residual"] < report["thresholds"]["moment_max"]


def test_verify_negative_control_detected(tmp_path):
    cfg = cfg_file(tmp_path, verify_cfg(suite="negative-control"))
    out = tmp_path / "report.json"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["checks"]["negative_control_detected"] is True
    assert report["pde_frozen"]["max_abs_residual"] >= report["thresholds"]["negative_min"]
    assert report["passed"] is True


def test_verify_custom_probe(tmp_path):
    probe = {
        "x_values": [0.0, 1.0],
        "mu_values": [0.5, 1.0],
        "nu_values": [0.0, 0.5],
        "t_values": [0.5, 1.0],
        "delta_values": [0.0],
        "h_t": 0.002,
    }
    cfg = cfg_file(tmp_path, verify_cfg(probe=probe))
    out = tmp_path / "report.json"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["pde_gaussian"]["grid_spec"]["t_values"] == [0.5, 1.0]
    assert report["pde_gaussian"]["h_t"] == 0.002


@pytest.mark.parametrize(
    "extra",
    [
        {"probe": {"mu_values": [0.0005, 1.0]}},  # too close to the degenerate frame
        {"suite": "bogus"},
        {"cat": {"alpha": 1.0, "parity": "even", "phase": 0.3}},  # unknown cat key
    ],
)
def test_verify_config_errors(tmp_path, extra):
    cfg = cfg_file(tmp_path, verify_cfg(**extra))
    assert main(["verify", "--config", cfg, "--out", str(tmp_path / "r.json")]) == 2
