"""Shared grid file formats: CSV triples and a JSON-header binary container.

Container layout: one UTF-8 JSON line (terminated by ``\\n``) describing axes,
shape and dtype, followed by the flat values as little-endian float64 in
row-major order.  Uniform axes are stored as (first, last, n) and rebuilt with
``np.linspace`` so reload is bit-exact.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

_FORMAT = "iontomo-grid"
_VERSION = 1


def _atomic_write(path: str, data: bytes) -> None:
    # temp-then-rename in the destination directory, never a partial file
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_container(path: str, kind: str, axis_names: list[str], axes: list[np.ndarray], values: np.ndarray) -> None:
    header = {
        "format": _FORMAT,
        "version": _VERSION,
        "kind": kind,
        "axis_names": axis_names,
        "axes": {
            name: {"first": float(ax[0]), "last": float(ax[-1]), "n": int(ax.size)}
            for name, ax in zip(axis_names, axes)
        },
        "shape": list(values.shape),
        "dtype": "<f8",
        "order": "C",
    }
    payload = np.ascontiguousarray(values, dtype="<f8").tobytes()
    _atomic_write(path, json.dumps(header, sort_keys=True).encode() + b"\n" + payload)


def load_container(path: str):
    """Returns (kind, axes list, values). Raises ValueError on malformed input."""
    with open(path, "rb") as fh:
        line = fh.readline()
        payload = fh.read()
    try:
        header = json.loads(line.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: not a grid container ({exc})") from exc
    if not isinstance(header, dict) or header.get("format") != _FORMAT:
        raise ValueError(f"{path}: missing container format marker")
    if header.get("version") != _VERSION:
        raise ValueError(f"{path}: unsupported container version {header.get('version')!r}")
    shape = tuple(header["shape"])
    n = int(np.prod(shape))
    if len(payload) != 8 * n:
        raise ValueError(f"{path}: payload holds {len(payload)} bytes, expected {8 * n}")
    values = np.frombuffer(payload, dtype="<f8").reshape(shape).copy()
    axes = []
    for name in header["axis_names"]:
        spec = header["axes"][name]
        axes.append(np.linspace(spec["first"], spec["last"], spec["n"]))
    return header["kind"], axes, values


def is_container(path: str) -> bool:
    with open(path, "rb") as fh:
        first = fh.read(1)
    return first == b"{"


def save_csv_triples(path: str, colnames: tuple[str, str, str], ax0: np.ndarray, ax1: np.ndarray, values: np.ndarray) -> None:
    """Row-major (ax0-major) CSV with one (a0, a1, value) triple per line."""
    lines = [",".join(colnames)]
    for i, a in enumerate(ax0):
        for j, b in enumerate(ax1):
            lines.append(f"{a:.17g},{b:.17g},{values[i, j]:.17g}")
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def load_csv_triples(path: str, colnames: tuple[str, str, str]):
    """Inverse of :func:`save_csv_triples`; returns (ax0, ax1, values)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
    if header != ",".join(colnames):
        raise ValueError(f"{path}: expected header {','.join(colnames)!r}, got {header!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ValueError(f"{path}: expected 3 columns, got {data.shape[1]}")
    col0 = data[:, 0]
    # length of the first ax0 run gives the inner (ax1) dimension
    changes = np.nonzero(col0 != col0[0])[0]
    n1 = int(changes[0]) if changes.size else data.shape[0]
    if data.shape[0] % n1 != 0:
        raise ValueError(f"{path}: ragged grid ({data.shape[0]} rows, inner run {n1})")
    n0 = data.shape[0] // n1
    ax0 = col0[::n1].copy()
    ax1 = data[:n1, 1].copy()
    values = data[:, 2].reshape(n0, n1).copy()
    return ax0, ax1, values
