"""CSV and JSON file formats.

Potentials: columns ``x,re_q,im_q``.  Scattering data: columns
``lambda,re_rho,im_rho`` optionally followed by
``re_alpha,im_alpha,re_beta,im_beta``.  Numbers carry 17 significant digits
so that a write/read cycle is lossless.
"""
from __future__ import annotations

import json
import warnings
from pathlib import Path

import numpy as np

from .errors import DataError
from .grid import Potential, ScatteringData, SpatialGrid, SpectralGrid

FMT = "%.17g"
POTENTIAL_COLUMNS = ["x", "re_q", "im_q"]
SCATTERING_COLUMNS = ["lambda", "re_rho", "im_rho"]
COEFF_COLUMNS = ["re_alpha", "im_alpha", "re_beta", "im_beta"]
GRID_SCHEMA = "dnls-ist/grid/1"


def _load(path, expected):
    path = Path(path)
    try:
        with path.open() as fh:
            header = fh.readline().strip().split(",")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # empty file: caught below
            table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if table.size == 0:
        raise DataError(f"{path}: no data rows")
    if header[: len(expected)] != expected or table.shape[1] != len(header):
        raise DataError(f"{path}: expected columns starting with {','.join(expected)}")
    if not np.all(np.isfinite(table)):
        raise DataError(f"{path}: non-finite entries")
    return header, table


def _uniform_step(nodes, path):
    if nodes.size < 2:
        raise DataError(f"{path}: need at least two rows")
    steps = np.diff(nodes)
    h = (nodes[-1] - nodes[0]) / (nodes.size - 1)
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise DataError(f"{path}: nodes are not uniformly spaced")
    return h


def _grid_from_x(x, path) -> SpatialGrid:
    h = _uniform_step(x, path)
    try:
        grid = SpatialGrid(L=0.5 * h * x.size, N=x.size)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if abs(x[0] + grid.L) > 1e-9 * grid.L:
        raise DataError(f"{path}: grid must start at -L = {-grid.L}")
    return grid


def _grid_from_lam(lam, path) -> SpectralGrid:
    h = _uniform_step(lam, path)
    try:
        grid = SpectralGrid(M=lam.size, dlam=h)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if abs(lam[grid.zero_index]) > 1e-9 * h:
        raise DataError(f"{path}: lambda = 0 must sit at row M/2")
    return grid


def write_potential(path, p: Potential) -> None:
    q = p.values
    np.savetxt(path, np.column_stack([p.x, q.real, q.imag]), fmt=FMT,
               delimiter=",", header=",".join(POTENTIAL_COLUMNS), comments="")


def read_potential(path) -> Potential:
    _, table = _load(path, POTENTIAL_COLUMNS)
    grid = _grid_from_x(table[:, 0], path)
    return Potential(grid, table[:, 1] + 1j * table[:, 2])


def write_scattering(path, d: ScatteringData) -> None:
    cols = [d.lam, d.rho.real, d.rho.imag]
    names = list(SCATTERING_COLUMNS)
    if d.alpha is not None and d.beta is not None:
        cols += [d.alpha.real, d.alpha.imag, d.beta.real, d.beta.imag]
        names += COEFF_COLUMNS
    np.savetxt(path, np.column_stack(cols), fmt=FMT, delimiter=",",
               header=",".join(names), comments="")


def read_scattering(path) -> ScatteringData:
    header, table = _load(path, SCATTERING_COLUMNS)
    grid = _grid_from_lam(table[:, 0], path)
    rho = table[:, 1] + 1j * table[:, 2]
    if header[3:] == COEFF_COLUMNS:
        return ScatteringData(grid, rho, table[:, 3] + 1j * table[:, 4],
                              table[:, 5] + 1j * table[:, 6])
    if len(header) != 3:
        raise DataError(f"{path}: unexpected columns {header[3:]}")
    return ScatteringData(grid, rho)


def grid_sidecar(spatial: SpatialGrid, spectral: SpectralGrid, tolerances=None) -> dict:
    return {"schema": GRID_SCHEMA, "L": spatial.L, "N": spatial.N,
            "dlambda": spectral.dlam, "M": spectral.M,
            "tolerances": dict(tolerances or {})}


def _plain(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_json(path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, default=_plain)
    Path(path).write_text(text + "\n")


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")
