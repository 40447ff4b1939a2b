"""Discrete Fourier transform and Cauchy projectors on uniform grids.

The projectors are realised as Fourier multipliers.  On the spectral grid the
conjugate variable ``zeta`` is sampled on a half-shifted lattice
``zeta_j = (j - M/2 + 1/2) dzeta`` which contains neither zero nor an unpaired
Nyquist mode, so that ``C+ - C- = I`` and ``C+^2 = C+`` hold to rounding error.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridMismatchError
from .grid import (Potential, SpatialGrid, SpectralGrid, grids_match,
                   make_dual_spatial_grid, make_dual_spectral_grid)


@dataclass(frozen=True)
class SpectralFunction:
    """Samples of a function of ``lambda`` on a :class:`SpectralGrid`."""

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex, copy=True)
        if vals.shape[-1] != self.grid.M:
            raise GridMismatchError(
                f"expected {self.grid.M} samples, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


class _Plan:
    """Read-only precomputed modulation and masks for one spectral grid."""

    def __init__(self, M: int, dlam: float):
        lam = (np.arange(M) - M // 2) * dlam
        self.dzeta = np.pi / (M * dlam)
        self.zeta = (np.arange(M) - M // 2 + 0.5) * self.dzeta
        self.mod = np.exp(-1j * self.dzeta * lam)
        self.inv_mod = np.conj(self.mod)
        self.pos = self.zeta > 0
        self.neg = ~self.pos
        for arr in (self.zeta, self.mod, self.inv_mod, self.pos, self.neg):
            arr.setflags(write=False)

    def forward(self, f):
        return np.fft.fftshift(
            np.fft.fft(np.fft.ifftshift(f * self.mod, axes=-1)), axes=-1)

    def inverse(self, F):
        return np.fft.fftshift(
            np.fft.ifft(np.fft.ifftshift(F, axes=-1)), axes=-1) * self.inv_mod

    def plus(self, f):
        return self.inverse(np.where(self.pos, self.forward(f), 0))

    def minus(self, f):
        return -self.inverse(np.where(self.neg, self.forward(f), 0))


@lru_cache(maxsize=32)
def projector_plan(M: int, dlam: float) -> _Plan:
    return _Plan(M, dlam)


def _unwrap(f, grid):
    if isinstance(f, SpectralFunction):
        if grid is not None and not grids_match(grid, f.grid):
            raise GridMismatchError("function and grid disagree")
        return f.values, f.grid, True
    if grid is None:
        raise TypeError("a SpectralGrid is required for raw arrays")
    vals = np.asarray(f, dtype=complex)
    if vals.shape[-1] != grid.M:
        raise GridMismatchError(f"expected {grid.M} samples, got {vals.shape}")
    return vals, grid, False


def _wrap(vals, grid, as_function):
    return SpectralFunction(grid, vals) if as_function else vals


def fourier_forward(f, grid: SpatialGrid | None = None) -> SpectralFunction:
    """``f^(lambda) = sum_j exp(-2i lambda x_j) f_j dx`` on the dual grid.

    Parameters
    ----------
    f : Potential or array_like
        Samples on a spatial grid; raw arrays need ``grid``.
    grid : SpatialGrid, optional
    """
    if isinstance(f, Potential):
        grid, vals = f.grid, f.values
    else:
        if grid is None:
            raise TypeError("a SpatialGrid is required for raw arrays")
        vals = np.asarray(f, dtype=complex)
    if vals.shape[-1] != grid.N:
        raise GridMismatchError(f"expected {grid.N} samples, got {vals.shape}")
    spec = make_dual_spectral_grid(grid)
    # x_0 = -L sits at index N/2 after ifftshift, lambda_0 likewise
    F = grid.dx * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(vals, axes=-1)), axes=-1)
    return SpectralFunction(spec, F)


def fourier_inverse(F: SpectralFunction) -> np.ndarray:
    """``f(x) = (1/pi) sum_k exp(2i lambda_k x) F_k dlam`` on the dual spatial grid."""
    g = make_dual_spatial_grid(F.grid)
    vals = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(F.values, axes=-1)), axes=-1)
    return vals / g.dx


def cauchy_plus(f, grid: SpectralGrid | None = None):
    """Boundary value from above of the Cauchy integral on the ``lambda`` line.

    Accepts a :class:`SpectralFunction` or an array plus its grid; returns the
    same kind.  Leading axes of an array are treated as a batch.
    """
    vals, g, wrapped = _unwrap(f, grid)
    return _wrap(projector_plan(g.M, g.dlam).plus(vals), g, wrapped)


def cauchy_minus(f, grid: SpectralGrid | None = None):
    """Boundary value from below; ``C+ f - C- f = f``."""
    vals, g, wrapped = _unwrap(f, grid)
    return _wrap(projector_plan(g.M, g.dlam).minus(vals), g, wrapped)


def hilbert(f, grid: SpectralGrid | None = None):
    """``H = -(C+ + C-)``, the multiplier ``-sgn(zeta)``; exactly antisymmetric
    and unitary on the grid."""
    vals, g, wrapped = _unwrap(f, grid)
    plan = projector_plan(g.M, g.dlam)
    return _wrap(-(plan.plus(vals) + plan.minus(vals)), g, wrapped)
