"""Uniform grids, sampled fields and the norms shared by every other module.

The spatial grid lives on ``[-L, L)`` and its dual spectral grid carries the
variable ``lambda`` of the transform ``f^(lambda) = int exp(-2i lambda x) f dx``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import GridMismatchError

TRUNCATION_TOL = 1e-10


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _frozen(a, dtype=complex) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid ``x_j = -L + j*dx`` with ``N`` nodes and ``dx = 2L/N``."""

    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"half width must be positive, got {self.L}")
        if not _is_power_of_two(int(self.N)) or int(self.N) != self.N:
            raise ValueError(f"node count must be a power of two, got {self.N}")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def nodes(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.N)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in numpy FFT order (``d/dx -> i k``)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.N, self.dx)


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform grid ``lambda_k = (k - M/2) * dlam``, symmetric about zero up to
    the left endpoint."""

    M: int
    dlam: float

    def __post_init__(self):
        if not _is_power_of_two(int(self.M)) or int(self.M) != self.M:
            raise ValueError(f"node count must be a power of two, got {self.M}")
        if not self.dlam > 0:
            raise ValueError(f"spacing must be positive, got {self.dlam}")

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.M) - self.M // 2) * self.dlam

    @property
    def zero_index(self) -> int:
        return self.M // 2


def make_dual_spectral_grid(g: SpatialGrid) -> SpectralGrid:
    """Frequencies of the discrete transform with kernel ``exp(-2i lambda x)``.

    ``M = N`` and ``dlam = pi / (N dx)``.
    """
    return SpectralGrid(M=g.N, dlam=np.pi / (g.N * g.dx))


def make_dual_spatial_grid(s: SpectralGrid) -> SpatialGrid:
    """Inverse of :func:`make_dual_spectral_grid`."""
    dx = np.pi / (s.M * s.dlam)
    return SpatialGrid(L=0.5 * s.M * dx, N=s.M)


def grids_match(a, b, rtol: float = 1e-12) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, SpatialGrid):
        return a.N == b.N and np.isclose(a.L, b.L, rtol=rtol, atol=0)
    return a.M == b.M and np.isclose(a.dlam, b.dlam, rtol=rtol, atol=0)


@dataclass(frozen=True)
class Potential:
    """Complex samples of a potential on a :class:`SpatialGrid`."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (self.grid.N,):
            raise GridMismatchError(
                f"expected {self.grid.N} samples, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: SpatialGrid, func) -> "Potential":
        return cls(grid, func(grid.nodes))

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def edge_decay(self) -> float:
        return float(max(abs(self.values[0]), abs(self.values[-1])))

    def is_admissible(self, tol: float = TRUNCATION_TOL) -> bool:
        return bool(np.all(np.isfinite(self.values))) and self.edge_decay < tol

    def __mul__(self, c):
        return Potential(self.grid, self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class ScatteringData:
    """Reflection coefficient ``rho`` (and optionally ``alpha``, ``beta``)
    sampled on a :class:`SpectralGrid`."""

    grid: SpectralGrid
    rho: np.ndarray
    alpha: Optional[np.ndarray] = None
    beta: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("rho", "alpha", "beta"):
            val = getattr(self, name)
            if val is None:
                continue
            arr = _frozen(val)
            if arr.shape != (self.grid.M,):
                raise GridMismatchError(
                    f"{name}: expected {self.grid.M} samples, got shape {arr.shape}")
            object.__setattr__(self, name, arr)

    @property
    def lam(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def spectral_margin(self) -> float:
        """``min_k (1 - lambda_k |rho_k|^2)``."""
        return float(np.min(1.0 - self.lam * np.abs(self.rho) ** 2))

    def determinant_defect(self) -> float:
        """``max | |alpha|^2 - lambda |beta|^2 - 1 |``; needs alpha and beta."""
        if self.alpha is None or self.beta is None:
            raise ValueError("alpha and beta are not populated")
        det = np.abs(self.alpha) ** 2 - self.lam * np.abs(self.beta) ** 2
        return float(np.max(np.abs(det - 1.0)))

    def replace(self, **changes) -> "ScatteringData":
        kw = dict(grid=self.grid, rho=self.rho, alpha=self.alpha, beta=self.beta)
        kw.update(changes)
        return ScatteringData(**kw)


@dataclass(frozen=True)
class WeightedNorms:
    l2: float
    h22: float
    weighted_l2: float = field(default=0.0)
    second_derivative_l2: float = field(default=0.0)


def _grid_of(grid_or_len, n):
    if isinstance(grid_or_len, SpatialGrid):
        return grid_or_len.N, grid_or_len.dx
    if isinstance(grid_or_len, SpectralGrid):
        return grid_or_len.M, grid_or_len.dlam
    raise TypeError(f"not a grid: {grid_or_len!r}")


def quadrature(values, grid) -> complex:
    """Trapezoid rule on a uniform grid (end points carry half weight)."""
    values = np.asarray(values)
    n, h = _grid_of(grid, values.shape[-1])
    if values.shape[-1] != n:
        raise GridMismatchError(f"expected {n} samples, got {values.shape[-1]}")
    return h * (np.sum(values, axis=-1) - 0.5 * (values[..., 0] + values[..., -1]))


def l2_norm(values, grid) -> float:
    return float(np.sqrt(np.real(quadrature(np.abs(values) ** 2, grid))))


def spectral_derivative(values, grid: SpatialGrid, order: int = 1) -> np.ndarray:
    k = grid.wavenumbers
    return np.fft.ifft((1j * k) ** order * np.fft.fft(values))


def h22_norm(p: Potential) -> WeightedNorms:
    """``L^2`` and ``H^{2,2}`` norms, the latter as
    ``(||<D>^2 q||^2 + ||<x>^2 q||^2)^{1/2}`` with spectral differentiation."""
    g = p.grid
    q = p.values
    x = g.nodes
    k = g.wavenumbers
    smooth = np.fft.ifft((1.0 + k ** 2) * np.fft.fft(q))
    weighted = l2_norm((1.0 + x ** 2) * q, g)
    d2 = l2_norm(spectral_derivative(q, g, 2), g)
    h22 = float(np.hypot(l2_norm(smooth, g), weighted))
    return WeightedNorms(l2=l2_norm(q, g), h22=h22, weighted_l2=weighted,
                         second_derivative_l2=d2)
