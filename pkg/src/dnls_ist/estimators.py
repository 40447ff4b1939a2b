"""Estimator-style wrappers around the direct and inverse maps.

Rows of ``X`` are potentials sampled on the grid ``x_j = -L + j*2L/N``;
rows of the transformed output are reflection coefficients on the dual
spectral grid.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (check_complex_rows, check_edge_decay, check_positive,
                          check_power_of_two)
from .direct import direct_map
from .evolution import evolve_rho, gauge_forward, gauge_inverse
from .grid import (TRUNCATION_TOL, Potential, ScatteringData, SpatialGrid,
                   make_dual_spectral_grid)
from .inverse import inverse_map
from .oracle import StepperConfig, step_dnls1, step_dnls2


class _GridMixin:
    def _fit_grid(self, X):
        X = check_complex_rows(X)
        check_positive(self.half_width, "half_width")
        n = check_power_of_two(X.shape[1], "number of grid points")
        self.n_features_in_ = n
        self.spatial_grid_ = SpatialGrid(float(self.half_width), n)
        self.spectral_grid_ = make_dual_spectral_grid(self.spatial_grid_)
        return X

    def _rows(self, X):
        check_is_fitted(self, "spatial_grid_")
        X = check_complex_rows(X, self.n_features_in_)
        check_edge_decay(X, self.truncation_tol)
        return X


class ScatteringTransform(_GridMixin, TransformerMixin, BaseEstimator):
    """Map potentials to reflection coefficients and back.

    Parameters
    ----------
    half_width : float
        The grid spans ``[-half_width, half_width)``.
    substeps : int
        RK4 steps per cell in the Jost integration.
    tol : float
        Residual bound for the linear solves of the inverse map.
    truncation_tol : float
        Largest admissible ``|q|`` at the two grid ends.
    threads : int
    """

    def __init__(self, half_width=16.0, substeps=4, tol=1e-10,
                 truncation_tol=TRUNCATION_TOL, threads=1):
        self.half_width = half_width
        self.substeps = substeps
        self.tol = tol
        self.truncation_tol = truncation_tol
        self.threads = threads

    def fit(self, X, y=None):
        self._fit_grid(X)
        return self

    def transform(self, X):
        X = self._rows(X)
        out = [direct_map(Potential(self.spatial_grid_, row), substeps=self.substeps,
                          threads=self.threads).rho for row in X]
        return np.array(out)

    def inverse_transform(self, R):
        check_is_fitted(self, "spatial_grid_")
        R = check_complex_rows(R, self.spectral_grid_.M, name="R")
        out = [inverse_map(ScatteringData(self.spectral_grid_, row),
                           xs=self.spatial_grid_, tol=self.tol,
                           threads=self.threads).values for row in R]
        return np.array(out)


class DNLSFlow(_GridMixin, TransformerMixin, BaseEstimator):
    """Carry initial data forward to time ``t``.

    Parameters
    ----------
    t : float
    half_width : float
    equation : {"dnls2", "dnls1"}
    method : {"ist", "pde"}
        Transform pipeline or the pseudospectral stepper.
    dt : float
        Step size for ``method="pde"``.
    tol, truncation_tol, threads
        As in :class:`ScatteringTransform`.
    """

    def __init__(self, t=0.5, half_width=16.0, equation="dnls2", method="ist",
                 dt=1e-4, tol=1e-10, truncation_tol=TRUNCATION_TOL, threads=1):
        self.t = t
        self.half_width = half_width
        self.equation = equation
        self.method = method
        self.dt = dt
        self.tol = tol
        self.truncation_tol = truncation_tol
        self.threads = threads

    def fit(self, X, y=None):
        if self.equation not in ("dnls1", "dnls2"):
            raise ValueError(f"unknown equation {self.equation!r}")
        if self.method not in ("ist", "pde"):
            raise ValueError(f"unknown method {self.method!r}")
        self._fit_grid(X)
        return self

    def _evolve(self, p: Potential) -> Potential:
        if self.method == "pde":
            cfg = StepperConfig(dt=self.dt, t_final=self.t)
            step = step_dnls2 if self.equation == "dnls2" else step_dnls1
            return step(p, cfg)
        if self.equation == "dnls1":
            p = gauge_forward(p)
        d = evolve_rho(direct_map(p, threads=self.threads), self.t)
        out = inverse_map(d, xs=self.spatial_grid_, tol=self.tol, threads=self.threads)
        return gauge_inverse(out) if self.equation == "dnls1" else out

    def transform(self, X):
        X = self._rows(X)
        return np.array([self._evolve(Potential(self.spatial_grid_, row)).values
                         for row in X])
