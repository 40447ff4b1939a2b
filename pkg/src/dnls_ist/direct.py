"""Direct scattering: Jost solutions and the reflection coefficient.

The first columns of the normalised Jost solutions ``n+`` (normalised at
``x = +inf``) and ``n-`` (at ``x = -inf``) are written as ``(n11, lambda*m)``;
the pair ``(n11, m)`` obeys

    n11' = lambda q m - (i/2)|q|^2 n11
    m'   = 2i lambda m + conj(q) n11 + (i/2)|q|^2 m

which has no singularity at ``lambda = 0``.  Both are integrated to ``x = 0``
with classical RK4 on a refined grid, with ``q`` trigonometrically
interpolated to the intermediate stages.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cauchy import projector_plan
from .errors import AlphaVanishes, NonFiniteError, SpectralConditionViolated
from .grid import (Potential, ScatteringData, SpectralGrid,
                   make_dual_spectral_grid)

DEFAULT_SUBSTEPS = 4
MARGIN_FLOOR = 1e-6
ALPHA_FLOOR = 1e-6


@dataclass(frozen=True)
class JostTrace:
    """Values at ``x = 0`` of the reduced first columns of ``n+`` and ``n-``."""

    lam: np.ndarray
    n11_plus: np.ndarray
    m_plus: np.ndarray
    n11_minus: np.ndarray
    m_minus: np.ndarray

    @property
    def n21_plus(self):
        return self.lam * self.m_plus

    @property
    def n21_minus(self):
        return self.lam * self.m_minus


@dataclass(frozen=True)
class DirectResult:
    """Scattering data together with the Jost values it was computed from."""

    data: ScatteringData
    jost: JostTrace
    substeps: int = DEFAULT_SUBSTEPS


@dataclass(frozen=True)
class SpectralCertificate:
    margin: float
    min_abs_alpha: float
    worst_lambda: float
    ok: bool


def _refine(q: np.ndarray, factor: int) -> np.ndarray:
    """Trigonometric interpolation onto a grid ``factor`` times finer."""
    n = q.size
    Q = np.fft.fft(q)
    Qf = np.zeros(n * factor, dtype=complex)
    Qf[: n // 2] = Q[: n // 2]
    Qf[-(n // 2):] = Q[-(n // 2):]
    return np.fft.ifft(Qf) * factor


def _rhs(qv, lam, n11, m):
    a2 = abs(qv) ** 2
    return (lam * qv * m - 0.5j * a2 * n11,
            2j * lam * m + np.conj(qv) * n11 + 0.5j * a2 * m)


def _integrate(fine: np.ndarray, lam: np.ndarray, h: float, start: int,
               stop: int, step: int):
    """RK4 on the half-step samples ``fine`` from index ``start`` to ``stop``."""
    n11 = np.ones(lam.shape, dtype=complex)
    m = np.zeros(lam.shape, dtype=complex)
    hh = h if step > 0 else -h
    for i in range(start, stop, 2 * step):
        qa, qm, qb = fine[i], fine[i + step], fine[i + 2 * step]
        a1, b1 = _rhs(qa, lam, n11, m)
        a2, b2 = _rhs(qm, lam, n11 + 0.5 * hh * a1, m + 0.5 * hh * b1)
        a3, b3 = _rhs(qm, lam, n11 + 0.5 * hh * a2, m + 0.5 * hh * b2)
        a4, b4 = _rhs(qb, lam, n11 + hh * a3, m + hh * b3)
        n11 = n11 + hh / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        m = m + hh / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
    return n11, m


def _jost_at_zero(p: Potential, lam: np.ndarray, substeps: int):
    g = p.grid
    fine = _refine(p.values, 2 * substeps)
    fine = np.concatenate([fine, fine[:1]])  # periodic closure at x = +L
    h = g.dx / substeps
    i0 = (g.N // 2) * 2 * substeps
    n11p, mp = _integrate(fine, lam, h, fine.size - 1, i0, -1)
    n11m, mm = _integrate(fine, lam, h, 0, i0, +1)
    return n11p, mp, n11m, mm


def _trace(p, lam, substeps, threads=1) -> JostTrace:
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if threads > 1 and lam.size > threads:
        chunks = np.array_split(lam, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _jost_at_zero(p, c, substeps), chunks))
        cols = [np.concatenate([part[i] for part in parts]) for i in range(4)]
    else:
        cols = _jost_at_zero(p, lam, substeps)
    if not all(np.all(np.isfinite(c)) for c in cols):
        raise NonFiniteError("Jost integration produced non-finite values")
    return JostTrace(lam, *cols)


def jost_pair(p: Potential, lam, tol: float = 1e-10, max_substeps: int = 256) -> JostTrace:
    """Jost data at ``x = 0`` for the given spectral parameter(s).

    The number of RK4 substeps per grid cell is doubled until two successive
    refinements agree to ``tol``.
    """
    sub = DEFAULT_SUBSTEPS
    prev = _trace(p, lam, sub)
    while sub < max_substeps:
        sub *= 2
        cur = _trace(p, lam, sub)
        diff = max(np.max(np.abs(a - b)) for a, b in zip(
            (cur.n11_plus, cur.m_plus, cur.n11_minus, cur.m_minus),
            (prev.n11_plus, prev.m_plus, prev.n11_minus, prev.m_minus)))
        prev = cur
        if diff <= tol:
            break
    return prev


def coefficients_from_trace(tr: JostTrace):
    """``(alpha, beta)`` from the transition matrix ``(n-)^{-1} n+`` at ``x = 0``."""
    lam = tr.lam
    alpha = tr.n11_plus * np.conj(tr.n11_minus) - lam * tr.m_plus * np.conj(tr.m_minus)
    beta = (np.conj(tr.n11_minus) * np.conj(tr.m_plus)
            - np.conj(tr.n11_plus) * np.conj(tr.m_minus))
    return alpha, beta


def scattering_coefficients(p: Potential, substeps: int = DEFAULT_SUBSTEPS,
                            threads: int = 1, grid: SpectralGrid | None = None,
                            tol: float | None = None, max_substeps: int = 64
                            ) -> DirectResult:
    """Compute ``alpha``, ``beta`` and ``rho = beta/alpha`` on the dual grid.

    Parameters
    ----------
    p : Potential
    substeps : int
        RK4 steps per spatial cell.
    threads : int
        Split the spectral grid into this many chunks evaluated concurrently.
    grid : SpectralGrid, optional
        Defaults to the grid dual to ``p.grid``.
    tol : float, optional
        If given, ``substeps`` is doubled until ``rho`` changes by at most
        ``tol`` between refinements (capped at ``max_substeps``).

    Raises
    ------
    AlphaVanishes
        If ``|alpha|`` drops below the admissibility floor.
    """
    grid = grid or make_dual_spectral_grid(p.grid)
    tr = _trace(p, grid.nodes, substeps, threads)
    alpha, beta = coefficients_from_trace(tr)
    while tol is not None and substeps < max_substeps:
        substeps *= 2
        tr_fine = _trace(p, grid.nodes, substeps, threads)
        a2, b2 = coefficients_from_trace(tr_fine)
        change = np.max(np.abs(b2 / a2 - beta / alpha))
        tr, alpha, beta = tr_fine, a2, b2
        if change <= tol:
            break
    amin = np.abs(alpha)
    k = int(np.argmin(amin))
    if amin[k] < ALPHA_FLOOR:
        raise AlphaVanishes(f"|alpha| = {amin[k]:.3e} at lambda = {grid.nodes[k]:.6g}",
                            lam=float(grid.nodes[k]), margin=float(amin[k]))
    return DirectResult(ScatteringData(grid, beta / alpha, alpha, beta), tr, substeps)


def alpha_from_rho(d: ScatteringData) -> np.ndarray:
    """Trace formula ``alpha = exp(C- log(1 - lambda |rho|^2))``."""
    g = 1.0 - d.lam * np.abs(d.rho) ** 2
    if np.any(g <= 0):
        raise SpectralConditionViolated("1 - lambda |rho|^2 is not positive")
    return np.exp(projector_plan(d.grid.M, d.grid.dlam).minus(np.log(g).astype(complex)))


def spectral_check(d: ScatteringData, margin_floor: float = MARGIN_FLOOR,
                   alpha_floor: float = ALPHA_FLOOR, raise_on_failure: bool = True
                   ) -> SpectralCertificate:
    """Certify ``1 - lambda|rho|^2 >= margin_floor`` and ``|alpha| >= alpha_floor``.

    ``alpha`` is taken from ``d`` when present and from the trace formula
    otherwise.
    """
    lam = d.lam
    g = 1.0 - lam * np.abs(d.rho) ** 2
    k = int(np.argmin(g))
    margin = float(g[k])
    if margin < margin_floor:
        if raise_on_failure:
            raise SpectralConditionViolated(
                f"1 - lambda|rho|^2 = {margin:.3e} at lambda = {lam[k]:.6g}",
                lam=float(lam[k]), margin=margin)
        return SpectralCertificate(margin, float("nan"), float(lam[k]), False)
    alpha = d.alpha if d.alpha is not None else alpha_from_rho(d)
    ka = int(np.argmin(np.abs(alpha)))
    amin = float(np.abs(alpha[ka]))
    ok = amin >= alpha_floor
    if not ok and raise_on_failure:
        raise AlphaVanishes(f"|alpha| = {amin:.3e} at lambda = {lam[ka]:.6g}",
                            lam=float(lam[ka]), margin=amin)
    worst = float(lam[k] if ok else lam[ka])
    return SpectralCertificate(margin, amin, worst, ok)


def eta_diagnostic(p: Potential, lam, substeps: int = DEFAULT_SUBSTEPS):
    """Large-``lambda`` remainders ``(n11+(0) - 1, n21+(0) + conj(q(0))/(2i))``.

    Both tend to zero as ``|lambda|`` grows.
    """
    tr = _trace(p, lam, substeps)
    q0 = p.values[p.grid.N // 2]
    return tr.n11_plus - 1.0, tr.n21_plus + np.conj(q0) / 2j


def direct_map(p: Potential, check: bool = True, **kw) -> ScatteringData:
    """Scattering data of ``p``; optionally certified by :func:`spectral_check`."""
    d = scattering_coefficients(p, **kw).data
    if check:
        spectral_check(d)
    return d
