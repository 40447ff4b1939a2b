"""Time evolution on the scattering side and the gauge between the two
derivative NLS forms.

``DNLS2``: ``i q_t + q_xx + i q^2 conj(q)_x + |q|^4 q / 2 = 0``
``DNLS1``: ``i u_t + u_xx = i (|u|^2 u)_x``

They are related by ``q = u exp(-i int_{-inf}^x |u|^2)``.  Under the flow only
the phase of ``rho`` moves, as ``exp(-4i lam^2 t)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .direct import direct_map
from .grid import Potential, ScatteringData
from .inverse import DEFAULT_TOL, inverse_map


def evolve_rho(d: ScatteringData, t: float) -> ScatteringData:
    """Apply the exact phase ``exp(-4i lam^2 t)`` to ``rho`` and ``beta``;
    ``alpha`` is invariant."""
    phase = np.exp(-4j * d.lam ** 2 * t)
    beta = None if d.beta is None else d.beta * phase
    return ScatteringData(d.grid, d.rho * phase, d.alpha, beta)


@dataclass(frozen=True)
class EvolutionPlan:
    """Scattering data together with the time it should be carried to."""

    t: float
    source: ScatteringData

    def evolve(self) -> ScatteringData:
        return evolve_rho(self.source, self.t)

    def solve(self, **kw) -> Potential:
        return inverse_map(self.evolve(), **kw)


def solve_dnls2(q0: Potential, t: float, tol: float = DEFAULT_TOL,
                threads: int = 1, **inverse_kw) -> Potential:
    """Solution of DNLS2 at time ``t`` by direct map, phase evolution and
    inverse map."""
    d = direct_map(q0, threads=threads)
    return inverse_map(evolve_rho(d, t), xs=q0.grid, tol=tol, threads=threads,
                       **inverse_kw)


def _phase_integral(p: Potential) -> np.ndarray:
    return cumulative_trapezoid(np.abs(p.values) ** 2, dx=p.grid.dx, initial=0.0)


def gauge_forward(u: Potential) -> Potential:
    """``q = u exp(-i int_{-L}^x |u|^2)`` with a trapezoid prefix sum."""
    return Potential(u.grid, u.values * np.exp(-1j * _phase_integral(u)))


def gauge_inverse(q: Potential) -> Potential:
    """``u = q exp(+i int_{-L}^x |q|^2)``; exact inverse of
    :func:`gauge_forward` because ``|q| = |u|``."""
    return Potential(q.grid, q.values * np.exp(1j * _phase_integral(q)))


def solve_dnls1(u0: Potential, t: float, **kw) -> Potential:
    """Solution of DNLS1 at time ``t`` through the gauge and :func:`solve_dnls2`."""
    return gauge_inverse(solve_dnls2(gauge_forward(u0), t, **kw))
