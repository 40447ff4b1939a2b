"""Inverse scattering: the scalar Beals-Coifman equation and reconstruction.

For each spatial point ``x`` the right problem is the Fredholm equation

    (I - S) nu = S[1],
    S h = -C-[ C+(rho h e^{-2ix.}) * lam conj(rho) e^{2ix.} ],

and the potential is ``q(x) = -(1/pi) int e^{-2i lam x} rho (1 + nu) dlam``.
The left problem uses ``rho_breve = rho / Delta`` and is solved either by
reflecting the data (``lam -> -lam``, ``x -> -x``) onto a right-type problem
or with the mirrored operator directly.  The two halves are blended with a
smooth partition of unity supported in ``[-1, 1]``.
"""
from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .cauchy import projector_plan
from .errors import (CoverageGapError, NoConvergence, NonFiniteError,
                     SingularSystem, SpectralConditionViolated)
from .grid import (Potential, ScatteringData, SpatialGrid, SpectralGrid,
                   make_dual_spatial_grid)

DEFAULT_TOL = 1e-10
RESTART = 50
MAX_ITER = 400
DENSE_MAX = 2048
CONDITIONING_WARN = 1e-3


@dataclass(frozen=True)
class BCState:
    """Solution ``nu_sharp`` of the scalar equation at one point ``x``."""

    x: float
    nu_sharp: np.ndarray
    residual: float
    iterations: int = 0
    method: str = "krylov"


@dataclass(frozen=True)
class DeltaFactors:
    grid: SpectralGrid
    delta_plus: np.ndarray
    delta_minus: np.ndarray
    Delta: np.ndarray
    rho_breve: np.ndarray


@dataclass
class InverseReport:
    """Per-point solver statistics gathered by :func:`inverse_map`."""

    xs: np.ndarray
    side: np.ndarray
    residuals: np.ndarray
    iterations: np.ndarray
    methods: list = field(default_factory=list)
    spectral_margin: float = float("nan")
    ill_conditioned: bool = False

    def to_dict(self):
        return {
            "x": self.xs.tolist(),
            "side": self.side.tolist(),
            "residual": self.residuals.tolist(),
            "iterations": self.iterations.tolist(),
            "method": list(self.methods),
            "max_residual": float(np.max(self.residuals)) if self.residuals.size else 0.0,
            "spectral_margin": self.spectral_margin,
            "ill_conditioned": self.ill_conditioned,
        }


class _Operator:
    """``S`` (or its mirror) frozen at one ``x``."""

    def __init__(self, rho, x, grid: SpectralGrid, sign=1, mirrored=False):
        lam = grid.nodes
        self.plan = projector_plan(grid.M, grid.dlam)
        self.dlam = grid.dlam
        e = np.exp(-2j * x * lam)
        self.a = rho * e
        self.b = sign * lam * np.conj(rho) * np.conj(e)
        if mirrored:
            self.inner, self.outer = self.plan.minus, self.plan.plus
        else:
            self.inner, self.outer = self.plan.plus, self.plan.minus

    def __call__(self, h):
        return -self.outer(self.inner(self.a * h) * self.b)

    def matrix(self):
        eye = np.eye(self.a.size, dtype=complex)
        inner = self.inner(eye).T * self.a[None, :]
        outer = self.outer(eye).T * self.b[None, :]
        return -(outer @ inner)

    def norm(self, v):
        return float(np.sqrt(self.dlam) * np.linalg.norm(v))


def _check_rho(rho, grid):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (grid.M,):
        from .errors import GridMismatchError
        raise GridMismatchError(f"expected {grid.M} samples, got {rho.shape}")
    return rho


def bc_apply(rho, x: float, h, grid: SpectralGrid, sign: int = 1,
             mirrored: bool = False) -> np.ndarray:
    """One application of ``S`` at ``x`` (two projector calls, O(M log M)).

    ``sign=-1`` flips the multiplier ``lam conj(rho)``, which is the operator of
    the reflected left problem.  ``mirrored=True`` swaps the projectors and
    gives the left operator in its original variables.
    """
    rho = _check_rho(rho, grid)
    h = np.asarray(h, dtype=complex)
    if h.shape[-1] != grid.M:
        from .errors import GridMismatchError
        raise GridMismatchError(f"expected {grid.M} samples, got {h.shape}")
    return _Operator(rho, x, grid, sign, mirrored)(h)


def bc_matrix(rho, x: float, grid: SpectralGrid, sign: int = 1,
              mirrored: bool = False) -> np.ndarray:
    """Dense matrix of ``S`` assembled from the projector matrices."""
    return _Operator(_check_rho(rho, grid), x, grid, sign, mirrored).matrix()


def _dense_solve(op: _Operator, rhs, x):
    A = np.eye(rhs.size, dtype=complex) - op.matrix()
    try:
        nu = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"dense solve failed at x = {x}: {exc}", x=x) from exc
    if not np.all(np.isfinite(nu)):
        raise SingularSystem(f"dense solve produced non-finite values at x = {x}", x=x)
    return nu


def bc_solve(rho, x: float, grid: SpectralGrid, tol: float = DEFAULT_TOL,
             sign: int = 1, mirrored: bool = False, x0=None,
             method: str = "auto") -> BCState:
    """Solve ``(I - S) nu = S[1]`` at ``x``.

    Parameters
    ----------
    rho : array_like
        Reflection data on ``grid``.
    x : float
    grid : SpectralGrid
    tol : float
        Bound on the residual in the discrete ``L^2(dlam)`` norm.
    sign, mirrored
        Select the operator variant, see :func:`bc_apply`.
    x0 : array_like, optional
        Initial guess for the Krylov iteration.
    method : {"auto", "krylov", "dense"}
        ``"auto"`` runs restarted GMRES and falls back to a dense solve when
        the iteration stalls and ``M <= 2048``.

    Returns
    -------
    BCState
    """
    rho = _check_rho(rho, grid)
    op = _Operator(rho, x, grid, sign, mirrored)
    rhs = op(np.ones(grid.M, dtype=complex))
    M = grid.M

    def residual(nu):
        return op.norm(nu - op(nu) - rhs)

    if method == "dense":
        nu = _dense_solve(op, rhs, x)
        return BCState(float(x), nu, residual(nu), 0, "dense")
    if method not in ("auto", "krylov"):
        raise ValueError(f"unknown method {method!r}")

    count = [0]

    def tick(_):
        count[0] += 1

    A = LinearOperator((M, M), matvec=lambda v: v - op(v), dtype=complex)
    atol = 0.1 * tol / np.sqrt(grid.dlam)
    nu, info = gmres(A, rhs, x0=x0, rtol=0.0, atol=atol, restart=RESTART,
                     maxiter=max(1, MAX_ITER // RESTART), callback=tick,
                     callback_type="pr_norm")
    res = residual(nu) if np.all(np.isfinite(nu)) else np.inf
    if res <= tol:
        return BCState(float(x), nu, res, count[0], "krylov")
    if method == "auto" and M <= DENSE_MAX:
        nu = _dense_solve(op, rhs, x)
        res = residual(nu)
        if res <= tol:
            return BCState(float(x), nu, res, count[0], "dense")
    raise NoConvergence(f"residual {res:.3e} > {tol:.1e} at x = {x}", x=x, residual=res)


def _reconstruct_value(rho, nu, lam, x, dlam):
    return -np.sum(np.exp(-2j * lam * x) * rho * (1.0 + nu)) * dlam / np.pi


def _sweep(rho, xs, grid, tol, sign, mirrored, warm_start, method):
    lam = grid.nodes
    q = np.empty(len(xs), dtype=complex)
    res = np.empty(len(xs))
    its = np.empty(len(xs), dtype=int)
    methods = []
    guess = None
    for i, x in enumerate(xs):
        st = bc_solve(rho, x, grid, tol, sign, mirrored,
                      x0=guess if warm_start else None, method=method)
        guess = st.nu_sharp
        q[i] = _reconstruct_value(rho, st.nu_sharp, lam, x, grid.dlam)
        res[i], its[i] = st.residual, st.iterations
        methods.append(st.method)
    return q, res, its, methods


def _parallel_sweep(rho, xs, grid, tol, sign=1, mirrored=False, warm_start=True,
                    threads=1, method="auto"):
    xs = np.asarray(xs, dtype=float)
    if threads <= 1 or xs.size < 2 * threads:
        out = _sweep(rho, xs, grid, tol, sign, mirrored, warm_start, method)
    else:
        chunks = np.array_split(xs, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _sweep(rho, c, grid, tol, sign, mirrored,
                                                   warm_start, method), chunks))
        out = (np.concatenate([p[0] for p in parts]),
               np.concatenate([p[1] for p in parts]),
               np.concatenate([p[2] for p in parts]),
               sum((p[3] for p in parts), []))
    if not np.all(np.isfinite(out[0])):
        raise NonFiniteError("reconstruction produced non-finite values")
    return out


def oversample(d: ScatteringData, factor: int) -> ScatteringData:
    """Trigonometric interpolation of ``rho`` onto a ``factor``-times finer
    spectral grid covering the same ``lambda`` range."""
    if factor == 1:
        return d
    M = d.grid.M
    R = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(d.rho)))
    R2 = np.zeros(M * factor, dtype=complex)
    R2[(M * factor - M) // 2:(M * factor + M) // 2] = R
    rho = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(R2))) * factor
    return ScatteringData(SpectralGrid(M * factor, d.grid.dlam / factor), rho)


def _require_margin(d: ScatteringData):
    margin = d.spectral_margin
    if margin <= 0:
        raise SpectralConditionViolated(
            f"1 - lambda|rho|^2 reaches {margin:.3e}", margin=margin)
    return margin


def reconstruct_right(d: ScatteringData, xs, tol: float = DEFAULT_TOL,
                      warm_start: bool = True, threads: int = 1,
                      method: str = "auto") -> np.ndarray:
    """Potential from the right problem, accurate for ``x`` bounded below."""
    _require_margin(d)
    return _parallel_sweep(d.rho, xs, d.grid, tol, 1, False, warm_start,
                           threads, method)[0]


def delta_factor(d: ScatteringData) -> DeltaFactors:
    """Boundary values of the scalar factor with jump ``1 - lambda|rho|^2``.

    With ``h = log(1 - lambda|rho|^2)``: ``delta_pm = exp(-C_pm h)``, hence
    ``delta_plus (1 - lambda|rho|^2) = delta_minus`` and ``|Delta| = 1``.
    """
    _require_margin(d)
    h = np.log(1.0 - d.lam * np.abs(d.rho) ** 2).astype(complex)
    plan = projector_plan(d.grid.M, d.grid.dlam)
    dp = np.exp(-plan.plus(h))
    dm = np.exp(-plan.minus(h))
    Delta = dp * dm
    return DeltaFactors(d.grid, dp, dm, Delta, d.rho / Delta)


def reflect(values: np.ndarray) -> np.ndarray:
    """Samples of ``f(-lambda)`` on the same grid (the unpaired left end
    point wraps around)."""
    return np.roll(values[::-1], 1)


def _left_sweep(rho_breve, xs, grid, tol, path, warm_start, threads, method):
    xs = np.asarray(xs, dtype=float)
    if path == "reflect":
        q, res, its, methods = _parallel_sweep(reflect(rho_breve), -xs, grid, tol, -1,
                                               False, warm_start, threads, method)
        return q, res, its, methods
    if path == "mirrored":
        return _parallel_sweep(rho_breve, xs, grid, tol, 1, True, warm_start,
                               threads, method)
    raise ValueError(f"unknown path {path!r}")


def reconstruct_left(d: ScatteringData, xs, tol: float = DEFAULT_TOL,
                     path: str = "reflect", warm_start: bool = True,
                     threads: int = 1, method: str = "auto") -> np.ndarray:
    """Potential from the left problem, accurate for ``x`` bounded above.

    ``path="reflect"`` maps the data ``rho_breve`` through ``lam -> -lam`` and
    solves a right-type problem at ``-x``; ``path="mirrored"`` applies the
    left operator with swapped projectors in the original variables.
    """
    df = delta_factor(d)
    return _left_sweep(df.rho_breve, xs, d.grid, tol, path, warm_start,
                       threads, method)[0]


def _bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def chi(x) -> np.ndarray:
    """Smooth step: 0 on ``(-inf, -1]``, 1 on ``[1, inf)``."""
    x = np.asarray(x, dtype=float)
    a = _bump((1.0 + x) / 2.0)
    b = _bump((1.0 - x) / 2.0)
    return a / (a + b)


def glue(q_right, q_left, xs):
    """Blend ``chi * q_right + (1 - chi) * q_left``.

    Either input may hold NaN where it was not computed, provided the other
    half carries the full weight there.  Returns a :class:`Potential` when
    ``xs`` is a :class:`SpatialGrid`, else an array.
    """
    grid = xs if isinstance(xs, SpatialGrid) else None
    x = grid.nodes if grid is not None else np.asarray(xs, dtype=float)
    qr = np.asarray(q_right, dtype=complex)
    ql = np.asarray(q_left, dtype=complex)
    if qr.shape != x.shape or ql.shape != x.shape:
        raise CoverageGapError("inputs and points differ in length")
    w = chi(x)
    if np.any(~np.isfinite(qr) & (w > 0)) or np.any(~np.isfinite(ql) & (w < 1)):
        raise CoverageGapError("a half is missing where its weight is positive")
    out = np.where(w > 0, w * np.where(np.isfinite(qr), qr, 0), 0) + \
        np.where(w < 1, (1 - w) * np.where(np.isfinite(ql), ql, 0), 0)
    return Potential(grid, out) if grid is not None else out


def inverse_map(d: ScatteringData, xs=None, tol: float = DEFAULT_TOL,
                warm_start: bool = True, threads: int = 1, method: str = "auto",
                left_path: str = "reflect", oversample_factor: int = 1,
                return_report: bool = False):
    """Reconstruct the potential from scattering data.

    Parameters
    ----------
    d : ScatteringData
    xs : SpatialGrid or array_like, optional
        Output points; defaults to the spatial grid dual to ``d.grid``.
    tol : float
        Residual bound for every linear solve.
    oversample_factor : int
        Interpolate ``rho`` onto a finer spectral grid before solving; this
        widens the conjugate window and delays wrap-around for large ``|x|``.
    return_report : bool
        Also return an :class:`InverseReport`.

    Returns
    -------
    Potential or ndarray, optionally with an InverseReport
    """
    margin = _require_margin(d)
    if margin < CONDITIONING_WARN:
        warnings.warn(f"spectral margin {margin:.2e} is small; the linear systems "
                      "may be ill conditioned", RuntimeWarning, stacklevel=2)
    if xs is None:
        xs = make_dual_spatial_grid(d.grid)
    x = xs.nodes if isinstance(xs, SpatialGrid) else np.asarray(xs, dtype=float)
    work = oversample(d, oversample_factor)
    right = x >= -1.0
    left = x <= 1.0
    qr = np.full(x.shape, np.nan, dtype=complex)
    ql = np.full(x.shape, np.nan, dtype=complex)
    kw = dict(warm_start=warm_start, threads=threads, method=method)
    r = _parallel_sweep(work.rho, x[right], work.grid, tol, **kw)
    qr[right] = r[0]
    df = delta_factor(work)
    lft = _left_sweep(df.rho_breve, x[left], work.grid, tol, left_path, **kw)
    ql[left] = lft[0]
    out = glue(qr, ql, xs)
    if not return_report:
        return out
    report = InverseReport(
        xs=np.concatenate([x[right], x[left]]),
        side=np.array(["right"] * int(right.sum()) + ["left"] * int(left.sum())),
        residuals=np.concatenate([r[1], lft[1]]),
        iterations=np.concatenate([r[2], lft[2]]),
        methods=r[3] + lft[3],
        spectral_margin=margin,
        ill_conditioned=margin < CONDITIONING_WARN)
    return out, report


def source_norms(d: ScatteringData, xs) -> np.ndarray:
    """``||S[1](x, .)||`` in the discrete ``L^2(dlam)`` norm for each ``x``."""
    one = np.ones(d.grid.M, dtype=complex)
    out = []
    for x in np.asarray(xs, dtype=float):
        op = _Operator(d.rho, x, d.grid)
        out.append(op.norm(op(one)))
    return np.array(out)


def decay_exponent(xs, norms) -> float:
    """Least-squares slope of ``log norms`` against ``log(1 + |x|)``."""
    xs = np.asarray(xs, dtype=float)
    return float(np.polyfit(np.log1p(np.abs(xs)), np.log(norms), 1)[0])
