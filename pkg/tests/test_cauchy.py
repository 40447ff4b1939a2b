import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnls_ist import (GridMismatchError, Potential, SpatialGrid, SpectralFunction,
                      cauchy_minus, cauchy_plus, fourier_forward, fourier_inverse,
                      hilbert, make_dual_spectral_grid)
from oracles import cauchy_plus_quadrature

GRID = SpatialGrid(16.0, 1024)
SPEC = make_dual_spectral_grid(GRID)
LAM = SPEC.nodes


def smooth_function(seed, grid=SPEC):
    """Sum of a few complex Gaussian bumps with random centres and widths."""
    rng = np.random.default_rng(seed)
    lam = grid.nodes
    f = np.zeros(grid.M, dtype=complex)
    for _ in range(3):
        c, w = rng.uniform(-5, 5), rng.uniform(0.3, 3)
        amp = rng.standard_normal() + 1j * rng.standard_normal()
        f += amp * np.exp(-((lam - c) / w) ** 2) * np.exp(1j * rng.uniform(-3, 3) * lam)
    return f


def test_fourier_of_zero():
    assert np.all(fourier_forward(np.zeros(GRID.N), GRID).values == 0)
    assert np.all(fourier_inverse(SpectralFunction(SPEC, np.zeros(SPEC.M))) == 0)


def test_fourier_gaussian_closed_form():
    F = fourier_forward(Potential.from_function(GRID, lambda x: np.exp(-x ** 2)))
    assert np.max(np.abs(F.values - np.sqrt(np.pi) * np.exp(-LAM ** 2))) < 1e-13


def test_fourier_inverse_gaussian_closed_form():
    f = fourier_inverse(SpectralFunction(SPEC, np.sqrt(np.pi) * np.exp(-LAM ** 2)))
    assert np.max(np.abs(f - np.exp(-GRID.nodes ** 2))) < 1e-13


def test_fourier_shift_theorem():
    x = GRID.nodes
    a = 37 * GRID.dx
    f = np.exp(-x ** 2) * (1 + 0.2j * x)
    F = fourier_forward(f, GRID).values
    Fs = fourier_forward(np.roll(f, 37), GRID).values
    assert np.max(np.abs(Fs - np.exp(-2j * LAM * a) * F)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 31))
def test_fourier_roundtrip(seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(GRID.N) + 1j * rng.standard_normal(GRID.N)
    assert np.max(np.abs(fourier_inverse(fourier_forward(f, GRID)) - f)) < 1e-12


def test_fourier_grid_mismatch():
    with pytest.raises(GridMismatchError):
        fourier_forward(np.zeros(10), GRID)
    with pytest.raises(TypeError):
        fourier_forward(np.zeros(GRID.N))


def test_constant_splits_consistently():
    f = np.full(SPEC.M, 2.0 - 1.0j)
    assert np.max(np.abs(cauchy_plus(f, SPEC) - cauchy_minus(f, SPEC) - f)) < 1e-13


def test_pole_below_is_plus_boundary_value():
    # 1/(lam + i) extends analytically to the upper half plane; its projected
    # versions carry a 1/lam tail, which the periodic grid truncates, so only
    # the interior is compared and at the truncation scale.
    f = 1.0 / (LAM + 1j)
    inner = np.abs(LAM) < 10
    assert np.max(np.abs(cauchy_plus(f, SPEC) - f)[inner]) < 1e-2
    assert np.max(np.abs(cauchy_minus(f, SPEC))[inner]) < 1e-2


def test_pole_above_is_minus_boundary_value():
    f = 1.0 / (LAM - 1j)
    inner = np.abs(LAM) < 10
    assert np.max(np.abs(cauchy_plus(f, SPEC))[inner]) < 1e-2
    assert np.max(np.abs(cauchy_minus(f, SPEC) + f)[inner]) < 1e-2


def test_faster_decay_tightens_pole_check():
    f = 1.0 / (LAM + 1j) ** 3
    assert np.max(np.abs(cauchy_plus(f, SPEC) - f)) < 1e-5
    assert np.max(np.abs(cauchy_minus(f, SPEC))) < 1e-5


@pytest.mark.parametrize("lam0", [0.0, 0.7, -2.1, 4.0])
def test_plus_matches_principal_value_quadrature(lam0):
    def f(s):
        return np.exp(-s ** 2) * (1 + 0.3j * s)

    k = int(np.argmin(np.abs(LAM - lam0)))
    # the projected function decays like 1/lam, so grid periodisation costs ~1e-4
    assert abs(cauchy_plus(f(LAM), SPEC)[k] - cauchy_plus_quadrature(f, LAM[k])) < 5e-4


@pytest.mark.parametrize("lam0", [0.0, 0.7, -2.1])
def test_plus_matches_quadrature_for_zero_mean(lam0):
    def f(s):
        return s * np.exp(-s ** 2)

    k = int(np.argmin(np.abs(LAM - lam0)))
    # 1/lam^2 tail: periodisation leaves an almost constant offset of ~2e-5
    assert abs(cauchy_plus(f(LAM), SPEC)[k] - cauchy_plus_quadrature(f, LAM[k])) < 5e-5


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 31))
def test_projector_algebra(seed):
    f = smooth_function(seed)
    cp, cm = cauchy_plus(f, SPEC), cauchy_minus(f, SPEC)
    assert np.max(np.abs(cp - cm - f)) < 1e-12
    assert np.max(np.abs(cauchy_plus(cp, SPEC) - cp)) < 1e-12
    assert np.max(np.abs(cauchy_minus(cm, SPEC) + cm)) < 1e-12
    assert np.max(np.abs(cauchy_plus(cm, SPEC))) < 1e-12
    assert np.max(np.abs(cauchy_minus(cp, SPEC))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 31))
def test_parseval_split(seed):
    f = smooth_function(seed)
    n = np.vdot(f, f).real
    parts = np.vdot(cauchy_plus(f, SPEC), cauchy_plus(f, SPEC)).real + \
        np.vdot(cauchy_minus(f, SPEC), cauchy_minus(f, SPEC)).real
    assert parts == pytest.approx(n, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 31))
def test_plemelj_relations(seed):
    f = smooth_function(seed)
    H = hilbert(f, SPEC)
    assert np.max(np.abs(0.5 * f - 0.5 * H - cauchy_plus(f, SPEC))) < 1e-12
    assert np.max(np.abs(-0.5 * f - 0.5 * H - cauchy_minus(f, SPEC))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 31))
def test_hilbert_of_real_is_imaginary(seed):
    f = smooth_function(seed).real
    H = hilbert(f, SPEC)
    assert np.max(np.abs(H.real)) < 1e-13 * max(1.0, np.max(np.abs(H)))


def test_hilbert_is_unitary():
    f = smooth_function(3)
    H = hilbert(f, SPEC)
    assert np.vdot(H, H).real == pytest.approx(np.vdot(f, f).real, rel=1e-13)
    assert np.max(np.abs(hilbert(H, SPEC) - f)) < 1e-12


def test_zero_maps_to_zero():
    z = np.zeros(SPEC.M)
    for op in (cauchy_plus, cauchy_minus, hilbert):
        assert np.all(op(z, SPEC) == 0)


def test_spectral_function_wrapping():
    f = SpectralFunction(SPEC, smooth_function(1))
    out = cauchy_plus(f)
    assert isinstance(out, SpectralFunction)
    assert np.allclose(out.values, cauchy_plus(f.values, SPEC))
    with pytest.raises(GridMismatchError):
        cauchy_plus(f, make_dual_spectral_grid(SpatialGrid(8.0, 1024)))
    with pytest.raises(TypeError):
        cauchy_plus(np.zeros(SPEC.M))


def test_projectors_act_on_batches():
    F = np.stack([smooth_function(s) for s in range(4)])
    batch = cauchy_plus(F, SPEC)
    for row, f in zip(batch, F):
        assert np.allclose(row, cauchy_plus(f, SPEC), atol=1e-15)
