import numpy as np
import pytest

from dnls_ist import (BlowupDetected, GridMismatchError, Potential, SpatialGrid,
                      StepperConfig, conserved, gauge_forward, pde_residual,
                      step_dnls1, step_dnls2)
from dnls_ist.grid import l2_norm
from dnls_ist.oracle import spectral_antiderivative

COARSE = SpatialGrid(16.0, 256)


def coarse_gaussian(amplitude=0.3, k=0.0):
    return Potential.from_function(COARSE, lambda x: amplitude * np.exp(-x ** 2 + 1j * k * x))


@pytest.mark.parametrize("step", [step_dnls2, step_dnls1])
def test_zero_stays_zero(step):
    z = Potential(COARSE, np.zeros(COARSE.N))
    assert np.all(step(z, StepperConfig(1e-2, 0.3)).values == 0)


def test_zero_final_time_is_identity():
    p = coarse_gaussian()
    assert step_dnls2(p, StepperConfig(1e-2, 0.0)) is p


@pytest.mark.parametrize("step", [step_dnls2, step_dnls1])
def test_fourth_order_self_convergence(step):
    p = coarse_gaussian(0.5, 0.5)
    ref = step(p, StepperConfig(1e-3, 0.5)).values
    errs = [l2_norm(step(p, StepperConfig(dt, 0.5)).values - ref, COARSE)
            for dt in (0.04, 0.02, 0.01)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    assert all(12 < r < 20 for r in ratios), ratios


def test_mass_drift_dnls2(pde_dnls2_unit, ref_potential):
    m0 = l2_norm(ref_potential.values, ref_potential.grid)
    assert abs(l2_norm(pde_dnls2_unit.values, ref_potential.grid) - m0) < 1e-8 * m0


def test_gauge_consistency_between_integrators():
    g = SpatialGrid(16.0, 512)
    u0 = Potential.from_function(g, lambda x: 0.3 * np.exp(-x ** 2))
    cfg = StepperConfig(1e-3, 0.5)
    a = gauge_forward(step_dnls1(u0, cfg))
    b = step_dnls2(gauge_forward(u0), cfg)
    assert np.max(np.abs(a.values - b.values)) < 1e-4


def test_conserved_of_zero():
    assert conserved(Potential(COARSE, np.zeros(COARSE.N))) == {"M": 0.0, "E": 0.0, "P": 0.0}


def test_conserved_gaussian_closed_forms():
    g = SpatialGrid(16.0, 1024)
    c = conserved(Potential.from_function(g, lambda x: np.exp(-x ** 2)))
    assert c["M"] == pytest.approx(np.sqrt(np.pi / 2), rel=1e-12)
    # ||v_x||^2 = sqrt(pi/2), ||v||_6^6 = sqrt(pi/6)
    assert c["E"] == pytest.approx(np.sqrt(np.pi / 2) - np.sqrt(np.pi / 6) / 16, rel=1e-12)
    # real field: only the quartic part of P survives, ||v||_4^4 / 4 = sqrt(pi)/8
    assert c["P"] == pytest.approx(np.sqrt(np.pi) / 8, rel=1e-12)


def test_conserved_rejects_unknown_equation():
    with pytest.raises(ValueError):
        conserved(coarse_gaussian(), "kdv")


@pytest.mark.parametrize("equation,fixture", [("dnls2", "pde_dnls2_unit"),
                                              ("dnls1", "pde_dnls1_unit")])
def test_conserved_functionals_drift(request, ref_potential, equation, fixture):
    final = request.getfixturevalue(fixture)
    c0, c1 = conserved(ref_potential, equation), conserved(final, equation)
    for key in c0:
        assert abs(c1[key] - c0[key]) <= 1e-6 * abs(c0[key]), key


def test_spectral_antiderivative_is_exact_for_gaussian():
    g = SpatialGrid(16.0, 512)
    from scipy.special import erf
    F = spectral_antiderivative(np.exp(-g.nodes ** 2), g)
    exact = np.sqrt(np.pi) / 2 * (erf(g.nodes) + 1)
    assert np.max(np.abs(F - exact)) < 1e-12


def test_residual_of_zero():
    z = Potential(COARSE, np.zeros(COARSE.N))
    assert pde_residual(z, z, z, 1e-3) == 0.0


def test_residual_is_second_order_in_delta():
    p = coarse_gaussian(0.4, 0.3)
    res = []
    for delta in (0.02, 0.01):
        cfg = lambda t: StepperConfig(1e-4, t)  # noqa: E731
        snaps = [step_dnls2(p, cfg(0.2 + s * delta)) for s in (-1, 0, 1)]
        res.append(pde_residual(*snaps, delta))
    assert 3.5 < res[0] / res[1] < 4.5


def test_residual_grid_mismatch():
    a = coarse_gaussian()
    b = Potential.from_function(SpatialGrid(8.0, 256), lambda x: np.exp(-x ** 2))
    with pytest.raises(GridMismatchError):
        pde_residual(a, a, b, 1e-3)


def test_blowup_cap():
    with pytest.raises(BlowupDetected) as info:
        step_dnls2(coarse_gaussian(), StepperConfig(1e-2, 0.1, blowup_cap=0.1))
    assert info.value.t > 0


def test_config_validation():
    with pytest.raises(ValueError):
        StepperConfig(0.0, 1.0)
    with pytest.raises(ValueError):
        StepperConfig(1e-3, -1.0)
    with pytest.raises(ValueError):
        StepperConfig(1e-3, 1.0, scheme="euler")
    assert StepperConfig(0.3, 1.0).steps == 4
    assert StepperConfig(1e-4, 0.5).steps == 5000
