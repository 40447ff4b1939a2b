import time

import numpy as np
import pytest

from dnls_ist import (Potential, SpatialGrid, StepperConfig, direct_map,
                      inverse_map, solve_dnls1, solve_dnls2, step_dnls1, step_dnls2)

AMPLITUDE = 0.3
L_REF, N_REF = 16.0, 1024

ACCEPTANCE_LINES = []


def gaussian(x, amplitude=AMPLITUDE):
    return amplitude * np.exp(-x ** 2)


@pytest.fixture(scope="session")
def ref_grid():
    return SpatialGrid(L_REF, N_REF)


@pytest.fixture(scope="session")
def ref_potential(ref_grid):
    return Potential.from_function(ref_grid, gaussian)


@pytest.fixture(scope="session")
def timed_direct(ref_potential):
    t0 = time.perf_counter()
    d = direct_map(ref_potential)
    return d, time.perf_counter() - t0


@pytest.fixture(scope="session")
def ref_data(timed_direct):
    return timed_direct[0]


@pytest.fixture(scope="session")
def timed_inverse(ref_data, ref_grid):
    t0 = time.perf_counter()
    q, report = inverse_map(ref_data, xs=ref_grid, return_report=True)
    return q, report, time.perf_counter() - t0


@pytest.fixture(scope="session")
def small_grid():
    return SpatialGrid(16.0, 256)


@pytest.fixture(scope="session")
def small_potential(small_grid):
    return Potential.from_function(small_grid, gaussian)


@pytest.fixture(scope="session")
def small_data(small_potential):
    return direct_map(small_potential)


@pytest.fixture(scope="session")
def ist_dnls2_half(ref_potential):
    return solve_dnls2(ref_potential, 0.5)


@pytest.fixture(scope="session")
def pde_dnls2_half(ref_potential):
    return step_dnls2(ref_potential, StepperConfig(dt=1e-4, t_final=0.5))


@pytest.fixture(scope="session")
def ist_dnls1_half(ref_potential):
    return solve_dnls1(ref_potential, 0.5)


@pytest.fixture(scope="session")
def pde_dnls1_half(ref_potential):
    return step_dnls1(ref_potential, StepperConfig(dt=1e-4, t_final=0.5))


@pytest.fixture(scope="session")
def pde_dnls2_unit(ref_potential):
    return step_dnls2(ref_potential, StepperConfig(dt=1e-4, t_final=1.0))


@pytest.fixture(scope="session")
def pde_dnls1_unit(ref_potential):
    return step_dnls1(ref_potential, StepperConfig(dt=1e-4, t_final=1.0))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
