"""Numerical inverse scattering for the derivative nonlinear Schroedinger
equation in its gauge-equivalent form.

Potentials on ``[-L, L)`` are mapped to reflection coefficients ``rho`` on the
Fourier-dual grid by integrating the Jost ODEs, evolved exactly by the phase
``exp(-4i lam^2 t)``, and mapped back by solving the scalar Beals-Coifman
equation at every output point.
"""

__version__ = "0.1.0"

from .cauchy import (SpectralFunction, cauchy_minus, cauchy_plus,  # noqa: E402
                     fourier_forward, fourier_inverse, hilbert)
from .direct import (DirectResult, JostTrace, SpectralCertificate,  # noqa: E402
                     alpha_from_rho, direct_map, jost_pair,
                     scattering_coefficients, spectral_check)
from .errors import (AlphaVanishes, BlowupDetected, ConvergenceError,  # noqa: E402
                     CoverageGapError, DataError, GridMismatchError, NoConvergence,
                     NonFiniteError, ScatteringError, SingularSystem,
                     SpectralConditionViolated)
from .estimators import DNLSFlow, ScatteringTransform  # noqa: E402
from .evolution import (EvolutionPlan, evolve_rho, gauge_forward,  # noqa: E402
                        gauge_inverse, solve_dnls1, solve_dnls2)
from .grid import (Potential, ScatteringData, SpatialGrid, SpectralGrid,  # noqa: E402
                   WeightedNorms, h22_norm, make_dual_spatial_grid,
                   make_dual_spectral_grid, quadrature)
from .inverse import (BCState, DeltaFactors, bc_apply, bc_solve,  # noqa: E402
                      delta_factor, glue, inverse_map, reconstruct_left,
                      reconstruct_right)
from .oracle import (StepperConfig, conserved, pde_residual,  # noqa: E402
                     step_dnls1, step_dnls2)

__all__ = [name for name in dir() if not name.startswith("_")]
