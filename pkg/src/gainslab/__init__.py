"""Spectral singularities of planar slab gain media.

Locates the zero-width lasing resonances of a pumped dielectric slab via a
semiclassical phase-balance condition, with closed-form perturbative
predictions and a direct-integration oracle for verification.
"""

from .medium import (
    SAMPLE_MEDIUM,
    DimensionlessState,
    GainMedium,
    GainProfile,
    PumpScheme,
    dimensionless_state,
    physical_gain,
    profile_f,
)
from .oracle import OdeSolution, exact_uniform_condition, integrate_phi1, ode_jost
from .perturbation import (
    PerturbCoeffs,
    UniversalBounds,
    coeffs,
    resonance_first_order,
    singularity_second_order,
    universal_bounds,
)
from .solver import (
    SolveConfig,
    SolveMethod,
    SolveReport,
    SpectralSingularity,
    critical_nu,
    enumerate_modes,
    residual_system,
    solve_mode,
)
from .wkb import (
    WkbContext,
    boundary_factor,
    jost_residual,
    phase_integral,
    rho_sigma,
    validity_metric,
)

__version__ = "0.1.0"

__all__ = [
    "SAMPLE_MEDIUM",
    "DimensionlessState",
    "GainMedium",
    "GainProfile",
    "OdeSolution",
    "PerturbCoeffs",
    "PumpScheme",
    "SolveConfig",
    "SolveMethod",
    "SolveReport",
    "SpectralSingularity",
    "UniversalBounds",
    "WkbContext",
    "boundary_factor",
    "coeffs",
    "critical_nu",
    "dimensionless_state",
    "enumerate_modes",
    "exact_uniform_condition",
    "integrate_phi1",
    "jost_residual",
    "ode_jost",
    "phase_integral",
    "physical_gain",
    "profile_f",
    "residual_system",
    "resonance_first_order",
    "rho_sigma",
    "singularity_second_order",
    "solve_mode",
    "universal_bounds",
    "validity_metric",
]
