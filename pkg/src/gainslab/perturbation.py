"""Closed-form first/second-order predictions and the universal lasing bounds.

The small parameters are the Lorentzian response t_hat and 1/K (both about
1e-3 for realistic slabs).  First order decouples the two mode equations;
second order keeps the three lowest orders and is available for uniform and
double pumping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.optimize import bisect

from .errors import InvalidInputError, NoConvergenceError
from .medium import PER_NM_TO_PER_CM, GainMedium, PumpScheme, dimensionless_state

BOUND_TOL = 1.0e-9
BOUND_BRACKET = (1.0e-6, 20.0)
SMALL_NU = 1.0e-6


def _tanh_half_over_nu(nu: float) -> float:
    """tanh(nu/2)/nu, series for tiny nu (removable singularity)."""
    if nu < SMALL_NU:
        return 0.5 - nu**2 / 24.0
    return math.tanh(0.5 * nu) / nu


def _expm1_over_nu(nu: float) -> float:
    """(1 - exp(-nu))/nu, series for tiny nu."""
    if nu < SMALL_NU:
        return 1.0 - 0.5 * nu + nu**2 / 6.0
    return -math.expm1(-nu) / nu


def _sinh_over_nu(nu: float) -> float:
    if nu < SMALL_NU:
        return 1.0 + nu**2 / 6.0
    return math.sinh(nu) / nu


def eta_slope(pump: PumpScheme, nu: float) -> float:
    """Slope a(nu) in eta = (1 + g_hat) a(nu) - 1/2; a(0) = 1/2."""
    if pump is PumpScheme.DOUBLE:
        return _tanh_half_over_nu(nu)
    if pump is PumpScheme.SINGLE:
        return 0.5 * _expm1_over_nu(nu)
    return 0.5


def log_index_ratio(n0: float) -> float:
    """ln((n0+1)/(n0-1)), the uniform-slab reflection logarithm."""
    return math.log((n0 + 1.0) / (n0 - 1.0))


@dataclass(frozen=True)
class PerturbCoeffs:
    """Expansion coefficients at the medium's gain level.

    ``xi`` and C2..C4 belong to the second-order double-pump expansion and
    are None for single pumping, where only the first order is available;
    ``zeta`` is the single-pump phase correction and None otherwise.
    """

    eta: float
    C1: float
    xi: float | None = None
    C2: float | None = None
    C3: float | None = None
    C4: float | None = None
    zeta: float | None = None


def coeffs(medium: GainMedium) -> PerturbCoeffs:
    """Evaluate the perturbation coefficients for the medium's pump scheme."""
    n0, g, nu = medium.n0, medium.g_hat, medium.nu
    nsq = n0**2 - 1.0
    eta = (1.0 + g) * eta_slope(medium.pump, nu) - 0.5
    C1 = 2.0 * n0 * g / nsq
    if medium.pump is PumpScheme.SINGLE:
        if g == 0.0:
            raise ZeroDivisionError("zeta is undefined at g_star = 0")
        zeta = 0.5 * (1.0 + math.exp(-nu) - (-math.expm1(-nu)) / g)
        return PerturbCoeffs(eta=eta, C1=C1, zeta=zeta)
    xi = 0.125 * (
        1.0
        + (1.0 + g) * (1.0 + g + (g - 3.0) * _sinh_over_nu(nu)) / (math.cosh(nu) + 1.0)
    )
    C2 = (3.0 * n0**2 + 4.0 * n0 - 1.0) * n0 * g**2 / (2.0 * nsq**2)
    C3 = -n0 * (3.0 * n0**2 - 1.0) * g**2 / (2.0 * nsq**2)
    C4 = -n0 * (1.0 + g) / nsq
    return PerturbCoeffs(eta=eta, C1=C1, xi=xi, C2=C2, C3=C3, C4=C4)


def first_order_mode(medium: GainMedium, m: int) -> tuple[float, float]:
    """First-order (omega_hat, g_hat) prediction for mode m.

    Frequency from K = pi m / n0; gain from the decoupled phase-balance
    equation pi m * eta * Im(t_hat) = ln((n0+1)/(n0-1)).
    """
    omega_hat = math.pi * m / (medium.n0 * medium.K0)
    t_im = dimensionless_state(medium, omega_hat).t_hat.imag
    eta_req = log_index_ratio(medium.n0) / (math.pi * m * t_im)
    g_hat = (eta_req + 0.5) / eta_slope(medium.pump, medium.nu) - 1.0
    return omega_hat, g_hat


def resonance_first_order(medium: GainMedium) -> tuple[int, float, float]:
    """First-order resonance prediction: (mode number, K, g_star cm^-1).

    The gain is the closed form g_star(nu) obtained by eliminating eta at
    the resonance mode; nu -> 0 reduces to (2/L) ln((n0+1)/(n0-1)) for
    every pump scheme.
    """
    if medium.lambda0 / medium.L_nm > 0.05:
        warnings.warn(
            "lambda0/L is not small; first-order predictions may be poor",
            stacklevel=2,
        )
    m = round(2.0 * medium.n0 * medium.L_nm / medium.lambda0)
    K0 = math.pi * m / medium.n0
    base = log_index_ratio(medium.n0) / medium.L_nm + 0.5 * medium.alpha0_nm
    g_star_nm = base / eta_slope(medium.pump, medium.nu) - medium.alpha0_nm
    return m, K0, g_star_nm * PER_NM_TO_PER_CM


@dataclass(frozen=True)
class UniversalBounds:
    """Decay-constant ceilings for lasing: weak (medium-independent) and
    improved (uses alpha0 L and n0); damping factors are 1 - exp(-nu)."""

    nu_weak: float
    damping_weak: float
    nu_max: float | None = None
    damping_max: float | None = None


def universal_bounds(pump: PumpScheme, medium: GainMedium | None = None) -> UniversalBounds:
    """Solve the transcendental lasing bounds for the given pump geometry.

    The weak bound needs no medium: it only uses g_hat <= 1.  The improved
    bound additionally caps the closed-form g_star(nu) at alpha0 and needs
    alpha0 L and n0 from ``medium``.
    """
    if pump is PumpScheme.UNIFORM:
        raise InvalidInputError("uniform pumping has no decay constant to bound")
    if pump is PumpScheme.DOUBLE:
        def weak(nu):
            return 4.0 * math.tanh(0.5 * nu) - nu
    else:
        def weak(nu):
            return _expm1_over_nu(nu) - 0.5

    nu_weak = bisect(weak, *BOUND_BRACKET, xtol=BOUND_TOL)
    nu_max = damping_max = None
    if medium is not None:
        ceiling = log_index_ratio(medium.n0) / (medium.alpha0_nm * medium.L_nm) + 0.5
        if pump is PumpScheme.DOUBLE:
            def improved(nu):
                return 2.0 * math.tanh(0.5 * nu) - ceiling * nu
        else:
            def improved(nu):
                return _expm1_over_nu(nu) - ceiling

        nu_max = bisect(improved, *BOUND_BRACKET, xtol=BOUND_TOL)
        damping_max = -math.expm1(-nu_max)
    return UniversalBounds(
        nu_weak=nu_weak,
        damping_weak=-math.expm1(-nu_weak),
        nu_max=nu_max,
        damping_max=damping_max,
    )


def singularity_second_order(medium: GainMedium, m: int):
    """Second-order prediction of the mode-m singularity.

    Solves the second-order phase-balance condition for g_hat at fixed
    frequency (scalar Newton), then matches the wave-number expansion to
    omega_hat * K0 by an outer scalar Newton.  Single pumping has no
    published second order, so the record falls back to the first-order
    prediction and is flagged Perturb1.
    """
    from .solver import SolveMethod, SpectralSingularity, residual_system

    def record(omega_hat: float, g_hat: float, method: SolveMethod) -> SpectralSingularity:
        g_star = g_hat * medium.alpha0
        e1, e2 = residual_system(medium, omega_hat, g_star, m)
        return SpectralSingularity(
            m=m,
            K=omega_hat * medium.K0,
            wavelength=medium.lambda0 / omega_hat,
            g_star=g_star,
            residual=max(abs(e1), abs(e2)),
            method=method,
        )

    if medium.pump is PumpScheme.SINGLE:
        omega_hat, g_hat = first_order_mode(medium, m)
        return record(omega_hat, g_hat, SolveMethod.PERTURB1)

    n0, nu = medium.n0, medium.nu
    nsq = n0**2 - 1.0
    ln_r = log_index_ratio(n0)
    a = eta_slope(medium.pump, nu)
    sinh_ratio = _sinh_over_nu(nu)
    cosh1 = math.cosh(nu) + 1.0
    pim = math.pi * m

    def xi_of(g: float) -> float:
        return 0.125 * (1.0 + (1.0 + g) * (1.0 + g + (g - 3.0) * sinh_ratio) / cosh1)

    def phase_balance(g: float, t: complex) -> float:
        eta = (1.0 + g) * a - 0.5
        return (
            pim * eta * t.imag
            - ln_r
            + 6.0 * pim * xi_of(g) * t.real * t.imag
            - (n0 * g / nsq + eta * ln_r) * t.real
        )

    def k_expansion(g: float, t: complex) -> float:
        eta = (1.0 + g) * a - 0.5
        xi = xi_of(g)
        return (
            pim * (1.0 + eta * t.real + 3.0 * xi * (t.real**2 - t.imag**2))
            + (n0 * g / nsq + eta * ln_r) * t.imag
        ) / n0

    def solve_gain(t: complex, g0: float) -> float:
        g = g0
        for _ in range(40):
            val = phase_balance(g, t)
            h = 1.0e-7 * max(abs(g), 1.0e-2)
            dval = (phase_balance(g + h, t) - phase_balance(g - h, t)) / (2.0 * h)
            step = -val / dval
            g += step
            if abs(step) < 1.0e-15 * max(abs(g), 1.0):
                return g
        raise NoConvergenceError(f"mode {m}: gain balance stalled", 40, abs(val))

    omega_hat, g_seed = first_order_mode(medium, m)

    def mismatch(omega: float) -> tuple[float, float]:
        t = dimensionless_state(medium, omega).t_hat
        g = solve_gain(t, g_seed)
        return omega * medium.K0 - k_expansion(g, t), g

    g_hat = g_seed
    for _ in range(30):
        val, g_hat = mismatch(omega_hat)
        h = 1.0e-8 * omega_hat
        vp, _ = mismatch(omega_hat + h)
        vm, _ = mismatch(omega_hat - h)
        step = -val / ((vp - vm) / (2.0 * h))
        omega_hat += step
        if abs(step) < 1.0e-15 * omega_hat:
            break
    else:
        raise NoConvergenceError(f"mode {m}: wave-number matching stalled", 30, abs(val))
    _, g_hat = mismatch(omega_hat)
    return record(omega_hat, g_hat, SolveMethod.PERTURB2)
