"""Semiclassical machinery for the slab scattering problem.

Inside the slab the local wave number squared factorizes as
K^2 - v(z) = K^2 r^2 (1 - s f(z)), so every semiclassical quantity reduces
to the phase integral of sqrt(1 - s f) and boundary data of f.  The zero
condition implemented here is

    exp(2 i r K * phase_integral) = boundary_factor,

whose roots over real K are the zero-width lasing resonances.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureError, SingularConfigurationError, TurningPointError
from .medium import DimensionlessState, GainProfile

QUAD_EPSABS = 1.0e-13
QUAD_EPSREL = 1.0e-12


@dataclass(frozen=True)
class WkbContext:
    """Immutable bundle (K, r, s, profile) all wkb operations consume."""

    K: float
    r: complex
    s: complex
    profile: GainProfile

    def __post_init__(self):
        if not self.K > 0.0:
            raise TurningPointError(f"wave number must be positive, got K = {self.K}")
        if not self.r.real > 0.0:
            raise TurningPointError(f"Re r must be positive, got r = {self.r}")
        _check_no_turning_point(self.s, self.profile)

    @classmethod
    def from_state(cls, state: DimensionlessState, profile: GainProfile) -> "WkbContext":
        return cls(K=state.K, r=state.r, s=state.s, profile=profile)


def _check_no_turning_point(s: complex, profile: GainProfile) -> None:
    # 1 - s*f traces the straight segment from 1 to 1 - s*f_min as z sweeps
    # the slab; it can only touch the branch cut (negative real axis) when
    # s*f_min is real.
    w = s * profile.f_min
    if abs(w.imag) <= 1.0e-12 * (1.0 + abs(w)) and 1.0 - w.real <= 0.0:
        raise TurningPointError(
            f"1 - s*f vanishes or crosses the branch cut inside the slab "
            f"(s = {s}, min f = {profile.f_min})"
        )


def phase_integral(ctx: WkbContext) -> complex:
    """Integral of sqrt(1 - s f(z)) over the slab, principal branch pointwise.

    Adaptive Gauss-Kronrod quadrature on the real and imaginary parts,
    abs/rel tolerances 1e-13 / 1e-12.  Exactly 1 for a uniform profile
    or s = 0.
    """
    if ctx.s == 0 or ctx.profile.is_uniform:
        return 1.0 + 0.0j
    s, f = ctx.s, ctx.profile.f

    def integrand(z: float) -> complex:
        return cmath.sqrt(1.0 - s * f(z))

    re = _quad_checked(lambda z: integrand(z).real)
    im = _quad_checked(lambda z: integrand(z).imag)
    return complex(re, im)


def _quad_checked(func) -> float:
    value, abserr, info, *tail = quad(
        func, 0.0, 1.0, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, full_output=1
    )
    if tail:  # quad appends an explanation message when it did not converge
        raise QuadratureError(f"phase integral did not converge: {tail[0]}", abserr)
    return value


def boundary_factor(ctx: WkbContext) -> complex:
    """Two-bracket reflection product the phase exponential must match.

    Built from the profile's boundary values p_z = sqrt(1 - s f(z)) and
    q_z = i s f'(z) / (4 (1 - s f(z))) at z = 0, 1.  This general form is
    the production path; the per-profile closed forms are kept in the test
    suite as independent oracles.
    """
    K, r, s = ctx.K, ctx.r, ctx.s
    p0, q0 = _pq(ctx, 0.0)
    p1, q1 = _pq(ctx, 1.0)
    den0 = 1.0 - r * p0 - q0 / K
    den1 = 1.0 - r * p1 + q1 / K
    scale = 1.0 + abs(r)
    if abs(den0) < 1.0e-14 * scale or abs(den1) < 1.0e-14 * scale:
        raise SingularConfigurationError(
            f"boundary-factor denominator vanishes (den0 = {den0}, den1 = {den1})"
        )
    return ((1.0 + r * p0 - q0 / K) / den0) * ((1.0 + r * p1 + q1 / K) / den1)


def _pq(ctx: WkbContext, z: float) -> tuple[complex, complex]:
    fz = ctx.profile.f(z)
    dfz = ctx.profile.df(z)
    one = 1.0 - ctx.s * fz
    return cmath.sqrt(one), 0.25j * ctx.s * dfz / one


def rho_sigma(ctx: WkbContext) -> tuple[float, float]:
    """Real and imaginary parts of 1 / (2 r * phase_integral)."""
    inv = 1.0 / (2.0 * ctx.r * phase_integral(ctx))
    return inv.real, inv.imag


def validity_metric(ctx: WkbContext, n_grid: int = 10_001) -> float:
    """Maximum of the semiclassical reliability criterion over the slab.

    The criterion |(4 (K^2 - v) v'' + 5 v'^2) / (16 (K^2 - v)^3)| must be
    small for the amplitude factor to be negligible.  Evaluated on a dense
    grid (endpoints included); the factor K^2 r^2 common to v', v'' and
    K^2 - v is cancelled analytically before evaluation.
    """
    z = np.linspace(0.0, 1.0, max(int(n_grid), 3))
    f = np.asarray(ctx.profile.f(z), dtype=complex)
    df = np.asarray(ctx.profile.df(z), dtype=complex)
    d2f = np.asarray(ctx.profile.d2f(z), dtype=complex)
    s = ctx.s
    one = 1.0 - s * f
    num = 4.0 * one * s * d2f + 5.0 * s**2 * df**2
    den = 16.0 * (ctx.K * ctx.r) ** 2 * one**3
    return float(np.max(np.abs(num / den)))


def jost_residual(ctx: WkbContext) -> complex:
    """exp(2 i r K * phase_integral) - boundary_factor; zero exactly at a
    semiclassical spectral singularity."""
    return cmath.exp(2.0j * ctx.r * ctx.K * phase_integral(ctx)) - boundary_factor(ctx)


def wkb_phi1_endpoint(ctx: WkbContext) -> tuple[complex, complex]:
    """Semiclassical left-incidence solution and derivative at the far face.

    Combines the two WKB branches with coefficients fixed by the initial
    values (1, -iK) at z = 0; used to cross-check the direct integration
    oracle, never inside the root search.
    """
    K, r, s = ctx.K, ctx.r, ctx.s
    I = phase_integral(ctx)  # noqa: E741 (phase integral)
    f0, df0 = ctx.profile.f(0.0), ctx.profile.df(0.0)
    f1, df1 = ctx.profile.f(1.0), ctx.profile.df(1.0)
    w0 = (K * r) ** 2 * (1.0 - s * f0)  # K^2 - v at the faces
    w1 = (K * r) ** 2 * (1.0 - s * f1)
    dv0 = (K * r) ** 2 * s * df0
    dv1 = (K * r) ** 2 * s * df1
    R0 = w0 ** -0.25
    R1 = w1 ** -0.25
    A = (1.0 - K * R0**2 + 0.25j * R0**6 * dv0) / (2.0 * R0)
    B = (1.0 + K * R0**2 - 0.25j * R0**6 * dv0) / (2.0 * R0)
    psi_p = R1 * cmath.exp(1j * r * K * I)
    psi_m = R1 * cmath.exp(-1j * r * K * I)
    # d/dz log(psi_pm) = v'/(4 (K^2-v)) +- i sqrt(K^2-v)
    root1 = cmath.sqrt(w1)
    dpsi_p = (dv1 / (4.0 * w1) + 1j * root1) * psi_p
    dpsi_m = (dv1 / (4.0 * w1) - 1j * root1) * psi_m
    return A * psi_p + B * psi_m, A * dpsi_p + B * dpsi_m
