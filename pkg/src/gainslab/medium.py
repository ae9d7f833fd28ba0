"""Physical slab description and its dimensionless reduction.

All lengths are converted to nanometers on ingestion and gain/absorption
coefficients to nm^-1; the public fields keep the conventional display
units (nm, um, cm^-1) so that inputs and outputs read like the optics
literature.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, InvalidInputError

log = logging.getLogger(__name__)

UM_TO_NM = 1.0e3
PER_CM_TO_PER_NM = 1.0e-7
PER_NM_TO_PER_CM = 1.0e7


class PumpScheme(Enum):
    """How the slab is pumped: uniformly, from one face, or from both."""

    UNIFORM = "uniform"
    SINGLE = "single"
    DOUBLE = "double"


@dataclass(frozen=True)
class GainProfile:
    """Shape function f of the gain variation on the unit interval.

    The net gain inside the slab varies as g_hat(z) = g_hat* + (1+g_hat*) f(z)
    with f <= 0, f = 0 at the pumped face(s).  ``nu`` is the decay constant
    (slab thickness over pump attenuation length); ``nu = 0`` or the uniform
    scheme gives f identically zero.
    """

    pump: PumpScheme
    nu: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu >= 0.0):
            raise InvalidInputError(f"decay constant must be finite and >= 0, got {self.nu}")

    @property
    def is_uniform(self) -> bool:
        return self.pump is PumpScheme.UNIFORM or self.nu == 0.0

    @property
    def f_min(self) -> float:
        """Most negative value of f on [0, 1]."""
        if self.is_uniform:
            return 0.0
        if self.pump is PumpScheme.DOUBLE:
            return 1.0 / math.cosh(self.nu / 2.0) - 1.0
        return math.expm1(-self.nu)

    def f(self, z):
        """Profile value at z in [0, 1] (scalar or ndarray)."""
        z = _checked_unit_coordinate(z)
        if self.is_uniform:
            return np.zeros_like(z) if isinstance(z, np.ndarray) else 0.0
        if self.pump is PumpScheme.DOUBLE:
            return np.cosh(self.nu * (z - 0.5)) / np.cosh(self.nu / 2.0) - 1.0
        return np.expm1(-self.nu * z)

    def df(self, z):
        """First derivative f'(z)."""
        z = _checked_unit_coordinate(z)
        if self.is_uniform:
            return np.zeros_like(z) if isinstance(z, np.ndarray) else 0.0
        if self.pump is PumpScheme.DOUBLE:
            return self.nu * np.sinh(self.nu * (z - 0.5)) / np.cosh(self.nu / 2.0)
        return -self.nu * np.exp(-self.nu * z)

    def d2f(self, z):
        """Second derivative f''(z); both closed forms satisfy f'' = nu^2 (f+1)."""
        z = _checked_unit_coordinate(z)
        if self.is_uniform:
            return np.zeros_like(z) if isinstance(z, np.ndarray) else 0.0
        return self.nu**2 * (self.f(z) + 1.0)


def profile_f(profile: GainProfile, z):
    """Return (f(z), f'(z)) for z in [0, 1]."""
    return profile.f(z), profile.df(z)


def _checked_unit_coordinate(z):
    arr = np.asarray(z, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"coordinate {z} outside the unit interval [0, 1]")
    return arr if arr.ndim else float(arr)


@dataclass(frozen=True)
class GainMedium:
    """A planar slab of doped host material with a two-level gain line.

    Parameters
    ----------
    n0 : real part of the host refractive index (> 1).
    lambda0 : gain-line resonance wavelength, nm.
    gamma_hat : damping ratio gamma/omega0 of the two-level line.
    alpha0 : resonance absorption coefficient, cm^-1.
    L : slab thickness, um.
    nu : pump decay constant L/ell (0 means uniform gain).
    g_star : net gain coefficient at the pumped face, cm^-1.  Population
        inversion caps it at ``alpha0``; negative values (net loss) are
        allowed for exploratory scans.
    pump : pumping scheme.
    """

    n0: float
    lambda0: float
    gamma_hat: float
    alpha0: float
    L: float
    nu: float
    g_star: float
    pump: PumpScheme = PumpScheme.DOUBLE

    def __post_init__(self):
        for name in ("n0", "lambda0", "gamma_hat", "alpha0", "L", "nu", "g_star"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite, got {getattr(self, name)}")
        if self.n0 <= 1.0:
            raise InvalidInputError(f"host index must exceed 1, got {self.n0}")
        if self.lambda0 <= 0 or self.gamma_hat <= 0 or self.alpha0 <= 0 or self.L <= 0:
            raise InvalidInputError("lambda0, gamma_hat, alpha0 and L must be positive")
        if self.nu < 0:
            raise InvalidInputError(f"decay constant must be >= 0, got {self.nu}")
        if self.g_star > self.alpha0:
            raise InvalidInputError(
                f"entry gain {self.g_star} cm^-1 exceeds the population-inversion "
                f"ceiling alpha0 = {self.alpha0} cm^-1"
            )

    # internal nanometer unit system
    @property
    def L_nm(self) -> float:
        return self.L * UM_TO_NM

    @property
    def alpha0_nm(self) -> float:
        return self.alpha0 * PER_CM_TO_PER_NM

    @property
    def g_star_nm(self) -> float:
        return self.g_star * PER_CM_TO_PER_NM

    @property
    def g_hat(self) -> float:
        """Normalized entry gain g*/alpha0, in (-inf, 1]."""
        return self.g_star / self.alpha0

    @property
    def K0(self) -> float:
        """Dimensionless wave number at the resonance frequency, 2 pi L / lambda0."""
        return 2.0 * math.pi * self.L_nm / self.lambda0

    @property
    def profile(self) -> GainProfile:
        return GainProfile(self.pump, self.nu)


def physical_gain(medium: GainMedium, z: float) -> float:
    """Net gain coefficient g0(z) in cm^-1 at position z (um, slab-centered).

    z runs over [-L/2, L/2]; the pumped face(s) carry the entry value g*.
    """
    half = 0.5 * medium.L
    if not -half <= z <= half:
        raise DomainError(f"z = {z} um outside the slab [-{half}, {half}] um")
    zu = z / medium.L  # in [-1/2, 1/2]
    nu = medium.nu
    if medium.pump is PumpScheme.UNIFORM or nu == 0.0:
        return medium.g_star
    if medium.pump is PumpScheme.DOUBLE:
        shape = math.cosh(nu * zu) / math.cosh(nu / 2.0)
    else:
        shape = math.exp(-nu * (zu + 0.5))
    return (medium.g_star + medium.alpha0) * shape - medium.alpha0


@dataclass(frozen=True)
class DimensionlessState:
    """Reduced parameters of the scattering problem at one frequency.

    ``K`` is the dimensionless wave number, ``t_hat`` the complex Lorentzian
    response, and (r, s, z1, z2) the derived potential couplings:
    v(z) = z1 + z2 f(z), r = sqrt(1 - z1/K^2), s = z2/(K^2 - z1).
    """

    omega_hat: float
    K: float
    t_hat: complex
    r: complex
    s: complex
    z1: complex
    z2: complex


def dimensionless_state(
    medium: GainMedium, omega_hat: float, g_star: float | None = None
) -> DimensionlessState:
    """Build the dimensionless parameter set at relative frequency omega_hat.

    ``g_star`` (cm^-1) overrides the medium's entry gain without the
    inversion-ceiling check; solvers use this to probe unphysical gain
    values while classifying roots.
    """
    if not (math.isfinite(omega_hat) and omega_hat > 0.0):
        raise InvalidInputError(f"omega_hat must be finite and > 0, got {omega_hat}")
    g_hat = medium.g_hat if g_star is None else g_star / medium.alpha0
    if not math.isfinite(g_hat):
        raise InvalidInputError(f"g_star must be finite, got {g_star}")

    lam_alpha = medium.lambda0 * medium.alpha0_nm  # dimensionless lambda0*alpha0
    K = omega_hat * medium.K0
    t_hat = (
        medium.gamma_hat
        * lam_alpha
        / (2.0 * math.pi * medium.n0 * (1.0 - omega_hat**2 - 1j * medium.gamma_hat * omega_hat))
    )
    r = medium.n0 * cmath.sqrt(1.0 - g_hat * t_hat)
    if r.real <= 0.0:
        # principal branch landed on the unphysical sheet; flip back
        log.warning("principal square root gave Re r <= 0; flipping sign (r = %s)", r)
        r = -r
    s = (1.0 + g_hat) * t_hat / (1.0 - g_hat * t_hat)
    z1 = K**2 * (medium.n0**2 * (g_hat * t_hat - 1.0) + 1.0)
    z2 = medium.n0**2 * K**2 * (g_hat + 1.0) * t_hat
    return DimensionlessState(omega_hat, K, t_hat, r, s, z1, z2)


SAMPLE_MEDIUM = GainMedium(
    n0=3.4, lambda0=1500.0, gamma_hat=0.02, alpha0=200.0,
    L=300.0, nu=0.1, g_star=50.0, pump=PumpScheme.DOUBLE,
)
"""Typical semiconductor slab used throughout the tests and as CLI default."""
