"""Exception hierarchy shared by all gainslab modules."""

from __future__ import annotations


class GainslabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(GainslabError, ValueError):
    """A physical parameter is non-finite or violates a construction invariant."""


class DomainError(GainslabError, ValueError):
    """A coordinate argument lies outside the slab."""


class TurningPointError(GainslabError):
    """The local wave number vanishes inside the slab; the semiclassical
    ansatz is invalid there and no branch continuation is attempted."""


class SingularConfigurationError(GainslabError):
    """A denominator of the boundary factor (or an equivalent closed form)
    vanishes for the requested parameters."""


class QuadratureError(GainslabError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved_tol: float):
        super().__init__(f"{message} (achieved tolerance {achieved_tol:.3e})")
        self.achieved_tol = achieved_tol


class IntegratorError(GainslabError):
    """The initial-value integrator failed (e.g. step-size underflow)."""


class NoConvergenceError(GainslabError):
    """Newton iteration did not converge."""

    def __init__(self, message: str, iterations: int, last_residual: float):
        super().__init__(
            f"{message} after {iterations} iterations "
            f"(last residual {last_residual:.3e})"
        )
        self.iterations = iterations
        self.last_residual = last_residual


class UnphysicalRootError(GainslabError):
    """Newton converged, but the root lies outside the physical gain window.

    Carries the converged (omega_hat, g_hat, residual) so callers such as
    the critical-decay search can still use the root location.
    """

    def __init__(self, message: str, omega_hat: float, g_hat: float, residual: float):
        super().__init__(message)
        self.omega_hat = omega_hat
        self.g_hat = g_hat
        self.residual = residual


class GainExceedsLossError(UnphysicalRootError):
    """The root exists only with an entry gain above the absorption ceiling."""


class NoRootAtZeroError(GainslabError):
    """The requested mode has no physical root even with uniform pumping."""


class ConfigError(GainslabError):
    """Command-line / config-file ingestion error."""
