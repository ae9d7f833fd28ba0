"""Root finding for the coupled real system that locates spectral singularities.

The unknowns are (omega_hat, g_hat): both O(1), which keeps the
finite-difference Jacobian well conditioned even though the wave number is
O(1e3) and the gain coefficient O(1e2) in display units.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import perturbation
from .errors import (
    GainExceedsLossError,
    GainslabError,
    NoConvergenceError,
    NoRootAtZeroError,
    UnphysicalRootError,
)
from .medium import GainMedium, dimensionless_state
from .wkb import WkbContext, boundary_factor, phase_integral

TWO_PI = 2.0 * math.pi


class SolveMethod(Enum):
    WKB_NUMERIC = "WkbNumeric"
    PERTURB1 = "Perturb1"
    PERTURB2 = "Perturb2"


@dataclass(frozen=True)
class SpectralSingularity:
    """One lasing-threshold resonance.

    ``K`` is the dimensionless wave number, ``wavelength`` the vacuum
    wavelength in nm (= 2 pi L / K), ``g_star`` the entry gain in cm^-1 and
    ``residual`` the larger of the two equation residuals at the root.
    """

    m: int
    K: float
    wavelength: float
    g_star: float
    residual: float
    method: SolveMethod


@dataclass(frozen=True)
class SolveConfig:
    newton_tol: float = 1.0e-12
    max_iter: int = 60
    fd_step: float = 1.0e-7
    bisect_tol: float = 1.0e-8

    def __post_init__(self):
        if not (self.newton_tol > 0 and self.fd_step > 0 and self.bisect_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class SolveFailure:
    m: int
    nu: float
    reason: str
    kind: str  # "unphysical" or "numerical"


@dataclass(frozen=True)
class ReportEntry:
    nu: float
    result: SpectralSingularity
    ode_residual: float | None = None


@dataclass(frozen=True)
class SolveReport:
    """Result set of a scan or enumeration, ordered by (m, nu)."""

    entries: tuple[ReportEntry, ...]
    failures: tuple[SolveFailure, ...]
    wall_time_s: float = 0.0


@dataclass(frozen=True)
class SystemEval:
    """One evaluation of the coupled system plus the ingredients it used."""

    e1: float
    e2: float
    K: float
    E: complex
    rho: float
    sigma: float
    integral: complex


def system_eval(medium: GainMedium, omega_hat: float, g_hat: float, m: int) -> SystemEval:
    """Evaluate both residual equations at (omega_hat, g_hat) for mode m."""
    state = dimensionless_state(medium, omega_hat, g_star=g_hat * medium.alpha0)
    ctx = WkbContext.from_state(state, medium.profile)
    E = boundary_factor(ctx)
    integral = phase_integral(ctx)
    inv = 1.0 / (2.0 * state.r * integral)
    rho, sigma = inv.real, inv.imag
    ln_abs = math.log(abs(E))
    arg = math.atan2(E.imag, E.real)  # principal branch; m absorbs winding
    branch = TWO_PI * m + arg
    e1 = branch * rho + ln_abs * sigma - state.K
    e2 = branch * sigma - ln_abs * rho
    return SystemEval(e1, e2, state.K, E, rho, sigma, integral)


def residual_system(
    medium: GainMedium, omega_hat: float, g_star: float, m: int
) -> tuple[float, float]:
    """Residuals (e1, e2) of the two real mode equations; both vanish at a
    spectral singularity.  ``g_star`` is in cm^-1."""
    ev = system_eval(medium, omega_hat, g_star / medium.alpha0, m)
    return ev.e1, ev.e2


def mode_number_from_root(ev: SystemEval) -> int:
    """Invert the mode equation at a converged root to recover the integer branch."""
    ln_abs = math.log(abs(ev.E))
    arg = math.atan2(ev.E.imag, ev.E.real)
    return round(((ev.K - ln_abs * ev.sigma) / ev.rho - arg) / TWO_PI)


def solve_mode(
    medium: GainMedium,
    m: int,
    cfg: SolveConfig | None = None,
    seed: tuple[float, float] | None = None,
) -> SpectralSingularity:
    """Damped Newton solve of the coupled system for mode m.

    ``seed`` is (omega_hat, g_star cm^-1); when omitted the first-order
    perturbative prediction is used, with a coarse frequency scan as
    fallback.  Raises GainExceedsLossError when the converged root needs
    more gain than the absorption ceiling allows, NoConvergenceError when
    Newton stalls.
    """
    cfg = cfg or SolveConfig()
    if seed is not None:
        x = np.array([seed[0], seed[1] / medium.alpha0])
    else:
        x = np.array(perturbation.first_order_mode(medium, m))

    def fvec(p: np.ndarray) -> np.ndarray:
        ev = system_eval(medium, p[0], p[1], m)
        return np.array([ev.e1, ev.e2])

    x, res_norm, iters = _damped_newton(fvec, x, cfg)
    if not math.isfinite(res_norm):
        raise NoConvergenceError(f"mode {m}: residual not finite", iters, res_norm)

    ev = system_eval(medium, x[0], x[1], m)
    residual = max(abs(ev.e1), abs(ev.e2))
    if residual >= 1.0e-9 * ev.K:
        # one retry from a coarse scan over omega_hat before giving up
        x2 = _grid_seed(medium, m)
        if x2 is not None:
            x2, _, _ = _damped_newton(fvec, x2, cfg)
            ev2 = system_eval(medium, x2[0], x2[1], m)
            if max(abs(ev2.e1), abs(ev2.e2)) < residual:
                x, ev = x2, ev2
                residual = max(abs(ev.e1), abs(ev.e2))
        if residual >= 1.0e-9 * ev.K:
            raise NoConvergenceError(f"mode {m}: Newton stalled", iters, residual)

    omega_hat, g_hat = float(x[0]), float(x[1])
    m_back = mode_number_from_root(ev)
    if m_back != m:
        raise NoConvergenceError(
            f"mode {m}: iteration drifted to the mode-{m_back} root", iters, residual
        )
    if g_hat > 1.0:
        raise GainExceedsLossError(
            f"mode {m} requires g_hat = {g_hat:.6f} > 1 (gain above the absorption ceiling)",
            omega_hat, g_hat, residual,
        )
    if g_hat <= 0.0:
        raise UnphysicalRootError(
            f"mode {m} root has non-positive gain g_hat = {g_hat:.6f}",
            omega_hat, g_hat, residual,
        )
    return SpectralSingularity(
        m=m,
        K=ev.K,
        wavelength=2.0 * math.pi * medium.L_nm / ev.K,
        g_star=g_hat * medium.alpha0,
        residual=residual,
        method=SolveMethod.WKB_NUMERIC,
    )


def _damped_newton(fvec, x0: np.ndarray, cfg: SolveConfig) -> tuple[np.ndarray, float, int]:
    """Newton iteration with step halving and a few polish steps at the end.

    Returns the best iterate seen, its residual norm, and the iteration
    count.  The polish pushes the residual to its floating-point floor so
    the root certificates hold, even after the step-size criterion fires.
    """
    x = x0.astype(float).copy()
    f = fvec(x)
    best_x, best_norm = x.copy(), float(np.linalg.norm(f))
    it = 0
    polish_left = 3
    while it < cfg.max_iter:
        it += 1
        jac = _fd_jacobian(fvec, x, f, cfg.fd_step)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        f_norm = np.linalg.norm(f)
        accepted = False
        for _ in range(21):
            try:
                f_try = fvec(x + lam * step)
            except GainslabError:
                lam *= 0.5  # trial point left the admissible region
                continue
            if np.linalg.norm(f_try) < f_norm or lam <= 2.0**-20:
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            break
        x, f = x + lam * step, f_try
        norm = float(np.linalg.norm(f))
        if norm < best_norm:
            best_x, best_norm = x.copy(), norm
        rel_step = np.linalg.norm(lam * step) / max(np.linalg.norm(x), 1e-30)
        if rel_step < cfg.newton_tol:
            if polish_left == 0 or norm == 0.0:
                break
            polish_left -= 1
    return best_x, best_norm, it


def _fd_jacobian(fvec, x: np.ndarray, f0: np.ndarray, rel_step: float) -> np.ndarray:
    jac = np.empty((len(f0), len(x)))
    for j in range(len(x)):
        h = rel_step * max(abs(x[j]), 1.0e-2)
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (fvec(xp) - fvec(xm)) / (2.0 * h)
    return jac


def _grid_seed(medium: GainMedium, m: int) -> np.ndarray | None:
    """Coarse scan over omega_hat in [0.95, 1.05] minimizing |e1| + |e2|."""
    _, g_hat = perturbation.first_order_mode(medium, m)
    g_hat = min(max(g_hat, 0.05), 3.0)
    best, best_score = None, math.inf
    for omega in np.linspace(0.95, 1.05, 201):
        try:
            ev = system_eval(medium, omega, g_hat, m)
        except Exception:
            continue
        score = abs(ev.e1) + abs(ev.e2)
        if score < best_score:
            best, best_score = np.array([omega, g_hat]), score
    return best


def enumerate_modes(
    medium: GainMedium, m_lo: int, m_hi: int, cfg: SolveConfig | None = None
) -> SolveReport:
    """Solve every mode in [m_lo, m_hi], keeping the physical roots.

    Modes whose root needs gain above the absorption ceiling are recorded
    as unphysical failures, numerical breakdowns as numerical ones; neither
    aborts the sweep.
    """
    if m_lo > m_hi:
        raise ValueError(f"empty mode range [{m_lo}, {m_hi}]")
    cfg = cfg or SolveConfig()
    started = time.perf_counter()
    entries: list[ReportEntry] = []
    failures: list[SolveFailure] = []
    for m in range(m_lo, m_hi + 1):
        try:
            entries.append(ReportEntry(nu=medium.nu, result=solve_mode(medium, m, cfg)))
        except UnphysicalRootError as exc:  # includes GainExceedsLossError
            failures.append(SolveFailure(m, medium.nu, str(exc), "unphysical"))
        except Exception as exc:
            failures.append(SolveFailure(m, medium.nu, str(exc), "numerical"))
    entries.sort(key=lambda e: (e.result.m, e.nu))
    failures.sort(key=lambda f: (f.m, f.nu))
    return SolveReport(
        entries=tuple(entries),
        failures=tuple(failures),
        wall_time_s=time.perf_counter() - started,
    )


def critical_nu(medium: GainMedium, m: int, cfg: SolveConfig | None = None) -> float:
    """Largest decay constant at which mode m still lases, by bisection.

    The predicate is "the mode-m root exists with g_hat <= 1"; the gain
    required grows monotonically with nu, so a single sign change brackets
    the critical value.
    """
    cfg = cfg or SolveConfig()

    def admits(nu: float) -> bool:
        try:
            solve_mode(replace(medium, nu=nu), m, cfg)
        except GainExceedsLossError:
            return False
        except (UnphysicalRootError, NoConvergenceError):
            return False
        return True

    if not admits(0.0):
        raise NoRootAtZeroError(f"mode {m} has no physical root even at nu = 0")
    lo, hi = 0.0, 0.05
    while admits(hi):
        lo = hi
        hi *= 2.0
        if hi > 64.0:
            raise NoConvergenceError(
                f"mode {m}: no critical decay constant below nu = 64", 0, math.nan
            )
    while hi - lo > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        if admits(mid):
            lo = mid
        else:
            hi = mid
    return lo
